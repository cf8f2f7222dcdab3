// SPDX-License-Identifier: Apache-2.0
#include "maestro/scheduler/worker_pool.hpp"

#include "maestro/error.hpp"

namespace maestro {

WorkerPool::WorkerPool(std::shared_ptr<TaskQueue> queue, std::size_t threads) : queue_(std::move(queue))
{
    if (!queue_)
        queue_ = std::make_shared<TaskQueue>();
    if (threads == 0)
        threads = 1;
    for (std::size_t i = 0; i < threads; ++i)
        queue_->register_agent("pool-" + std::to_string(i));
    for (std::size_t i = 0; i < threads; ++i)
        threads_.emplace_back([this, i] { run(i); });
}

WorkerPool::~WorkerPool()
{
    stop();
}

std::string WorkerPool::submit(Job job, int priority)
{
    std::lock_guard lock(jobs_mutex_);
    auto task = queue_->enqueue({}, priority);
    jobs_.emplace(task.id, std::move(job));
    ++outstanding_;
    return task.id;
}

std::string WorkerPool::submit_batch(std::vector<Job> jobs, int priority)
{
    if (jobs.empty())
        throw Error(Errc::InvalidParams, "empty batch");
    std::lock_guard lock(jobs_mutex_);
    auto [parent, children] = queue_->enqueue_batch(std::vector<std::vector<ModalPayload>>(jobs.size()), priority);
    for (std::size_t i = 0; i < children.size(); ++i) {
        jobs_.emplace(children[i].id, std::move(jobs[i]));
        ++outstanding_;
    }
    return parent.id;
}

void WorkerPool::run(std::size_t index)
{
    const std::string agent = "pool-" + std::to_string(index);
    while (!stopping_) {
        auto task = queue_->wait_next(agent, Millis(100));
        if (!task)
            continue;
        Job job;
        {
            std::lock_guard lock(jobs_mutex_);
            auto it = jobs_.find(task->id);
            if (it != jobs_.end()) {
                job = std::move(it->second);
                jobs_.erase(it);
            }
        }
        try {
            if (job)
                job();
            queue_->complete(task->id);
        } catch (const std::exception& e) {
            queue_->fail(task->id, e.what());
        }
        {
            std::lock_guard lock(jobs_mutex_);
            --outstanding_;
        }
        idle_cv_.notify_all();
    }
}

void WorkerPool::wait_idle()
{
    std::unique_lock lock(jobs_mutex_);
    idle_cv_.wait(lock, [&] { return outstanding_ == 0; });
}

void WorkerPool::stop()
{
    if (stopping_.exchange(true))
        return;
    queue_->notify_all();
    for (auto& t : threads_)
        if (t.joinable())
            t.join();
}

} // namespace maestro
