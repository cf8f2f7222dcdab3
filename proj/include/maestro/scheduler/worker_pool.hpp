// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/scheduler/task_queue.hpp"

#include <atomic>
#include <functional>
#include <memory>
#include <thread>
#include <vector>

namespace maestro {

/// Fixed set of threads draining a TaskQueue. Each thread is an agent named
/// "pool-<i>"; jobs are keyed by task id.
class WorkerPool {
public:
    using Job = std::function<void()>;

    WorkerPool(std::shared_ptr<TaskQueue> queue, std::size_t threads);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::string submit(Job job, int priority = kDefaultPriority);

    /// Enqueues a parent task decomposed into one child per job; returns the parent id.
    std::string submit_batch(std::vector<Job> jobs, int priority = kDefaultPriority);

    /// Blocks until no job is queued or running.
    void wait_idle();
    void stop();

    TaskQueue& queue() { return *queue_; }

private:
    void run(std::size_t index);

    std::shared_ptr<TaskQueue> queue_;
    std::vector<std::thread> threads_;
    std::atomic<bool> stopping_ {false};

    std::mutex jobs_mutex_;
    std::condition_variable idle_cv_;
    std::map<std::string, Job> jobs_;
    std::size_t outstanding_ = 0;
};

} // namespace maestro
