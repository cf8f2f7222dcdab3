// SPDX-License-Identifier: Apache-2.0
#include "maestro/scheduler/task_queue.hpp"

#include "maestro/error.hpp"

#include <algorithm>

namespace maestro {

std::string_view to_string(TaskStatus s)
{
    switch (s) {
    case TaskStatus::Pending: return "pending";
    case TaskStatus::Running: return "running";
    case TaskStatus::Done: return "done";
    case TaskStatus::Failed: return "failed";
    case TaskStatus::Reassigned: return "reassigned";
    }
    return "pending";
}

TaskQueue::TaskQueue(SchedulerConfig config) : config_(config) {}

std::string TaskQueue::new_id_locked()
{
    return "task-" + std::to_string(next_id_++);
}

Task& TaskQueue::find_locked(const std::string& task_id)
{
    auto it = tasks_.find(task_id);
    if (it == tasks_.end())
        throw Error(Errc::UnknownTask, task_id);
    return it->second;
}

Task TaskQueue::enqueue_locked(std::vector<ModalPayload> payload, int priority)
{
    if (priority < kMinPriority || priority > kMaxPriority)
        throw Error(Errc::InvalidParams, "priority must be within 0..9");
    Task t;
    t.id = new_id_locked();
    t.priority = priority;
    t.payload = std::move(payload);
    t.enqueue_seq = next_seq_++;
    pending_.insert(order_of(t));
    events_.push_back({SchedulerEvent::Kind::Enqueued, t.id, {}, {}});
    ++metrics_.enqueued;
    Task copy = t;
    tasks_.emplace(t.id, std::move(t));
    return copy;
}

Task TaskQueue::enqueue(std::vector<ModalPayload> payload, int priority)
{
    Task copy;
    {
        std::lock_guard lock(mutex_);
        copy = enqueue_locked(std::move(payload), priority);
    }
    cv_.notify_one();
    return copy;
}

std::vector<Task> TaskQueue::decompose_locked(Task& parent, const std::vector<std::vector<ModalPayload>>& parts)
{
    if (parent.status != TaskStatus::Pending)
        throw Error(Errc::AlreadyRunning, parent.id);
    pending_.erase(order_of(parent));
    parent.status = TaskStatus::Running;
    std::vector<Task> children;
    for (const auto& part : parts) {
        Task c;
        c.id = new_id_locked();
        c.parent_id = parent.id;
        c.priority = parent.priority;
        c.payload = part;
        c.enqueue_seq = next_seq_++;
        pending_.insert(order_of(c));
        events_.push_back({SchedulerEvent::Kind::Enqueued, c.id, {}, "child of " + parent.id});
        ++metrics_.enqueued;
        children.push_back(c);
        tasks_.emplace(c.id, std::move(c));
    }
    return children;
}

std::vector<Task> TaskQueue::decompose(const std::string& task_id,
                                       const std::vector<std::vector<ModalPayload>>& parts)
{
    if (parts.empty())
        throw Error(Errc::InvalidParams, "decompose needs at least one part");
    std::vector<Task> children;
    {
        std::lock_guard lock(mutex_);
        children = decompose_locked(find_locked(task_id), parts);
    }
    cv_.notify_all();
    return children;
}

std::pair<Task, std::vector<Task>> TaskQueue::enqueue_batch(const std::vector<std::vector<ModalPayload>>& parts,
                                                            int priority)
{
    if (parts.empty())
        throw Error(Errc::InvalidParams, "decompose needs at least one part");
    std::pair<Task, std::vector<Task>> out;
    {
        std::lock_guard lock(mutex_);
        const auto parent = enqueue_locked({}, priority);
        auto& stored = find_locked(parent.id);
        out.second = decompose_locked(stored, parts);
        out.first = stored;
    }
    cv_.notify_all();
    return out;
}

std::optional<std::string> TaskQueue::least_loaded_other_locked(const std::string& agent) const
{
    std::optional<std::string> best;
    std::size_t best_load = 0;
    for (const auto& a : agents_) {
        if (a == agent)
            continue;
        auto it = running_by_agent_.find(a);
        const std::size_t load = it == running_by_agent_.end() ? 0 : it->second.size();
        if (!best || load < best_load) {
            best = a;
            best_load = load;
        }
    }
    return best;
}

std::optional<Task> TaskQueue::next_task(const std::optional<std::string>& agent)
{
    std::lock_guard lock(mutex_);
    if (pending_.empty())
        return std::nullopt;
    auto first = pending_.begin();
    auto& task = find_locked(first->second);
    pending_.erase(first);
    task.status = TaskStatus::Running;
    task.assigned_agent = agent;
    ++task.attempts;
    ++metrics_.started;
    events_.push_back({SchedulerEvent::Kind::Started, task.id, agent.value_or(""), {}});

    if (!agent)
        return task;

    auto& running = running_by_agent_[*agent];
    running.push_back(task.id);
    if (running.size() <= config_.capacity)
        return task;

    auto& newest = find_locked(running.back());
    const auto target = least_loaded_other_locked(*agent).value_or("");
    reassign_locked(newest, target,
                    "agent " + *agent + " over capacity " + std::to_string(config_.capacity));
    if (newest.id == task.id)
        return std::nullopt;
    return task;
}

std::optional<Task> TaskQueue::wait_next(const std::optional<std::string>& agent, Millis timeout)
{
    {
        std::unique_lock lock(mutex_);
        cv_.wait_for(lock, timeout, [&] { return !pending_.empty(); });
    }
    return next_task(agent);
}

Task TaskQueue::reassign_locked(Task& task, const std::string& to_agent, const std::string& reason)
{
    if (task.assigned_agent) {
        auto& running = running_by_agent_[*task.assigned_agent];
        running.erase(std::remove(running.begin(), running.end(), task.id), running.end());
    }
    task.status = TaskStatus::Reassigned;
    events_.push_back({SchedulerEvent::Kind::Reassigned, task.id, to_agent, reason});
    ++metrics_.reassigned;
    // Original enqueue_seq is kept so the task does not lose its place.
    task.assigned_agent.reset();
    task.status = TaskStatus::Pending;
    pending_.insert(order_of(task));
    cv_.notify_one();
    return task;
}

Task TaskQueue::reassign(const std::string& task_id, const std::string& to_agent, const std::string& reason)
{
    std::lock_guard lock(mutex_);
    auto& task = find_locked(task_id);
    if (task.status != TaskStatus::Running)
        throw Error(Errc::NotRunning, task_id);
    if (task.assigned_agent && *task.assigned_agent == to_agent)
        throw Error(Errc::InvalidParams, "task already assigned to " + to_agent);
    return reassign_locked(task, to_agent, reason);
}

void TaskQueue::finish_child_locked(const Task& child)
{
    if (!child.parent_id)
        return;
    auto& parent = find_locked(*child.parent_id);
    if (parent.status != TaskStatus::Running)
        return;
    if (child.status == TaskStatus::Failed) {
        parent.status = TaskStatus::Failed;
        events_.push_back({SchedulerEvent::Kind::Failed, parent.id, {}, "child " + child.id + " failed"});
        ++metrics_.failed;
        finish_child_locked(parent);
        return;
    }
    const bool all_done = std::all_of(tasks_.begin(), tasks_.end(), [&](const auto& kv) {
        return kv.second.parent_id != parent.id || kv.second.status == TaskStatus::Done;
    });
    if (all_done) {
        parent.status = TaskStatus::Done;
        events_.push_back({SchedulerEvent::Kind::Done, parent.id, {}, {}});
        ++metrics_.completed;
        finish_child_locked(parent);
    }
}

void TaskQueue::complete(const std::string& task_id)
{
    std::lock_guard lock(mutex_);
    auto& task = find_locked(task_id);
    if (task.status != TaskStatus::Running)
        throw Error(Errc::NotRunning, task_id);
    if (task.assigned_agent) {
        auto& running = running_by_agent_[*task.assigned_agent];
        running.erase(std::remove(running.begin(), running.end(), task.id), running.end());
    }
    task.status = TaskStatus::Done;
    events_.push_back({SchedulerEvent::Kind::Done, task.id, task.assigned_agent.value_or(""), {}});
    ++metrics_.completed;
    finish_child_locked(task);
}

void TaskQueue::fail(const std::string& task_id, const std::string& reason)
{
    std::lock_guard lock(mutex_);
    auto& task = find_locked(task_id);
    if (task.status != TaskStatus::Running)
        throw Error(Errc::NotRunning, task_id);
    if (task.assigned_agent) {
        auto& running = running_by_agent_[*task.assigned_agent];
        running.erase(std::remove(running.begin(), running.end(), task.id), running.end());
    }
    task.status = TaskStatus::Failed;
    events_.push_back({SchedulerEvent::Kind::Failed, task.id, task.assigned_agent.value_or(""), reason});
    ++metrics_.failed;
    finish_child_locked(task);
}

void TaskQueue::register_agent(const std::string& agent)
{
    std::lock_guard lock(mutex_);
    agents_.insert(agent);
}

Task TaskQueue::get(const std::string& task_id) const
{
    std::lock_guard lock(mutex_);
    auto it = tasks_.find(task_id);
    if (it == tasks_.end())
        throw Error(Errc::UnknownTask, task_id);
    return it->second;
}

std::size_t TaskQueue::in_flight(const std::string& agent) const
{
    std::lock_guard lock(mutex_);
    auto it = running_by_agent_.find(agent);
    return it == running_by_agent_.end() ? 0 : it->second.size();
}

QueueMetrics TaskQueue::metrics() const
{
    std::lock_guard lock(mutex_);
    auto m = metrics_;
    m.depth = pending_.size();
    m.running = static_cast<std::uint64_t>(std::count_if(
        tasks_.begin(), tasks_.end(), [](const auto& kv) { return kv.second.status == TaskStatus::Running; }));
    return m;
}

std::vector<SchedulerEvent> TaskQueue::events() const
{
    std::lock_guard lock(mutex_);
    return events_;
}

void TaskQueue::notify_all()
{
    cv_.notify_all();
}

} // namespace maestro
