// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/clock.hpp"
#include "maestro/core/payload.hpp"

#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace maestro {

enum class TaskStatus { Pending, Running, Done, Failed, Reassigned };

std::string_view to_string(TaskStatus s);

inline constexpr int kMinPriority = 0;
inline constexpr int kMaxPriority = 9;
inline constexpr int kDefaultPriority = 5;

struct Task {
    std::string id;
    std::optional<std::string> parent_id;
    int priority = kDefaultPriority;
    TaskStatus status = TaskStatus::Pending;
    std::optional<std::string> assigned_agent;
    int attempts = 0;
    std::vector<ModalPayload> payload;
    std::uint64_t enqueue_seq = 0;
};

struct SchedulerEvent {
    enum class Kind { Enqueued, Started, Reassigned, Done, Failed };
    Kind kind;
    std::string task_id;
    std::string agent;  // assignee, or target agent for Reassigned
    std::string reason;
};

struct QueueMetrics {
    std::uint64_t enqueued = 0;
    std::uint64_t started = 0;
    std::uint64_t completed = 0;
    std::uint64_t failed = 0;
    std::uint64_t reassigned = 0;
    std::uint64_t depth = 0;
    std::uint64_t running = 0;
};

struct SchedulerConfig {
    std::size_t capacity = 4; // in-flight tasks per agent before reassignment
    int max_attempts = 3;
};

/// Priority queue ordered by (priority desc, enqueue_seq asc), plus the task
/// table behind it. All transitions happen under one lock.
class TaskQueue {
public:
    explicit TaskQueue(SchedulerConfig config = {});

    Task enqueue(std::vector<ModalPayload> payload, int priority = kDefaultPriority);

    /// Splits a Pending task into one Pending child per part; the parent turns
    /// Running until every child is Done.
    std::vector<Task> decompose(const std::string& task_id, const std::vector<std::vector<ModalPayload>>& parts);
    /// Enqueue plus decompose under one lock, so no agent can claim the parent in between.
    std::pair<Task, std::vector<Task>> enqueue_batch(const std::vector<std::vector<ModalPayload>>& parts,
                                                     int priority = kDefaultPriority);

    /// Pops the best Pending task and marks it Running for `agent`. If that
    /// pushes the agent over capacity its newest task is reassigned, and
    /// nullopt is returned when that was the task just popped.
    std::optional<Task> next_task(const std::optional<std::string>& agent = std::nullopt);
    std::optional<Task> wait_next(const std::optional<std::string>& agent, Millis timeout);

    Task reassign(const std::string& task_id, const std::string& to_agent, const std::string& reason);
    void complete(const std::string& task_id);
    void fail(const std::string& task_id, const std::string& reason);

    void register_agent(const std::string& agent);

    Task get(const std::string& task_id) const;
    std::size_t in_flight(const std::string& agent) const;
    QueueMetrics metrics() const;
    std::vector<SchedulerEvent> events() const;

    /// Wakes blocked wait_next callers (used on shutdown).
    void notify_all();

private:
    using Order = std::pair<std::pair<int, std::uint64_t>, std::string>;

    Task& find_locked(const std::string& task_id);
    Task enqueue_locked(std::vector<ModalPayload> payload, int priority);
    std::vector<Task> decompose_locked(Task& parent, const std::vector<std::vector<ModalPayload>>& parts);
    Order order_of(const Task& t) const { return {{-t.priority, t.enqueue_seq}, t.id}; }
    std::string new_id_locked();
    void finish_child_locked(const Task& child);
    Task reassign_locked(Task& task, const std::string& to_agent, const std::string& reason);
    std::optional<std::string> least_loaded_other_locked(const std::string& agent) const;

    SchedulerConfig config_;
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::map<std::string, Task> tasks_;
    std::set<Order> pending_;
    std::map<std::string, std::vector<std::string>> running_by_agent_; // assignment order
    std::set<std::string> agents_;
    std::vector<SchedulerEvent> events_;
    std::uint64_t next_seq_ = 1;
    std::uint64_t next_id_ = 1;
    QueueMetrics metrics_;
};

} // namespace maestro
