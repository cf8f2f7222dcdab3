// SPDX-License-Identifier: Apache-2.0
#include "maestro/error.hpp"
#include "maestro/scheduler/worker_pool.hpp"

#include <gtest/gtest.h>

#include <atomic>

using namespace maestro;

namespace {

std::vector<ModalPayload> text(const std::string& s)
{
    return {ModalPayload::text(s)};
}

} // namespace

TEST(TaskQueue, PriorityThenFifo)
{
    TaskQueue q;
    auto low = q.enqueue(text("low"), 1);
    auto a = q.enqueue(text("a"), 7);
    auto b = q.enqueue(text("b"), 7);
    auto high = q.enqueue(text("high"), 9);
    std::vector<std::string> order;
    while (auto t = q.next_task())
        order.push_back(t->id);
    EXPECT_EQ(order, (std::vector<std::string> {high.id, a.id, b.id, low.id}));
}

TEST(TaskQueue, CompleteAndFailTransitions)
{
    TaskQueue q;
    auto t = q.enqueue(text("x"));
    try {
        q.complete(t.id);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotRunning);
    }
    q.next_task("agent");
    q.complete(t.id);
    EXPECT_EQ(q.get(t.id).status, TaskStatus::Done);
    try {
        q.get("nope");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownTask);
    }
}

TEST(TaskQueue, ParentDoneAfterAllChildren)
{
    TaskQueue q;
    auto parent = q.enqueue(text("batch"));
    auto kids = q.decompose(parent.id, {text("1"), text("2"), text("3")});
    ASSERT_EQ(kids.size(), 3u);
    EXPECT_EQ(q.get(parent.id).status, TaskStatus::Running);
    for (std::size_t i = 0; i < kids.size(); ++i) {
        auto t = q.next_task("a");
        ASSERT_TRUE(t);
        EXPECT_EQ(t->parent_id, parent.id);
        q.complete(t->id);
        EXPECT_EQ(q.get(parent.id).status, i + 1 == kids.size() ? TaskStatus::Done : TaskStatus::Running);
    }
}

TEST(TaskQueue, EnqueueBatchNeverExposesParent)
{
    TaskQueue q;
    auto [parent, kids] = q.enqueue_batch({text("1"), text("2")}, 7);
    EXPECT_EQ(parent.status, TaskStatus::Running);
    ASSERT_EQ(kids.size(), 2u);
    for (int i = 0; i < 2; ++i) {
        auto t = q.next_task("a");
        ASSERT_TRUE(t);
        EXPECT_EQ(t->parent_id, parent.id);
        EXPECT_EQ(t->priority, 7);
    }
    EXPECT_FALSE(q.next_task("a"));
    EXPECT_THROW(q.enqueue_batch({}, 5), Error);
}

TEST(TaskQueue, ChildFailureFailsParent)
{
    TaskQueue q;
    auto parent = q.enqueue(text("batch"));
    q.decompose(parent.id, {text("1"), text("2")});
    auto t = q.next_task("a");
    q.fail(t->id, "boom");
    EXPECT_EQ(q.get(parent.id).status, TaskStatus::Failed);
}

TEST(TaskQueue, OverCapacityReassignsNewestTask)
{
    TaskQueue q(SchedulerConfig {2, 3});
    q.register_agent("busy");
    q.register_agent("idle");
    for (int i = 0; i < 3; ++i)
        q.enqueue(text(std::to_string(i)));
    EXPECT_TRUE(q.next_task("busy"));
    EXPECT_TRUE(q.next_task("busy"));
    EXPECT_FALSE(q.next_task("busy"));
    EXPECT_EQ(q.in_flight("busy"), 2u);
    auto events = q.events();
    auto re = std::find_if(events.begin(), events.end(),
                           [](const SchedulerEvent& e) { return e.kind == SchedulerEvent::Kind::Reassigned; });
    ASSERT_NE(re, events.end());
    EXPECT_EQ(re->agent, "idle");
    EXPECT_EQ(q.metrics().reassigned, 1u);
    auto picked = q.next_task("idle");
    ASSERT_TRUE(picked);
    EXPECT_EQ(picked->id, re->task_id);
    EXPECT_EQ(picked->attempts, 2);
}

TEST(TaskQueue, MetricsCountTransitions)
{
    TaskQueue q;
    for (int i = 0; i < 4; ++i)
        q.enqueue(text("x"));
    auto a = q.next_task("a");
    auto b = q.next_task("a");
    q.complete(a->id);
    q.fail(b->id, "no");
    auto m = q.metrics();
    EXPECT_EQ(m.enqueued, 4u);
    EXPECT_EQ(m.started, 2u);
    EXPECT_EQ(m.completed, 1u);
    EXPECT_EQ(m.failed, 1u);
    EXPECT_EQ(m.depth, 2u);
    EXPECT_EQ(m.running, 0u);
}

TEST(WorkerPool, RunsEveryJob)
{
    auto q = std::make_shared<TaskQueue>();
    WorkerPool pool(q, 4);
    std::atomic<int> done {0};
    for (int i = 0; i < 50; ++i)
        pool.submit([&] { ++done; });
    pool.wait_idle();
    EXPECT_EQ(done.load(), 50);
    EXPECT_EQ(q->metrics().completed, 50u);
}

TEST(WorkerPool, BatchCompletesParent)
{
    auto q = std::make_shared<TaskQueue>();
    WorkerPool pool(q, 3);
    std::atomic<int> done {0};
    std::vector<WorkerPool::Job> jobs;
    for (int i = 0; i < 6; ++i)
        jobs.push_back([&] { ++done; });
    auto parent = pool.submit_batch(std::move(jobs), 8);
    pool.wait_idle();
    EXPECT_EQ(done.load(), 6);
    EXPECT_EQ(q->get(parent).status, TaskStatus::Done);
}

TEST(WorkerPool, ThrowingJobMarksTaskFailed)
{
    auto q = std::make_shared<TaskQueue>();
    WorkerPool pool(q, 1);
    auto id = pool.submit([] { throw std::runtime_error("bad"); });
    pool.wait_idle();
    EXPECT_EQ(q->get(id).status, TaskStatus::Failed);
}
