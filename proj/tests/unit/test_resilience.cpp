// SPDX-License-Identifier: Apache-2.0
#include "maestro/resilience/fallback.hpp"
#include "maestro/resilience/health.hpp"
#include "maestro/resilience/retry.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace maestro;
using maestro::test::chat_request;
using maestro::test::ScriptedBackend;

TEST(Retry, PlannedDelays)
{
    RetryPolicy p;
    EXPECT_EQ(planned_delays(p), (std::vector<Millis> {Millis(100), Millis(200)}));
    p.max_attempts = 5;
    p.base_delay = Millis(50);
    p.factor = 3.0;
    EXPECT_EQ(planned_delays(p), (std::vector<Millis> {Millis(50), Millis(150), Millis(450), Millis(1350)}));
}

TEST(Retry, FailFailSucceed)
{
    ManualClock clock;
    int calls = 0;
    std::vector<AttemptRecord> records;
    RetryObserver obs;
    obs.on_attempt = [&](const AttemptRecord& r) { records.push_back(r); };
    auto result = with_retry(
        RetryPolicy {}, clock,
        [&](int attempt) {
            ++calls;
            if (attempt < 3)
                throw Error(Errc::Timeout, "slow");
            return std::string("ok");
        },
        obs);
    EXPECT_EQ(result, "ok");
    EXPECT_EQ(calls, 3);
    ASSERT_EQ(records.size(), 3u);
    EXPECT_EQ(records[1].delay_before, Millis(100));
    EXPECT_EQ(records[2].delay_before, Millis(200));
    EXPECT_FALSE(records[0].ok);
    EXPECT_TRUE(records[2].ok);
    EXPECT_EQ(clock.now(), Millis(300));
}

TEST(Retry, NonRetryableFailsImmediately)
{
    ManualClock clock;
    int calls = 0;
    EXPECT_THROW(with_retry(RetryPolicy {}, clock,
                            [&](int) -> int {
                                ++calls;
                                throw Error(Errc::AuthError, "denied");
                            }),
                 Error);
    EXPECT_EQ(calls, 1);
    EXPECT_EQ(clock.now(), Millis(0));
}

TEST(Retry, ExhaustionRethrowsLastError)
{
    ManualClock clock;
    int calls = 0;
    try {
        with_retry(RetryPolicy {}, clock, [&](int) -> int {
            ++calls;
            throw Error(Errc::ProviderError, "down", 502);
        });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ProviderError);
    }
    EXPECT_EQ(calls, 3);
}

TEST(Health, AlertFiresOnceAtThreshold)
{
    ManualClock clock;
    HealthMonitor h(clock);
    std::vector<Alert> alerts;
    for (int i = 0; i < 9; ++i) {
        if (auto a = h.record_failure("sd"))
            alerts.push_back(*a);
        clock.advance(Millis(1000));
    }
    ASSERT_EQ(alerts.size(), 1u);
    EXPECT_EQ(alerts[0].count, 5u);
    EXPECT_EQ(alerts[0].binding, "sd");
    EXPECT_EQ(alerts[0].at, Millis(4000));
    EXPECT_EQ(h.alerts_total(), 1u);
    EXPECT_EQ(h.failures_total().at("sd"), 9u);
}

TEST(Health, WindowExpiryReArms)
{
    ManualClock clock;
    HealthMonitor h(clock, Millis(60'000), 5);
    int alerts = 0;
    for (int i = 0; i < 5; ++i)
        alerts += h.record_failure("x") ? 1 : 0;
    EXPECT_EQ(alerts, 1);
    clock.advance(Millis(61'000));
    EXPECT_EQ(h.failure_count("x"), 0u);
    for (int i = 0; i < 5; ++i)
        alerts += h.record_failure("x") ? 1 : 0;
    EXPECT_EQ(alerts, 2);
}

TEST(Health, FailuresSpreadBeyondWindowNeverAlert)
{
    ManualClock clock;
    HealthMonitor h(clock);
    for (int i = 0; i < 20; ++i) {
        EXPECT_FALSE(h.record_failure("y"));
        clock.advance(Millis(15'001));
    }
}

TEST(Health, BindingsAreIndependent)
{
    ManualClock clock;
    HealthMonitor h(clock);
    for (int i = 0; i < 4; ++i) {
        EXPECT_FALSE(h.record_failure("a"));
        EXPECT_FALSE(h.record_failure("b"));
    }
    EXPECT_TRUE(h.record_failure("a"));
    EXPECT_TRUE(h.record_failure("b"));
}

TEST(Fallback, HealthyPrimaryOnly)
{
    ManualClock clock;
    auto primary = std::make_shared<ScriptedBackend>("p", std::vector {ScriptedBackend::ok("fine")});
    auto alt = std::make_shared<ScriptedBackend>("alt", std::vector {ScriptedBackend::ok("alt")});
    int fallbacks = 0;
    ResilienceHooks hooks;
    hooks.on_fallback = [&](const std::string&, const std::string&) { ++fallbacks; };
    auto r = route_with_fallback({primary, alt, std::nullopt}, chat_request("q"), clock, nullptr, nullptr, {}, hooks);
    EXPECT_EQ(r.text, "fine");
    EXPECT_EQ(fallbacks, 0);
    EXPECT_EQ(alt->calls(), 0u);
}

TEST(Fallback, PrimaryExhaustedBeforeAlternate)
{
    ManualClock clock;
    HealthMonitor health(clock);
    auto primary = std::make_shared<ScriptedBackend>("p", std::vector {ScriptedBackend::fail(Errc::Timeout)});
    auto alt = std::make_shared<ScriptedBackend>("alt", std::vector {ScriptedBackend::ok("from alternate")});
    std::vector<std::string> order;
    ResilienceHooks hooks;
    hooks.on_attempt = [&](const std::string& b, const AttemptRecord& r) {
        order.push_back(b + (r.ok ? ":ok" : ":fail"));
    };
    hooks.on_fallback = [&](const std::string& from, const std::string& to) { order.push_back(from + "->" + to); };
    auto r = route_with_fallback({primary, alt, std::string("degraded")}, chat_request("q"), clock, &health, nullptr,
                                 {}, hooks);
    EXPECT_EQ(r.text, "from alternate");
    EXPECT_FALSE(r.degraded);
    EXPECT_EQ(order, (std::vector<std::string> {"p:fail", "p:fail", "p:fail", "p->alt", "alt:ok"}));
    EXPECT_EQ(health.failure_count("p"), 3u);
}

TEST(Fallback, DegradesAfterBothExhausted)
{
    ManualClock clock;
    auto primary = std::make_shared<ScriptedBackend>("p", std::vector {ScriptedBackend::fail(Errc::Timeout)});
    auto alt = std::make_shared<ScriptedBackend>("alt", std::vector {ScriptedBackend::fail(Errc::ProviderError, 503)});
    auto r = route_with_fallback(
        {primary, alt, std::string("{binding} is unavailable ({error}); performance is gradually reduced")},
        chat_request("q"), clock);
    EXPECT_TRUE(r.degraded);
    EXPECT_EQ(r.text, "p is unavailable (ProviderError); performance is gradually reduced");
    EXPECT_EQ(primary->calls(), 3u);
    EXPECT_EQ(alt->calls(), 3u);
}

TEST(Fallback, NoDegradationRethrows)
{
    ManualClock clock;
    auto primary = std::make_shared<ScriptedBackend>("p", std::vector {ScriptedBackend::fail(Errc::AuthError)});
    try {
        route_with_fallback({primary, nullptr, std::nullopt}, chat_request("q"), clock);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::AuthError);
    }
    EXPECT_EQ(primary->calls(), 1u);
}

TEST(Fallback, AlternateMustDiffer)
{
    ManualClock clock;
    auto primary = std::make_shared<ScriptedBackend>("p", std::vector {ScriptedBackend::ok("x")});
    EXPECT_THROW(route_with_fallback({primary, primary, std::nullopt}, chat_request("q"), clock), Error);
}

TEST(Fallback, FifthFailureAlertsThroughHooks)
{
    ManualClock clock;
    HealthMonitor health(clock);
    auto primary = std::make_shared<ScriptedBackend>("p", std::vector {ScriptedBackend::fail(Errc::Timeout)});
    int alerts = 0;
    ResilienceHooks hooks;
    hooks.on_alert = [&](const Alert& a) {
        ++alerts;
        EXPECT_EQ(a.count, 5u);
    };
    for (int i = 0; i < 2; ++i)
        EXPECT_THROW(route_with_fallback({primary, nullptr, std::nullopt}, chat_request("q"), clock, &health, nullptr,
                                         {}, hooks),
                     Error);
    EXPECT_EQ(primary->calls(), 6u);
    EXPECT_EQ(alerts, 1);
}
