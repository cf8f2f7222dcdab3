// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/clock.hpp"
#include "maestro/error.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace maestro {

struct RetryPolicy {
    int max_attempts = 3;
    Millis base_delay {100};
    double factor = 2.0;
    bool jitter = false; // off by default; deterministic schedules

    /// Delay before attempt i+1 (i is 1-based): base * factor^(i-1).
    Millis delay_after(int attempt) const;
};

/// Timeout, 5xx ProviderError and transport failures are retried; everything else fails fast.
bool is_retryable(const Error& e);

struct AttemptRecord {
    int attempt = 0;
    bool ok = false;
    std::string error; // Errc name plus detail
    Millis delay_before {0};
    Millis duration {0};
};

struct RetryObserver {
    std::function<void(const AttemptRecord&)> on_attempt;
};

/// Runs call until success, a non-retryable error, or max_attempts. Rethrows the last error.
template <typename F>
auto with_retry(const RetryPolicy& policy, Clock& clock, F&& call, const RetryObserver& obs = {})
    -> decltype(call(1));

std::vector<Millis> planned_delays(const RetryPolicy& policy);

// Implementation

template <typename F>
auto with_retry(const RetryPolicy& policy, Clock& clock, F&& call, const RetryObserver& obs) -> decltype(call(1))
{
    const int max = policy.max_attempts < 1 ? 1 : policy.max_attempts;
    Millis delay {0};
    for (int attempt = 1;; ++attempt) {
        if (attempt > 1) {
            delay = policy.delay_after(attempt - 1);
            clock.sleep_for(delay);
        }
        const auto started = clock.now();
        try {
            auto result = call(attempt);
            if (obs.on_attempt)
                obs.on_attempt({attempt, true, {}, delay, clock.now() - started});
            return result;
        } catch (const Error& e) {
            if (obs.on_attempt)
                obs.on_attempt({attempt, false, e.what(), delay, clock.now() - started});
            if (attempt >= max || !is_retryable(e))
                throw;
        }
    }
}

} // namespace maestro
