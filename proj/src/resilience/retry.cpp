// SPDX-License-Identifier: Apache-2.0
#include "maestro/resilience/retry.hpp"

#include <cmath>
#include <random>

namespace maestro {

Millis RetryPolicy::delay_after(int attempt) const
{
    double ms = static_cast<double>(base_delay.count()) * std::pow(factor, attempt - 1);
    if (jitter) {
        thread_local std::mt19937_64 rng {std::random_device {}()};
        ms *= std::uniform_real_distribution<double>(0.5, 1.0)(rng);
    }
    return Millis(static_cast<long long>(std::llround(ms)));
}

bool is_retryable(const Error& e)
{
    switch (e.code()) {
    case Errc::Timeout:
    case Errc::TransportError:
        return true;
    case Errc::ProviderError:
        return e.status() >= 500 && e.status() <= 599;
    default:
        return false;
    }
}

std::vector<Millis> planned_delays(const RetryPolicy& policy)
{
    std::vector<Millis> out;
    for (int i = 1; i < policy.max_attempts; ++i)
        out.push_back(policy.delay_after(i));
    return out;
}

} // namespace maestro
