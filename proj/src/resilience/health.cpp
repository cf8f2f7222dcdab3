// SPDX-License-Identifier: Apache-2.0
#include "maestro/resilience/health.hpp"

namespace maestro {

HealthMonitor::HealthMonitor(Clock& clock, Millis window, std::size_t threshold)
    : clock_(clock), window_(window), threshold_(threshold == 0 ? 1 : threshold)
{
}

void HealthMonitor::prune_locked(Signal& s, Millis now)
{
    while (!s.failures.empty() && now - s.failures.front() >= window_)
        s.failures.pop_front();
    if (s.failures.size() < threshold_)
        s.armed = true;
}

std::optional<Alert> HealthMonitor::record_failure(const std::string& binding)
{
    std::lock_guard lock(mutex_);
    const auto now = clock_.now();
    auto& s = signals_[binding];
    prune_locked(s, now);
    s.failures.push_back(now);
    ++s.total;
    if (s.armed && s.failures.size() >= threshold_) {
        s.armed = false;
        ++alerts_;
        return Alert {binding, s.failures.size(), now};
    }
    return std::nullopt;
}

std::size_t HealthMonitor::failure_count(const std::string& binding)
{
    std::lock_guard lock(mutex_);
    auto& s = signals_[binding];
    prune_locked(s, clock_.now());
    return s.failures.size();
}

std::uint64_t HealthMonitor::alerts_total() const
{
    std::lock_guard lock(mutex_);
    return alerts_;
}

std::map<std::string, std::uint64_t> HealthMonitor::failures_total() const
{
    std::lock_guard lock(mutex_);
    std::map<std::string, std::uint64_t> out;
    for (const auto& [k, s] : signals_)
        out[k] = s.total;
    return out;
}

} // namespace maestro
