// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/clock.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace maestro {

struct Alert {
    std::string binding;
    std::size_t count = 0; // failures in the window at the crossing
    Millis at {0};
};

/// Rolling failure counts per binding. An alert fires once when the count
/// reaches the threshold and re-arms only after the count falls below it.
class HealthMonitor {
public:
    explicit HealthMonitor(Clock& clock, Millis window = Millis(60'000), std::size_t threshold = 5);

    std::optional<Alert> record_failure(const std::string& binding);
    std::size_t failure_count(const std::string& binding);

    std::uint64_t alerts_total() const;
    std::map<std::string, std::uint64_t> failures_total() const;

    std::size_t threshold() const { return threshold_; }

private:
    struct Signal {
        std::deque<Millis> failures;
        bool armed = true;
        std::uint64_t total = 0;
    };

    void prune_locked(Signal& s, Millis now);

    Clock& clock_;
    Millis window_;
    std::size_t threshold_;
    mutable std::mutex mutex_;
    std::map<std::string, Signal> signals_;
    std::uint64_t alerts_ = 0;
};

} // namespace maestro
