// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <string>

namespace maestro {

using Millis = std::chrono::milliseconds;

/// Monotonic time source plus sleeping, injectable so retry and polling
/// schedules can run on virtual time in tests.
class Clock {
public:
    virtual ~Clock() = default;
    virtual Millis now() const = 0;
    virtual void sleep_for(Millis d) = 0;
};

class SystemClock final : public Clock {
public:
    Millis now() const override;
    void sleep_for(Millis d) override;
};

/// Virtual clock: sleep_for advances time instantly.
class ManualClock final : public Clock {
public:
    Millis now() const override { return Millis(now_ms_.load()); }
    void sleep_for(Millis d) override { now_ms_ += d.count(); }
    void advance(Millis d) { now_ms_ += d.count(); }

private:
    std::atomic<long long> now_ms_ {0};
};

Clock& system_clock();

/// ISO-8601 UTC with millisecond precision, e.g. 2024-05-01T12:00:00.000Z.
std::string utc_now_iso();

} // namespace maestro
