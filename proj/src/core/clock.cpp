// SPDX-License-Identifier: Apache-2.0
#include "maestro/core/clock.hpp"

#include <ctime>
#include <thread>

namespace maestro {

Millis SystemClock::now() const
{
    return std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now().time_since_epoch());
}

void SystemClock::sleep_for(Millis d)
{
    std::this_thread::sleep_for(d);
}

Clock& system_clock()
{
    static SystemClock clock;
    return clock;
}

std::string utc_now_iso()
{
    const auto now = std::chrono::system_clock::now();
    const auto secs = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<Millis>(now.time_since_epoch()).count() % 1000;
    std::tm tm {};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[40];
    std::snprintf(out, sizeof out, "%s.%03lldZ", buf, static_cast<long long>(ms));
    return out;
}

} // namespace maestro
