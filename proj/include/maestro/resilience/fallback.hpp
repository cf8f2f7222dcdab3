// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/backend/backend.hpp"
#include "maestro/resilience/health.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <semaphore>

namespace maestro {

struct FallbackRoute {
    std::shared_ptr<Backend> primary;
    std::shared_ptr<Backend> alternate;     // optional
    std::optional<std::string> degradation; // template over {binding} and {error}
};

struct ResilienceHooks {
    std::function<void(const std::string& binding, const AttemptRecord&)> on_attempt;
    std::function<void(const Alert&)> on_alert;
    std::function<void(const std::string& from, const std::string& to)> on_fallback;
};

/// Caps concurrent calls per binding; callers beyond the cap queue.
class BindingLimiter {
public:
    static constexpr std::ptrdiff_t kCap = 8;
    using Semaphore = std::counting_semaphore<kCap>;

    class Permit {
    public:
        explicit Permit(Semaphore& s) : s_(s) { s_.acquire(); }
        ~Permit() { s_.release(); }
        Permit(const Permit&) = delete;
        Permit& operator=(const Permit&) = delete;

    private:
        Semaphore& s_;
    };

    Semaphore& slot(const std::string& binding);

private:
    std::mutex mutex_;
    std::map<std::string, std::unique_ptr<Semaphore>> slots_;
};

/// Primary under its retry policy, then the alternate under its own, then the
/// degradation template. Each failed attempt feeds the health monitor.
BackendResponse route_with_fallback(const FallbackRoute& route, const BackendRequest& req, Clock& clock,
                                    HealthMonitor* health = nullptr, BindingLimiter* limiter = nullptr,
                                    const InvokeContext& ctx = {}, const ResilienceHooks& hooks = {});

} // namespace maestro
