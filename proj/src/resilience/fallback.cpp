// SPDX-License-Identifier: Apache-2.0
#include "maestro/resilience/fallback.hpp"

#include "maestro/core/prompt_template.hpp"

namespace maestro {

BindingLimiter::Semaphore& BindingLimiter::slot(const std::string& binding)
{
    std::lock_guard lock(mutex_);
    auto& s = slots_[binding];
    if (!s)
        s = std::make_unique<Semaphore>(kCap);
    return *s;
}

namespace {

BackendResponse call_with_policy(Backend& backend, const BackendRequest& req, Clock& clock, HealthMonitor* health,
                                 BindingLimiter* limiter, const InvokeContext& ctx, const ResilienceHooks& hooks)
{
    const auto& name = backend.binding().name;
    RetryObserver obs;
    obs.on_attempt = [&](const AttemptRecord& rec) {
        if (hooks.on_attempt)
            hooks.on_attempt(name, rec);
        if (!rec.ok && health) {
            if (auto alert = health->record_failure(name); alert && hooks.on_alert)
                hooks.on_alert(*alert);
        }
    };
    return with_retry(
        backend.binding().retry, clock,
        [&](int attempt) {
            InvokeContext attempt_ctx = ctx;
            attempt_ctx.attempt = attempt;
            std::optional<BindingLimiter::Permit> permit;
            if (limiter)
                permit.emplace(limiter->slot(name));
            auto resp = backend.invoke(req, attempt_ctx);
            check_response(req, resp);
            return resp;
        },
        obs);
}

} // namespace

BackendResponse route_with_fallback(const FallbackRoute& route, const BackendRequest& req, Clock& clock,
                                    HealthMonitor* health, BindingLimiter* limiter, const InvokeContext& ctx,
                                    const ResilienceHooks& hooks)
{
    if (!route.primary)
        throw Error(Errc::UnknownBinding, "route without primary");
    if (route.alternate && route.alternate->binding().name == route.primary->binding().name)
        throw Error(Errc::InvalidParams, "alternate equals primary");

    std::optional<Error> last;
    try {
        return call_with_policy(*route.primary, req, clock, health, limiter, ctx, hooks);
    } catch (const Error& e) {
        last = e;
    }
    if (route.alternate) {
        if (hooks.on_fallback)
            hooks.on_fallback(route.primary->binding().name, route.alternate->binding().name);
        try {
            return call_with_policy(*route.alternate, req, clock, health, limiter, ctx, hooks);
        } catch (const Error& e) {
            last = e;
        }
    }
    if (!route.degradation)
        throw *last;

    PromptTemplate tpl(*route.degradation);
    Bindings b {{"binding", route.primary->binding().name}, {"error", std::string(to_string(last->code()))}};
    BackendResponse resp;
    resp.kind = req.kind;
    resp.text = render_template(tpl, restrict_bindings(tpl, b));
    resp.degraded = true;
    resp.served_by = route.primary->binding().name;
    return resp;
}

} // namespace maestro
