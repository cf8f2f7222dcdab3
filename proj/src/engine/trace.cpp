// SPDX-License-Identifier: Apache-2.0
#include "maestro/engine/trace.hpp"

#include "maestro/core/digest.hpp"

namespace maestro {

std::string_view to_string(TraceEventType t)
{
    switch (t) {
    case TraceEventType::SupervisorCall: return "SupervisorCall";
    case TraceEventType::WorkerCall: return "WorkerCall";
    case TraceEventType::ToolCall: return "ToolCall";
    case TraceEventType::BackendCall: return "BackendCall";
    case TraceEventType::Decision: return "Decision";
    case TraceEventType::Alert: return "Alert";
    case TraceEventType::Degraded: return "Degraded";
    }
    return "Decision";
}

std::optional<TraceEventType> trace_event_type_from_string(std::string_view s)
{
    for (auto t : {TraceEventType::SupervisorCall, TraceEventType::WorkerCall, TraceEventType::ToolCall,
                   TraceEventType::BackendCall, TraceEventType::Decision, TraceEventType::Alert,
                   TraceEventType::Degraded})
        if (to_string(t) == s)
            return t;
    return std::nullopt;
}

std::string_view frame_type(TraceEventType t)
{
    switch (t) {
    case TraceEventType::SupervisorCall:
    case TraceEventType::WorkerCall: return "message";
    case TraceEventType::ToolCall: return "tool_call";
    case TraceEventType::BackendCall: return "backend_call";
    case TraceEventType::Decision: return "decision";
    case TraceEventType::Alert: return "alert";
    case TraceEventType::Degraded: return "degraded";
    }
    return "message";
}

nlohmann::json trace_event_json(const std::string& turn_id, const TraceEvent& e)
{
    return {{"turn_id", turn_id},
            {"seq", e.seq},
            {"event", to_string(e.type)},
            {"name", e.name},
            {"duration_ms", e.duration.count()},
            {"digest", e.digest},
            {"body", e.body}};
}

TraceEvent trace_event_from_json(const nlohmann::json& j)
{
    TraceEvent e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.type = trace_event_type_from_string(j.at("event").get<std::string>()).value_or(TraceEventType::Decision);
    e.name = j.value("name", "");
    e.duration = Millis(j.value("duration_ms", 0LL));
    e.digest = j.value("digest", "");
    e.body = j.value("body", nlohmann::json::object());
    return e;
}

nlohmann::json trace_json(const TurnTrace& trace)
{
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : trace.events)
        events.push_back(trace_event_json(trace.turn_id, e));
    return {{"turn_id", trace.turn_id}, {"events", std::move(events)}};
}

TraceRecorder::TraceRecorder(std::string turn_id, Sink sink) : sink_(std::move(sink))
{
    trace_.turn_id = std::move(turn_id);
}

TraceEvent TraceRecorder::add(TraceEventType type, std::string name, nlohmann::json body, Millis duration)
{
    TraceEvent copy;
    {
        std::lock_guard lock(mutex_);
        TraceEvent e;
        e.seq = trace_.events.size() + 1;
        e.type = type;
        e.name = std::move(name);
        e.duration = duration;
        e.digest = sha256_hex(body.dump());
        e.body = std::move(body);
        trace_.events.push_back(std::move(e));
        copy = trace_.events.back();
        // Delivered under the lock so sinks observe seq order.
        if (sink_)
            sink_(trace_.turn_id, copy);
    }
    return copy;
}

TurnTrace TraceRecorder::snapshot() const
{
    std::lock_guard lock(mutex_);
    return trace_;
}

} // namespace maestro
