// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/clock.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace maestro {

enum class TraceEventType { SupervisorCall, WorkerCall, ToolCall, BackendCall, Decision, Alert, Degraded };

std::string_view to_string(TraceEventType t);
std::optional<TraceEventType> trace_event_type_from_string(std::string_view s);

/// Gateway frame type for an event: message, decision, tool_call, backend_call, alert, degraded.
std::string_view frame_type(TraceEventType t);

struct TraceEvent {
    std::uint64_t seq = 0; // 1-based within the turn
    TraceEventType type = TraceEventType::Decision;
    std::string name;      // worker, tool or binding; "FINISH" or the worker for decisions
    Millis duration {0};
    std::string digest;    // SHA-256 of body
    nlohmann::json body = nlohmann::json::object();
};

struct TurnTrace {
    std::string turn_id;
    std::vector<TraceEvent> events;
};

/// {"turn_id","seq","event","name","duration_ms","digest","body"}
nlohmann::json trace_event_json(const std::string& turn_id, const TraceEvent& e);
TraceEvent trace_event_from_json(const nlohmann::json& j);
nlohmann::json trace_json(const TurnTrace& trace);

/// Append-only event list for one turn; forwards each event to an optional sink.
class TraceRecorder {
public:
    using Sink = std::function<void(const std::string& turn_id, const TraceEvent&)>;

    TraceRecorder(std::string turn_id, Sink sink = {});

    TraceEvent add(TraceEventType type, std::string name, nlohmann::json body, Millis duration = Millis(0));

    const std::string& turn_id() const { return trace_.turn_id; }
    TurnTrace snapshot() const;

private:
    mutable std::mutex mutex_;
    TurnTrace trace_;
    Sink sink_;
};

} // namespace maestro
