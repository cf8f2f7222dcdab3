// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/clock.hpp"
#include "maestro/engine/trace.hpp"

#include <nlohmann/json.hpp>

#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace maestro {

struct EventFrame {
    std::uint64_t seq = 0; // session-wide, 1-based
    std::string type;      // message, decision, tool_call, backend_call, alert, degraded, done, error
    std::string turn_id;
    nlohmann::json data;   // includes type, turn_id and seq
};

/// Frame for a trace event: trace fields plus the frame type; alerts also
/// carry binding and count at top level.
nlohmann::json frame_data(const std::string& turn_id, const TraceEvent& e);

/// "id: <seq>\nevent: <type>\ndata: <json>\n\n"
std::string sse_encode(const EventFrame& f);

/// Append-only frame log for one session with blocking reads for live followers.
class SessionEventLog {
public:
    EventFrame append(const std::string& type, const std::string& turn_id, nlohmann::json data);
    EventFrame append_trace(const std::string& turn_id, const TraceEvent& e);

    std::vector<EventFrame> since(std::uint64_t from_seq) const;
    std::uint64_t last_seq() const;

    /// Waits until a frame with seq > after exists, the log closes, or the timeout passes.
    bool wait_for(std::uint64_t after, Millis timeout) const;
    void close();
    bool closed() const;

private:
    mutable std::mutex mutex_;
    mutable std::condition_variable cv_;
    std::vector<EventFrame> frames_;
    bool closed_ = false;
};

} // namespace maestro
