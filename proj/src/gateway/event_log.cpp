// SPDX-License-Identifier: Apache-2.0
#include "maestro/gateway/event_log.hpp"

namespace maestro {

nlohmann::json frame_data(const std::string& turn_id, const TraceEvent& e)
{
    nlohmann::json d = trace_event_json(turn_id, e);
    d["trace_seq"] = d["seq"];
    d.erase("seq");
    d["type"] = frame_type(e.type);
    if (e.type == TraceEventType::Alert) {
        d["binding"] = e.body.value("binding", "");
        d["count"] = e.body.value("count", 0);
    }
    return d;
}

std::string sse_encode(const EventFrame& f)
{
    return "id: " + std::to_string(f.seq) + "\nevent: " + f.type + "\ndata: " + f.data.dump() + "\n\n";
}

EventFrame SessionEventLog::append(const std::string& type, const std::string& turn_id, nlohmann::json data)
{
    EventFrame f;
    {
        std::lock_guard lock(mutex_);
        f.seq = frames_.size() + 1;
        f.type = type;
        f.turn_id = turn_id;
        data["type"] = type;
        data["turn_id"] = turn_id;
        data["seq"] = f.seq;
        f.data = std::move(data);
        frames_.push_back(f);
    }
    cv_.notify_all();
    return f;
}

EventFrame SessionEventLog::append_trace(const std::string& turn_id, const TraceEvent& e)
{
    return append(std::string(frame_type(e.type)), turn_id, frame_data(turn_id, e));
}

std::vector<EventFrame> SessionEventLog::since(std::uint64_t from_seq) const
{
    std::lock_guard lock(mutex_);
    if (from_seq < 1)
        from_seq = 1;
    if (from_seq > frames_.size())
        return {};
    return {frames_.begin() + static_cast<std::ptrdiff_t>(from_seq - 1), frames_.end()};
}

std::uint64_t SessionEventLog::last_seq() const
{
    std::lock_guard lock(mutex_);
    return frames_.size();
}

bool SessionEventLog::wait_for(std::uint64_t after, Millis timeout) const
{
    std::unique_lock lock(mutex_);
    return cv_.wait_for(lock, timeout, [&] { return closed_ || frames_.size() > after; }) && frames_.size() > after;
}

void SessionEventLog::close()
{
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool SessionEventLog::closed() const
{
    std::lock_guard lock(mutex_);
    return closed_;
}

} // namespace maestro
