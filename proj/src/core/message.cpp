// SPDX-License-Identifier: Apache-2.0
#include "maestro/core/message.hpp"

#include "maestro/core/clock.hpp"
#include "maestro/error.hpp"

#include <algorithm>

namespace maestro {

std::string_view to_string(Role r)
{
    switch (r) {
    case Role::User: return "user";
    case Role::Supervisor: return "supervisor";
    case Role::Worker: return "worker";
    case Role::System: return "system";
    case Role::Tool: return "tool";
    }
    return "user";
}

std::optional<Role> role_from_string(std::string_view s)
{
    if (s == "user") return Role::User;
    if (s == "supervisor") return Role::Supervisor;
    if (s == "worker") return Role::Worker;
    if (s == "system") return Role::System;
    if (s == "tool") return Role::Tool;
    return std::nullopt;
}

Author Author::worker(std::string name)
{
    if (name.empty())
        throw Error(Errc::InvalidParams, "worker author needs a name");
    return {Role::Worker, std::move(name)};
}

Author Author::tool(std::string name)
{
    if (name.empty())
        throw Error(Errc::InvalidParams, "tool author needs a name");
    return {Role::Tool, std::move(name)};
}

std::string Author::label() const
{
    if (role == Role::Worker || role == Role::Tool)
        return std::string(to_string(role)) + ":" + name;
    return std::string(to_string(role));
}

std::string_view to_string(AnswerSource s)
{
    return s == AnswerSource::Rag ? "rag" : "web";
}

std::string ChatMessage::text() const
{
    std::string out;
    for (const auto& p : payloads) {
        if (!p.is_text())
            continue;
        if (!out.empty())
            out.push_back('\n');
        out += p.text();
    }
    return out;
}

bool ChatMessage::has_modality(Modality m) const
{
    return std::any_of(payloads.begin(), payloads.end(), [m](const auto& p) { return p.kind() == m; });
}

ChatMessage make_message(Author author, std::vector<ModalPayload> payloads)
{
    ChatMessage msg;
    msg.author = std::move(author);
    msg.payloads = std::move(payloads);
    msg.created_at = utc_now_iso();
    return msg;
}

ChatMessage make_text_message(Author author, std::string text)
{
    return make_message(std::move(author), {ModalPayload::text(std::move(text))});
}

std::string_view to_string(SessionStatus s)
{
    switch (s) {
    case SessionStatus::Open: return "open";
    case SessionStatus::Closed: return "closed";
    case SessionStatus::Failed: return "failed";
    }
    return "open";
}

const ChatMessage& append_in_place(Session& session, ChatMessage msg)
{
    if (session.status != SessionStatus::Open)
        throw Error(Errc::SessionClosed, session.id);
    msg.seq = session.last_seq() + 1;
    msg.session_id = session.id;
    if (msg.id.empty())
        msg.id = session.id + ":" + std::to_string(msg.seq);
    if (msg.created_at.empty())
        msg.created_at = utc_now_iso();
    session.messages.push_back(std::move(msg));
    return session.messages.back();
}

Session append_message(Session session, ChatMessage msg)
{
    append_in_place(session, std::move(msg));
    return session;
}

} // namespace maestro
