// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/payload.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maestro {

enum class Role { User, Supervisor, Worker, System, Tool };

std::string_view to_string(Role r);
std::optional<Role> role_from_string(std::string_view s);

struct Author {
    Role role = Role::User;
    std::string name; // required for Worker and Tool

    static Author user() { return {Role::User, {}}; }
    static Author supervisor() { return {Role::Supervisor, {}}; }
    static Author system() { return {Role::System, {}}; }
    static Author worker(std::string name);
    static Author tool(std::string name);

    /// "supervisor", "worker:Senior Programmer", ...
    std::string label() const;

    bool operator==(const Author&) const = default;
};

enum class AnswerSource { Rag, Web };

std::string_view to_string(AnswerSource s);

struct ChatMessage {
    std::string id;
    std::string session_id;
    Author author;
    std::vector<ModalPayload> payloads;
    std::uint64_t seq = 0; // assigned on append
    std::string created_at;

    bool degraded = false;
    std::optional<AnswerSource> source;

    /// Text payloads joined by newlines.
    std::string text() const;
    bool has_modality(Modality m) const;
};

ChatMessage make_message(Author author, std::vector<ModalPayload> payloads);
ChatMessage make_text_message(Author author, std::string text);

enum class SessionStatus { Open, Closed, Failed };

std::string_view to_string(SessionStatus s);

struct Session {
    std::string id;
    std::string workflow_id;
    std::vector<ChatMessage> messages; // append-only
    SessionStatus status = SessionStatus::Open;

    std::uint64_t last_seq() const { return messages.empty() ? 0 : messages.back().seq; }
};

/// Appends with seq = previous max + 1. Throws SessionClosed unless Open.
Session append_message(Session session, ChatMessage msg);

/// In-place variant used by the engine; returns the stored copy.
const ChatMessage& append_in_place(Session& session, ChatMessage msg);

} // namespace maestro
