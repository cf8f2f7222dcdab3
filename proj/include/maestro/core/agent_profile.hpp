// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/prompt_template.hpp"

#include <optional>
#include <string>
#include <vector>

namespace maestro {

enum class AgentKind { Supervisor, Worker };

struct AgentProfile {
    std::string name;
    AgentKind kind = AgentKind::Worker;
    PromptTemplate system_template;
    std::vector<std::string> tools; // tool node names; empty for supervisors
    std::string backend;            // backend node name

    // Generation workers (image/video) build their provider prompt from this
    // template instead of the chat transcript.
    std::optional<PromptTemplate> query_template;
    std::optional<std::string> request_kind;

    bool operator==(const AgentProfile&) const = default;
};

} // namespace maestro
