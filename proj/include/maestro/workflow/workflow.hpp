// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/agent_profile.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace maestro {

enum class NodeKind { Supervisor, Worker, Tool, VectorStore, Backend };

std::string_view to_string(NodeKind k);
std::optional<NodeKind> node_kind_from_string(std::string_view s);

using Config = std::map<std::string, std::string, std::less<>>;

struct NodeSpec {
    std::string name;
    NodeKind kind = NodeKind::Worker;
    std::optional<AgentProfile> profile; // agent kinds only
    std::optional<Config> config;        // tool/store/backend settings, or template bindings on agents

    bool is_agent() const { return kind == NodeKind::Supervisor || kind == NodeKind::Worker; }
    std::string config_value(std::string_view key, std::string_view fallback = {}) const;

    bool operator==(const NodeSpec&) const = default;
};

inline constexpr int kDefaultMaxHops = 8;

struct WorkflowDoc {
    std::string id;
    std::string name;
    std::vector<NodeSpec> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    std::string entry;
    std::string shared_memory;
    int max_hops = kDefaultMaxHops;
    bool expose_trace = true;
    Config vars;

    const NodeSpec* find(std::string_view name) const;
    const NodeSpec* supervisor() const;
    bool operator==(const WorkflowDoc&) const = default;
};

/// Syntax and required-field checks only; semantic rules live in validate_workflow.
WorkflowDoc parse_workflow(std::string_view document_text);
WorkflowDoc load_workflow_file(const std::string& path);

std::string serialize_workflow(const WorkflowDoc& doc);

/// Worker names in declaration order.
std::vector<std::string> team_members(const WorkflowDoc& doc);
std::string join_team(const std::vector<std::string>& team);

} // namespace maestro
