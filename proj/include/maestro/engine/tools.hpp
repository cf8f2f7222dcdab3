// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/backend/backend.hpp"
#include "maestro/core/message.hpp"
#include "maestro/engine/runtime.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace maestro {

inline constexpr int kMaxToolRounds = 4;

/// One line of a worker reply: TOOL <name> <json-args>
struct ToolDirective {
    std::string name;
    nlohmann::json args;
};

/// First line starting with "TOOL ". Arguments that are not a JSON object are
/// taken as {"query": "<rest of line>"}.
std::optional<ToolDirective> parse_tool_directive(std::string_view reply);

/// "TOOL_RESULT <json>"
std::string tool_result_line(const nlohmann::json& result);

struct ToolOutput {
    nlohmann::json result = nlohmann::json::object(); // handed back to the worker; no floats
    std::optional<AnswerSource> source;
    std::vector<ModalPayload> attachments;            // blobs produced downstream
    nlohmann::json details = nlohmann::json::object(); // trace-only extras
};

struct SubflowAnswer {
    std::string text;
    std::optional<AnswerSource> source;
    std::vector<ModalPayload> payloads;
    std::string turn_id;
};

/// Hooks the engine provides so tools stay independent of the turn loop.
struct ToolEnv {
    Runtime& runtime;
    const WorkflowDoc& doc;
    std::function<BackendResponse(const std::string& binding, const BackendRequest&)> call_backend;
    std::function<ToolOutput(const std::string& tool, const nlohmann::json& args)> call_tool;
    std::function<SubflowAnswer(const std::string& workflow_id, const std::string& query)> run_subflow;
};

/// Dispatches on the tool node's config "kind": rag_search, web_search or subflow.
/// Errors surface as ToolFailure with the tool name in the detail.
ToolOutput run_tool(const NodeSpec& tool, const nlohmann::json& args, ToolEnv& env);

} // namespace maestro
