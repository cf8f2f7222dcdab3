// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/message.hpp"
#include "maestro/engine/route.hpp"
#include "maestro/engine/runtime.hpp"
#include "maestro/engine/tools.hpp"
#include "maestro/engine/trace.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace maestro {

struct SupervisorState {
    int hop_count = 0;
    std::vector<ChatMessage> window; // newest last
    std::optional<std::string> last_worker;
    std::optional<ChatMessage> last_output;
    std::optional<AnswerSource> source;
    bool degraded = false;
    std::map<std::string, int> outputs_per_worker;
    int supervisor_calls = 0;
    std::string last_supervisor_reply;
    std::string query;  // latest user text, bound to {query}
    std::string turn_id;
};

struct TurnOptions {
    std::string turn_id;           // generated when empty
    TraceRecorder::Sink sink;      // receives every event as it is recorded
    int depth = 0;                 // subflow nesting
};

struct TurnResult {
    std::string turn_id;
    ChatMessage final_message;
    TurnTrace trace;
    bool degraded = false;
    std::optional<AnswerSource> source;
};

inline constexpr int kMaxSubflowDepth = 4;

class Engine {
public:
    explicit Engine(std::shared_ptr<Runtime> runtime);

    Runtime& runtime() { return *runtime_; }

    /// Appends the (preprocessed) user message, runs the supervisor loop and
    /// appends the final Supervisor message. Hop exhaustion degrades instead of failing.
    TurnResult run_turn(Session& session, ChatMessage user_msg, const WorkflowDoc& doc, TurnOptions opts = {});

    /// Replaces audio payloads with their transcription, keeping the audio as an attachment.
    ChatMessage preprocess_payloads(const ChatMessage& msg, const WorkflowDoc& doc, TraceRecorder& trace);

    /// One supervisor call plus at most one corrective re-prompt.
    RouteDecision decide_next(SupervisorState& state, const WorkflowDoc& doc, TraceRecorder& trace);

    ChatMessage execute_worker(const std::string& name, SupervisorState& state, const WorkflowDoc& doc,
                               TraceRecorder& trace, int depth = 0);

    /// Bindings for an agent's templates: node config, workflow vars, then the
    /// built-ins team_members, query and company.
    Bindings agent_bindings(const NodeSpec& agent, const WorkflowDoc& doc, const std::string& query) const;

    /// Calls a binding through retry, fallback and health tracking, recording trace events.
    BackendResponse call_backend(const WorkflowDoc& doc, const std::string& binding, BackendRequest req,
                                 TraceRecorder& trace, SupervisorState* state = nullptr);

    static std::vector<BackendMessage> to_backend_messages(const std::vector<ChatMessage>& window);

private:
    ToolOutput invoke_tool(const std::string& tool, const nlohmann::json& args, const WorkflowDoc& doc,
                           TraceRecorder& trace, SupervisorState& state, int depth);
    std::vector<ChatMessage> recent(const std::vector<ChatMessage>& window) const;

    std::shared_ptr<Runtime> runtime_;
};

/// Corrective prompt sent after an unparseable routing reply.
std::string corrective_prompt(const std::vector<std::string>& team);

/// Appended to a worker's system prompt when it has tools.
std::string tool_usage_hint(const std::vector<std::string>& tools);

} // namespace maestro
