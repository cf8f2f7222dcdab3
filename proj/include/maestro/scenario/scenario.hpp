// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/engine/supervisor.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace maestro {

struct TurnExpectation {
    std::optional<std::vector<std::string>> worker_order;
    std::optional<bool> finish;     // last decision is FINISH
    std::optional<std::string> source; // "rag" | "web" | "none"
    std::vector<std::string> tools; // each must appear as a ToolCall
    std::map<std::string, int> tool_counts;
    std::vector<std::string> contains;
    std::optional<bool> degraded;
    std::optional<std::string> output_kind; // "text" | "image" | "video"
};

struct ScenarioTurn {
    std::string text;
    std::vector<std::string> files; // absolute after loading
    TurnExpectation expect;
};

struct ScenarioIngest {
    std::string path;
    std::string media_type;
    std::string index = kDefaultIndex;
};

struct Scenario {
    std::string name;
    std::string workflow_path;
    std::string workflows_dir;
    std::string fixtures_dir;
    std::vector<ScenarioIngest> ingest;
    std::vector<ScenarioTurn> turns;
};

/// Paths inside the file are resolved against its directory. Throws NotFound / SyntaxError / MissingField.
Scenario load_scenario(const std::string& path);

std::string media_type_for_path(const std::string& path);

struct AssertionResult {
    std::size_t turn = 0; // 1-based
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ScenarioReport {
    std::string name;
    bool setup_ok = true;
    std::string setup_error;
    std::vector<AssertionResult> assertions;
    std::vector<TurnResult> turns;
    std::vector<IngestResult> ingested;
    std::shared_ptr<Runtime> runtime; // kept for state export

    bool passed() const;
    /// 0 all pass, 1 assertion failure, 2 setup failure.
    int exit_code() const;
};

struct ScenarioOptions {
    Clock* clock = nullptr;
    std::shared_ptr<HttpTransport> http;
    TraceRecorder::Sink sink;
};

/// Builds a fresh runtime, ingests, runs each turn in one session and checks expectations.
ScenarioReport run_scenario(const Scenario& scenario, const ScenarioOptions& options = {});

/// Check one turn against its expectation.
std::vector<AssertionResult> check_turn(std::size_t index, const TurnExpectation& expect, const TurnResult& result);

std::vector<std::string> worker_order(const TurnTrace& trace);
std::size_t count_events(const TurnTrace& trace, TraceEventType type, std::string_view name = {});

/// One JSON object per turn: {"turn", "workers", "final"} with timestamps left out.
std::string transcript_jsonl(const std::vector<TurnResult>& turns);
nlohmann::json final_message_json(const ChatMessage& m);

/// "[supervisor] ...", "[worker:NAME] ...", "[alert] ..." lines for terminal output.
std::string render_event_line(const TraceEvent& e);
std::string render_message_text(const ChatMessage& m);

} // namespace maestro
