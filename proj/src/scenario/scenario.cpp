// SPDX-License-Identifier: Apache-2.0
#include "maestro/scenario/scenario.hpp"

#include "maestro/core/serialize.hpp"
#include "maestro/error.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace maestro {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::NotFound, path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve(const fs::path& base, const std::string& p)
{
    fs::path path(p);
    return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

} // namespace

std::string media_type_for_path(const std::string& path)
{
    auto ext = fs::path(path).extension().string();
    for (char& c : ext)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".png") return "image/png";
    if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
    if (ext == ".gif") return "image/gif";
    if (ext == ".webp") return "image/webp";
    if (ext == ".wav") return "audio/wav";
    if (ext == ".mp3") return "audio/mpeg";
    if (ext == ".mp4") return "video/mp4";
    if (ext == ".md") return "text/markdown";
    if (ext == ".txt") return "text/plain";
    if (ext == ".pdf") return "application/pdf";
    return "application/octet-stream";
}

Scenario load_scenario(const std::string& path)
{
    const auto text = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::SyntaxError, path + ": " + e.what());
    }
    const auto base = fs::path(path).parent_path();
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key))
            throw Error(Errc::MissingField, key);
        return j[key];
    };

    Scenario s;
    s.name = j.value("name", fs::path(path).stem().string());
    s.workflow_path = resolve(base, need("workflow").get<std::string>());
    s.fixtures_dir = resolve(base, j.value("fixtures_dir", "../fixtures"));
    s.workflows_dir = resolve(base, j.value("workflows_dir", "../workflows"));
    for (const auto& i : j.value("ingest", nlohmann::json::array())) {
        ScenarioIngest in;
        in.path = resolve(base, i.at("path").get<std::string>());
        in.media_type = i.value("media_type", media_type_for_path(in.path));
        in.index = i.value("index", std::string(kDefaultIndex));
        s.ingest.push_back(std::move(in));
    }
    for (const auto& t : need("turns")) {
        ScenarioTurn turn;
        turn.text = t.value("text", "");
        for (const auto& f : t.value("files", nlohmann::json::array()))
            turn.files.push_back(resolve(base, f.get<std::string>()));
        const auto e = t.value("expect", nlohmann::json::object());
        if (e.contains("worker_order"))
            turn.expect.worker_order = e["worker_order"].get<std::vector<std::string>>();
        if (e.contains("finish"))
            turn.expect.finish = e["finish"].get<bool>();
        if (e.contains("source"))
            turn.expect.source = e["source"].get<std::string>();
        turn.expect.tools = e.value("tools", std::vector<std::string> {});
        turn.expect.tool_counts = e.value("tool_counts", std::map<std::string, int> {});
        turn.expect.contains = e.value("contains", std::vector<std::string> {});
        if (e.contains("degraded"))
            turn.expect.degraded = e["degraded"].get<bool>();
        if (e.contains("output_kind"))
            turn.expect.output_kind = e["output_kind"].get<std::string>();
        s.turns.push_back(std::move(turn));
    }
    return s;
}

bool ScenarioReport::passed() const
{
    return setup_ok && std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.pass; });
}

int ScenarioReport::exit_code() const
{
    if (!setup_ok)
        return 2;
    return passed() ? 0 : 1;
}

std::vector<std::string> worker_order(const TurnTrace& trace)
{
    std::vector<std::string> out;
    for (const auto& e : trace.events)
        if (e.type == TraceEventType::WorkerCall)
            out.push_back(e.name);
    return out;
}

std::size_t count_events(const TurnTrace& trace, TraceEventType type, std::string_view name)
{
    std::size_t n = 0;
    for (const auto& e : trace.events)
        if (e.type == type && (name.empty() || e.name == name))
            ++n;
    return n;
}

namespace {

std::string join(const std::vector<std::string>& v)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? ", " : "") + ("\"" + v[i] + "\"");
    return out + "]";
}

} // namespace

std::vector<AssertionResult> check_turn(std::size_t index, const TurnExpectation& expect, const TurnResult& result)
{
    std::vector<AssertionResult> out;
    auto add = [&](std::string name, bool pass, std::string detail) {
        out.push_back({index, std::move(name), pass, std::move(detail)});
    };
    const auto& trace = result.trace;

    if (expect.worker_order) {
        const auto got = worker_order(trace);
        add("worker_order", got == *expect.worker_order, "expected " + join(*expect.worker_order) + " got " + join(got));
    }
    if (expect.finish) {
        const bool finished = !trace.events.empty() && trace.events.back().type == TraceEventType::Decision &&
                              trace.events.back().name == "FINISH";
        add("finish", finished == *expect.finish, finished ? "ended with FINISH" : "did not end with FINISH");
    }
    if (expect.source) {
        const std::string got = result.source ? std::string(to_string(*result.source)) : "none";
        std::string want = *expect.source;
        for (auto& c : want)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::string got_l = got;
        for (auto& c : got_l)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        add("source", got_l == want, "expected " + want + " got " + got_l);
    }
    for (const auto& tool : expect.tools) {
        const auto n = count_events(trace, TraceEventType::ToolCall, tool);
        add("tool " + tool, n > 0, std::to_string(n) + " ToolCall events");
    }
    for (const auto& [tool, count] : expect.tool_counts) {
        const auto n = count_events(trace, TraceEventType::ToolCall, tool);
        add("tool_count " + tool, n == static_cast<std::size_t>(count),
            "expected " + std::to_string(count) + " got " + std::to_string(n));
    }
    const auto text = result.final_message.text();
    for (const auto& s : expect.contains)
        add("contains", text.find(s) != std::string::npos, "\"" + s + "\"");
    if (expect.degraded)
        add("degraded", result.degraded == *expect.degraded, result.degraded ? "degraded" : "not degraded");
    if (expect.output_kind) {
        std::string got = "text";
        for (const auto& p : result.final_message.payloads)
            if (!p.is_text())
                got = std::string(to_string(p.kind()));
        for (auto& c : got)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        add("output_kind", got == *expect.output_kind, "expected " + *expect.output_kind + " got " + got);
    }
    return out;
}

ScenarioReport run_scenario(const Scenario& scenario, const ScenarioOptions& options)
{
    ScenarioReport report;
    report.name = scenario.name;

    RuntimeOptions ro;
    ro.fixtures_dir = scenario.fixtures_dir;
    ro.http = options.http;
    ro.clock = options.clock;
    auto runtime = std::make_shared<Runtime>(ro);
    report.runtime = runtime;
    Engine engine(runtime);

    WorkflowDoc doc;
    std::vector<std::pair<Bytes, std::string>> uploads;
    try {
        if (fs::is_directory(scenario.workflows_dir))
            runtime->load_workflows_dir(scenario.workflows_dir);
        doc = load_workflow_file(scenario.workflow_path);
        runtime->add_workflow(doc);
        if (auto diags = runtime->validate(doc); has_errors(diags))
            throw Error(Errc::InvalidWorkflow, doc.id + ": " + diagnostic_json(diags.front()));
        // Every fixture set the workflow names must load before any turn runs.
        for (const auto& id : runtime->workflow_ids()) {
            for (const auto& n : runtime->workflow(id)->nodes) {
                const bool mock_backend = n.kind == NodeKind::Backend && n.config_value("adapter", "mock") == "mock";
                const bool mock_tool = n.kind == NodeKind::Tool && n.config_value("kind") == "web_search" &&
                                       n.config_value("adapter", "mock") == "mock";
                if (mock_backend || mock_tool)
                    runtime->backends().fixture_set(n.config_value("fixture_set"));
            }
        }
        for (const auto& in : scenario.ingest) {
            const auto bytes = read_file(in.path);
            report.ingested.push_back(runtime->ingest(in.index, bytes, in.media_type));
        }
        for (const auto& turn : scenario.turns)
            for (const auto& f : turn.files)
                (void)read_file(f);
    } catch (const std::exception& e) {
        report.setup_ok = false;
        report.setup_error = e.what();
        return report;
    }

    Session session;
    session.id = scenario.name;
    session.workflow_id = doc.id;
    for (std::size_t i = 0; i < scenario.turns.size(); ++i) {
        const auto& turn = scenario.turns[i];
        std::vector<ModalPayload> payloads;
        for (const auto& f : turn.files) {
            const auto mt = media_type_for_path(f);
            const auto modality = modality_for_media_type(mt);
            if (!modality || *modality == Modality::Text) {
                report.setup_ok = false;
                report.setup_error = f + ": unsupported media type " + mt;
                return report;
            }
            payloads.push_back(ModalPayload::blob(*modality, runtime->blobs().put(read_file(f), mt)));
        }
        if (!turn.text.empty())
            payloads.push_back(ModalPayload::text(turn.text));
        TurnOptions opts;
        opts.sink = options.sink;
        try {
            auto result = engine.run_turn(session, make_message(Author::user(), std::move(payloads)), doc, opts);
            auto checks = check_turn(i + 1, turn.expect, result);
            report.assertions.insert(report.assertions.end(), checks.begin(), checks.end());
            report.turns.push_back(std::move(result));
        } catch (const Error& e) {
            report.assertions.push_back({i + 1, "turn completes", false, e.what()});
            break;
        }
    }
    return report;
}

nlohmann::json final_message_json(const ChatMessage& m)
{
    nlohmann::json j;
    j["author"] = m.author.label();
    j["payloads"] = nlohmann::json::array();
    for (const auto& p : m.payloads)
        j["payloads"].push_back(to_json(p));
    j["degraded"] = m.degraded;
    j["source"] = m.source ? nlohmann::json(to_string(*m.source)) : nlohmann::json();
    return j;
}

std::string transcript_jsonl(const std::vector<TurnResult>& turns)
{
    std::string out;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        nlohmann::json j;
        j["turn"] = i + 1;
        j["workers"] = worker_order(turns[i].trace);
        j["final"] = final_message_json(turns[i].final_message);
        out += j.dump() + "\n";
    }
    return out;
}

std::string render_message_text(const ChatMessage& m)
{
    std::string out;
    for (const auto& p : m.payloads) {
        if (!out.empty())
            out += "\n";
        if (p.is_text())
            out += p.text();
        else
            out += "<" + std::string(to_string(p.kind())) + " " + p.blob_ref().digest + " " + p.media_type() + " " +
                   std::to_string(p.blob_ref().length) + " bytes>";
    }
    return out;
}

std::string render_event_line(const TraceEvent& e)
{
    switch (e.type) {
    case TraceEventType::SupervisorCall:
        return "[supervisor] " + e.body.value("reply", "");
    case TraceEventType::WorkerCall: {
        std::string text;
        if (e.body.contains("message"))
            for (const auto& p : e.body["message"].value("payloads", nlohmann::json::array())) {
                if (!text.empty())
                    text += "\n";
                if (p.contains("text"))
                    text += p["text"].get<std::string>();
                else if (p.contains("blob"))
                    text += "<" + p.value("kind", "") + " " + p["blob"].value("digest", "") + ">";
            }
        return "[worker:" + e.name + "] " + text;
    }
    case TraceEventType::ToolCall:
        return "[tool:" + e.name + "] " + e.body.value("args", nlohmann::json::object()).dump();
    case TraceEventType::Alert:
        return "[alert] " + e.body.value("binding", "") + " failures=" + std::to_string(e.body.value("count", 0));
    case TraceEventType::Degraded:
        return "[degraded] " + e.body.value("reason", "");
    case TraceEventType::Decision:
    case TraceEventType::BackendCall:
        return {};
    }
    return {};
}

} // namespace maestro
