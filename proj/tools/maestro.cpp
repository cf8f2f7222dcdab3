// SPDX-License-Identifier: Apache-2.0
// maestro: operator CLI.

#include "maestro/backend/http_transport.hpp"
#include "maestro/core/digest.hpp"
#include "maestro/error.hpp"
#include "maestro/gateway/gateway.hpp"
#include "maestro/scenario/scenario.hpp"
#include "maestro/workflow/validate.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace maestro;

namespace {

std::string default_data_dir()
{
    if (const char* env = std::getenv("MAESTRO_DATA_DIR"))
        return env;
    return MAESTRO_DEFAULT_DATA_DIR;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::NotFound, path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int exit_for(Errc code)
{
    switch (code) {
    case Errc::NotFound:
    case Errc::SyntaxError:
    case Errc::MissingField:
    case Errc::FixtureParseError:
    case Errc::TransportError:
    case Errc::Timeout: return 2;
    default: return 1;
    }
}

int exit_for_status(int status)
{
    return status >= 400 && status < 500 ? 1 : 2;
}

std::shared_ptr<Runtime> make_runtime(const std::string& workflows_dir, const std::string& fixtures_dir)
{
    RuntimeOptions ro;
    ro.fixtures_dir = fixtures_dir;
    ro.http = make_http_transport();
    auto rt = std::make_shared<Runtime>(ro);
    if (fs::is_directory(workflows_dir))
        rt->load_workflows_dir(workflows_dir);
    return rt;
}

/// Accepts a workflow id known to the runtime or a path to a workflow file.
std::shared_ptr<const WorkflowDoc> resolve_workflow(Runtime& rt, const std::string& ref)
{
    if (fs::is_regular_file(ref)) {
        auto doc = load_workflow_file(ref);
        const auto id = doc.id;
        rt.add_workflow(std::move(doc));
        return rt.workflow(id);
    }
    auto doc = rt.workflow(ref);
    if (!doc)
        throw Error(Errc::NotFound, "workflow " + ref);
    return doc;
}

int cmd_validate(const std::string& path)
{
    WorkflowDoc doc;
    try {
        doc = load_workflow_file(path);
    } catch (const Error& e) {
        if (e.code() == Errc::DuplicateNodeName) {
            std::cerr << diagnostic_json({"W012", Severity::Error, e.detail(), "duplicate node name"}) << "\n";
            return 1;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }
    // Sibling workflows resolve subflow references.
    RuntimeOptions ro;
    Runtime rt(ro);
    const auto dir = fs::path(path).parent_path();
    for (const auto& entry : fs::directory_iterator(dir.empty() ? fs::path(".") : dir)) {
        const auto name = entry.path().filename().string();
        if (name.size() > 10 && name.substr(name.size() - 10) == ".flow.json") {
            try {
                rt.add_workflow(load_workflow_file(entry.path().string()));
            } catch (const Error&) {
            }
        }
    }
    const auto diags = rt.validate(doc);
    for (const auto& d : diags)
        std::cerr << diagnostic_json(d) << "\n";
    return has_errors(diags) ? 1 : 0;
}

int cmd_scenario(const std::string& path, const std::string& state_out, const std::string& transcript_out)
{
    Scenario scenario;
    try {
        scenario = load_scenario(path);
    } catch (const std::exception& e) {
        std::cerr << "setup: " << e.what() << "\n";
        return 2;
    }
    ScenarioOptions opts;
    opts.http = make_http_transport();
    const auto report = run_scenario(scenario, opts);
    if (!report.setup_ok) {
        std::cerr << "setup: " << report.setup_error << "\n";
        return 2;
    }
    for (const auto& a : report.assertions) {
        std::cout << (a.pass ? "PASS" : "FAIL") << " turn " << a.turn << " " << a.name;
        if (!a.pass && !a.detail.empty())
            std::cout << " (" << a.detail << ")";
        std::cout << "\n";
    }
    if (!state_out.empty()) {
        std::ofstream out(state_out, std::ios::binary);
        out << report.runtime->state().export_jsonl();
    }
    if (!transcript_out.empty()) {
        std::ofstream out(transcript_out, std::ios::binary);
        out << transcript_jsonl(report.turns);
    }
    std::cout << report.name << ": " << (report.passed() ? "passed" : "failed") << "\n";
    return report.exit_code();
}

int cmd_ingest(const std::string& path, const std::string& index, std::size_t chunk_size, std::size_t overlap,
               const std::string& export_path)
{
    Runtime rt;
    RagConfig cfg;
    cfg.chunk_size = chunk_size;
    cfg.overlap = overlap;
    try {
        rt.configure_index(index, cfg);
        const auto bytes = read_file(path);
        const auto r = rt.ingest(index, bytes, media_type_for_path(path), {{"filename", fs::path(path).filename().string()}});
        std::cout << nlohmann::json({{"doc_id", r.doc_id}, {"chunks", r.chunks}, {"index", index}}).dump() << "\n";
        if (!export_path.empty()) {
            std::ofstream out(export_path, std::ios::binary);
            out << rt.index(index).index().export_jsonl();
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_for(e.code());
    }
}

int cmd_chat(const std::string& workflow, const std::string& workflows_dir, const std::string& fixtures_dir,
             const std::vector<std::string>& ingest)
{
    try {
        auto rt = make_runtime(workflows_dir, fixtures_dir);
        auto doc = resolve_workflow(*rt, workflow);
        if (auto diags = rt->validate(*doc); has_errors(diags)) {
            for (const auto& d : diags)
                std::cerr << diagnostic_json(d) << "\n";
            return 1;
        }
        for (const auto& path : ingest)
            rt->ingest(kDefaultIndex, read_file(path), media_type_for_path(path));

        Engine engine(rt);
        Session session;
        session.id = "cli";
        session.workflow_id = doc->id;
        std::vector<ModalPayload> pending;
        std::string line;
        while (std::getline(std::cin, line)) {
            if (line.empty())
                continue;
            if (line == "/quit")
                break;
            if (line.rfind("/attach ", 0) == 0) {
                const auto path = line.substr(8);
                const auto mt = media_type_for_path(path);
                const auto modality = modality_for_media_type(mt);
                if (!modality || *modality == Modality::Text) {
                    std::cerr << "unsupported media type " << mt << "\n";
                    continue;
                }
                pending.push_back(ModalPayload::blob(*modality, rt->blobs().put(read_file(path), mt)));
                continue;
            }
            pending.push_back(ModalPayload::text(line));
            TurnOptions opts;
            opts.sink = [](const std::string&, const TraceEvent& e) {
                if (const auto s = render_event_line(e); !s.empty())
                    std::cout << s << "\n" << std::flush;
            };
            auto result = engine.run_turn(session, make_message(Author::user(), std::move(pending)), *doc, opts);
            pending.clear();
            std::cout << "[supervisor] " << render_message_text(result.final_message);
            if (result.source)
                std::cout << " (source: " << to_string(*result.source) << ")";
            if (result.degraded)
                std::cout << " (degraded)";
            std::cout << "\n" << std::flush;
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_for(e.code());
    }
}

std::atomic<bool> g_interrupted {false};

int cmd_serve(const std::string& listen, const std::string& workflows_dir, const std::string& fixtures_dir,
              const std::vector<std::string>& ingest)
{
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "--listen expects host:port\n";
        return 2;
    }
    const auto host = listen.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
        std::cerr << "--listen expects host:port\n";
        return 2;
    }
    try {
        auto rt = make_runtime(workflows_dir, fixtures_dir);
        for (const auto& path : ingest)
            rt->ingest(kDefaultIndex, read_file(path), media_type_for_path(path));
        GatewayOptions go;
        if (const char* token = std::getenv("MAESTRO_TOKEN"))
            go.token = token;
        Gateway gw(rt, go);
        std::signal(SIGINT, [](int) { g_interrupted = true; });
        std::signal(SIGTERM, [](int) { g_interrupted = true; });
        const int bound = gw.start(host, port);
        std::cerr << "listening on " << host << ":" << bound << "\n";
        while (!g_interrupted)
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        gw.stop();
        return 0;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_for(e.code());
    }
}

int cmd_state_export(const std::string& gateway_url, const std::string& scenario_path)
{
    if (!gateway_url.empty()) {
        httplib::Client cli(gateway_url);
        httplib::Headers headers;
        if (const char* token = std::getenv("MAESTRO_TOKEN"))
            headers.emplace("Authorization", std::string("Bearer ") + token);
        auto res = cli.Get("/v1/state/export", headers);
        if (!res) {
            std::cerr << "TransportError: " << httplib::to_string(res.error()) << "\n";
            return 2;
        }
        if (res->status != 200) {
            std::cerr << "HTTP " << res->status << "\n";
            return exit_for_status(res->status);
        }
        std::cout << res->body;
        return 0;
    }
    if (!scenario_path.empty()) {
        Scenario scenario;
        try {
            scenario = load_scenario(scenario_path);
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
        const auto report = run_scenario(scenario);
        if (!report.setup_ok) {
            std::cerr << report.setup_error << "\n";
            return 2;
        }
        std::cout << report.runtime->state().export_jsonl();
        return 0;
    }
    std::cerr << "state export needs --gateway or --scenario\n";
    return 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app {"maestro: multimodal multi-agent orchestration"};
    app.require_subcommand(1);
    const auto data = default_data_dir();
    std::string workflows_dir = data + "/workflows";
    std::string fixtures_dir = data + "/fixtures";

    std::string wf_path;
    auto* validate = app.add_subcommand("validate", "Validate a workflow file");
    validate->add_option("workflow", wf_path, "workflow JSON file")->required();

    auto* scenario = app.add_subcommand("scenario", "Scripted scenarios");
    scenario->require_subcommand(1);
    std::string scenario_path, state_out, transcript_out;
    auto* scenario_run = scenario->add_subcommand("run", "Run a scenario against mock fixtures");
    scenario_run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    scenario_run->add_option("--state-out", state_out, "write the state export here");
    scenario_run->add_option("--transcript", transcript_out, "write the turn transcript here");

    std::string ingest_path, index = kDefaultIndex, export_path;
    std::size_t chunk_size = 1000, overlap = 200;
    auto* ingest = app.add_subcommand("ingest", "Split and index a text document");
    ingest->add_option("path", ingest_path, "text/plain or text/markdown file")->required();
    ingest->add_option("--index", index, "index name");
    ingest->add_option("--chunk-size", chunk_size, "chunk size in characters");
    ingest->add_option("--overlap", overlap, "overlap in characters");
    ingest->add_option("--export", export_path, "write the index as JSON lines");

    std::string workflow;
    std::vector<std::string> preload;
    auto* chat = app.add_subcommand("chat", "Chat with a workflow on stdin");
    chat->add_option("--workflow", workflow, "workflow id or file")->required();
    chat->add_option("--workflows-dir", workflows_dir);
    chat->add_option("--fixtures-dir", fixtures_dir);
    chat->add_option("--ingest", preload, "documents to index first");

    std::string listen = "127.0.0.1:8080";
    auto* serve = app.add_subcommand("serve", "Run the HTTP gateway");
    serve->add_option("--listen", listen, "host:port");
    serve->add_option("--workflows-dir", workflows_dir);
    serve->add_option("--fixtures-dir", fixtures_dir);
    serve->add_option("--ingest", preload, "documents to index first");

    auto* state = app.add_subcommand("state", "Shared memory");
    state->require_subcommand(1);
    std::string gateway_url, state_scenario;
    auto* state_export = state->add_subcommand("export", "Dump the state store as JSON lines");
    state_export->add_option("--gateway", gateway_url, "gateway base URL");
    state_export->add_option("--scenario", state_scenario, "run a scenario and export its state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (*validate)
        return cmd_validate(wf_path);
    if (*scenario_run)
        return cmd_scenario(scenario_path, state_out, transcript_out);
    if (*ingest)
        return cmd_ingest(ingest_path, index, chunk_size, overlap, export_path);
    if (*chat)
        return cmd_chat(workflow, workflows_dir, fixtures_dir, preload);
    if (*serve)
        return cmd_serve(listen, workflows_dir, fixtures_dir, preload);
    if (*state_export)
        return cmd_state_export(gateway_url, state_scenario);
    return 2;
}
