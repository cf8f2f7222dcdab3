// SPDX-License-Identifier: Apache-2.0
// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "maestro/gateway/gateway.hpp"
#include "maestro/rag/embedder.hpp"
#include "maestro/rag/vector_index.hpp"
#include "maestro/resilience/fallback.hpp"
#include "maestro/resilience/health.hpp"
#include "maestro/resilience/retry.hpp"
#include "maestro/scenario/scenario.hpp"
#include "maestro/state/state_store.hpp"
#include "maestro/workflow/validate.hpp"

#include "splitter_checks.hpp"
#include "sse_parser.hpp"
#include "test_support.hpp"
#include "wire_harness.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

using namespace maestro;
using namespace maestro::test;

namespace {

using Clock = std::chrono::steady_clock;

// Collects the first few failure notes of one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what)
    {
        if (!ok && notes_.size() < 4)
            notes_.push_back(what);
        failed_ = failed_ || !ok;
    }
    bool failed() const { return failed_; }
    std::string notes() const
    {
        std::string out;
        for (const auto& n : notes_)
            out += (out.empty() ? "" : "; ") + n;
        return out;
    }

private:
    bool failed_ = false;
    std::vector<std::string> notes_;
};

long long ms_since(Clock::time_point t)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t).count();
}

std::string texts(const std::string& key)
{
    return load_json("goldens/scenario_texts.json")[key].get<std::string>();
}

std::shared_ptr<Runtime> bundled_runtime()
{
    RuntimeOptions o;
    o.fixtures_dir = data_path("fixtures");
    auto rt = std::make_shared<Runtime>(o);
    rt->load_workflows_dir(data_path("workflows"));
    return rt;
}

ChatMessage with_blob(Runtime& rt, const std::string& file, Modality m, const std::string& media,
                      const std::string& text = "")
{
    std::vector<ModalPayload> payloads {ModalPayload::blob(m, rt.blobs().put(slurp(data_path(file)), media))};
    if (!text.empty())
        payloads.push_back(ModalPayload::text(text));
    return make_message(Author::user(), std::move(payloads));
}

void code_scenario(Check& c)
{
    auto run = [] {
        auto rt = bundled_runtime();
        Engine engine(rt);
        Session s;
        s.id = "s1";
        return engine.run_turn(s,
                               with_blob(*rt, "media/sample_code.png", Modality::Image, "image/png",
                                         "Analyze the image and complete the code"),
                               *rt->workflow("code_review"));
    };
    const auto t0 = Clock::now();
    const auto first = run();
    const auto elapsed = ms_since(t0);
    const auto second = run();
    c.expect(worker_order(first.trace) == std::vector<std::string> {"Senior Programmer", "Quality Assurance Engineer"},
             "worker order");
    std::vector<std::string> decisions;
    for (const auto& e : first.trace.events)
        if (e.type == TraceEventType::Decision)
            decisions.push_back(e.name);
    c.expect(decisions == std::vector<std::string> {"Senior Programmer", "Quality Assurance Engineer", "FINISH"},
             "decisions end with FINISH");
    c.expect(first.final_message.text().find(texts("s1_completed_code")) != std::string::npos,
             "completed code verbatim");
    c.expect(final_message_json(first.final_message).dump() == final_message_json(second.final_message).dump(),
             "byte-identical reruns");
    c.expect(elapsed < 2000, "took " + std::to_string(elapsed) + " ms");
}

void rag_scenario(Check& c)
{
    auto rt = bundled_runtime();
    rt->ingest("default", slurp(data_path("docs/dress_code.txt")), "text/plain");
    Engine engine(rt);
    const auto& doc = *rt->workflow("rag");
    Session s;
    s.id = "s2";
    auto timed = [&](ChatMessage msg) {
        const auto t0 = Clock::now();
        auto r = engine.run_turn(s, std::move(msg), doc);
        c.expect(ms_since(t0) < 2000, "turn over 2 s");
        return r;
    };
    const auto dress = timed(make_text_message(Author::user(), "What is the men's dress code?"));
    c.expect(dress.source == AnswerSource::Rag, "dress source");
    c.expect(count_events(dress.trace, TraceEventType::ToolCall, "search_dress_code") >= 1, "dress tool call");
    c.expect(count_events(dress.trace, TraceEventType::ToolCall, "google-custom-search") == 0, "dress used web");

    const auto pop = timed(make_text_message(Author::user(), "What is the population of South Korea in 2024?"));
    c.expect(pop.source == AnswerSource::Web, "population source");
    c.expect(count_events(pop.trace, TraceEventType::ToolCall, "google-custom-search") == 1, "population web calls");

    const auto voice = timed(with_blob(*rt, "media/voice_query.wav", Modality::Audio, "audio/wav"));
    c.expect(voice.source == AnswerSource::Web, "audio source");
    c.expect(count_events(voice.trace, TraceEventType::ToolCall, "google-custom-search") == 1, "audio web calls");
    c.expect(s.messages.size() == 6 && s.messages[4].text() == "What is the population of South Korea in 2024?",
             "audio transcription");
}

void wire_goldens(Check& c)
{
    {
        WireHarness h;
        h.use_prediction("image_gen", "stable_diffusion", "image_gen", "image_generation");
        h.turn("image_gen", {},
               "Wait for the bus. A snowy winter scene with large snowflakes falling from the sky. a stunning girl "
               "sat on a bench on the bus platform and looked into the distance. She was wearing a dark thick coat "
               "and a bright red scarf.");
        const auto reqs = h.http->requests();
        c.expect(!reqs.empty(), "no text-to-image request");
        if (!reqs.empty()) {
            c.expect(reqs[0].body == slurp(data_path("goldens/wire/s3_text_to_image.json")), "text-to-image golden");
            c.expect(reqs[0].body.find("stability-ai/stable-diffusion-3.5-large-turbo") != std::string::npos,
                     "image slug");
            c.expect(reqs[0].body.find("Create a high-resolution, clear image") != std::string::npos, "image prompt");
        }
    }
    {
        WireHarness h;
        h.use_prediction("video_gen", "luma_ray", "video_gen", "video_generation");
        h.turn("video_gen", {"media/sample_mountain.png"}, "Create a video of a fantastic landscape.");
        const auto reqs = h.http->requests();
        c.expect(!reqs.empty(), "no image-to-video request");
        if (!reqs.empty()) {
            c.expect(reqs[0].body == slurp(data_path("goldens/wire/s4_image_to_video.json")), "image-to-video golden");
            c.expect(reqs[0].body.find("luma/ray") != std::string::npos, "video slug");
            const auto uri =
                "data:image/png;base64," + base64_encode(to_bytes(slurp(data_path("media/sample_mountain.png"))));
            c.expect(reqs[0].body.find(uri) != std::string::npos, "uploaded image");
        }
    }
}

void splitter(Check& c)
{
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<std::size_t> size_dist(8, 512);
    for (int i = 0; i < 10'000; ++i) {
        const auto text = random_text(rng, 5'000);
        const auto size = size_dist(rng);
        const auto overlap = std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
        const auto msg = check_properties(text, size, overlap, split_recursive(text, size, overlap));
        c.expect(msg.empty(), "case " + std::to_string(i) + ": " + msg);
    }
    const std::vector<std::pair<std::string, std::string>> goldens = {
        {"dress_code.txt", "dress_code_120_20.json"},
        {"dress_code.txt", "dress_code_1000_200.json"},
        {"travel_policy.md", "travel_policy_100_15.json"},
        {"onboarding_notes.txt", "onboarding_notes_200_30.json"}};
    for (const auto& [doc, golden] : goldens) {
        const auto g = load_json("goldens/splitter/" + golden);
        const auto chunks = split_recursive(slurp(data_path("docs/" + doc)), g["chunk_size"].get<std::size_t>(),
                                            g["overlap"].get<std::size_t>());
        bool same = chunks.size() == g["chunks"].size();
        for (std::size_t i = 0; same && i < chunks.size(); ++i) {
            const auto& w = g["chunks"][i];
            same = chunks[i].text == w["text"].get<std::string>() &&
                   chunks[i].char_offset == w["char_offset"].get<std::size_t>() &&
                   chunks[i].chunk_index == w["chunk_index"].get<std::size_t>();
        }
        c.expect(same, golden);
    }
}

void vector_search(Check& c)
{
    constexpr std::size_t kDim = 26;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_vec = [&] {
        std::vector<double> v(kDim);
        for (auto& x : v)
            x = gauss(rng);
        return v;
    };
    auto oracle = [](const std::vector<double>& a, const std::vector<double>& b) {
        long double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += static_cast<long double>(a[i]) * b[i];
            na += static_cast<long double>(a[i]) * a[i];
            nb += static_cast<long double>(b[i]) * b[i];
        }
        return na == 0 || nb == 0 ? 0.0 : static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
    };
    VectorIndex index(kDim);
    std::vector<std::vector<double>> all;
    std::vector<std::string> names;
    for (int d = 0; d < 100; ++d) {
        std::vector<DocumentChunk> chunks;
        for (int k = 0; k < 100; ++k) {
            DocumentChunk ch;
            ch.doc_id = "doc" + std::to_string(d);
            ch.chunk_index = k;
            ch.text = ch.doc_id + "/" + std::to_string(k);
            ch.embedding = random_vec();
            all.push_back(*ch.embedding);
            names.push_back(ch.text);
            chunks.push_back(std::move(ch));
        }
        index.upsert_document("doc" + std::to_string(d), std::move(chunks));
    }
    std::uniform_int_distribution<std::size_t> k_dist(1, 20);
    for (int q = 0; q < 100; ++q) {
        const auto query = random_vec();
        const auto k = k_dist(rng);
        std::vector<double> scores(all.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            scores[i] = oracle(query, all[i]);
        std::vector<std::size_t> order(all.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
        const auto hits = index.search_top_k(query, k);
        bool same = hits.size() == k;
        for (std::size_t i = 0; same && i < k; ++i)
            same = hits[i].chunk->text == names[order[i]] && std::abs(hits[i].score - scores[order[i]]) <= 1e-9;
        c.expect(same, "query " + std::to_string(q));
    }
    const auto v = LetterFrequencyEmbedder().embed("abab");
    bool abab = v.size() == 26 && std::abs(v[0] - 0.7071067811865476) <= 1e-6 &&
                std::abs(v[1] - 0.7071067811865476) <= 1e-6;
    for (std::size_t i = 2; abab && i < v.size(); ++i)
        abab = std::abs(v[i]) <= 1e-6;
    c.expect(abab, "mock(\"abab\")");
}

void state_store(Check& c)
{
    auto text = [](const VersionedEntry& e) { return std::get<std::string>(e.value); };
    {
        StateStore s;
        std::vector<std::thread> threads;
        for (int i = 0; i < 100; ++i)
            threads.emplace_back([&s, i] { s.put("ns", "hot", "w" + std::to_string(i), "w"); });
        for (auto& t : threads)
            t.join();
        const auto hist = s.history("ns", "hot");
        bool contiguous = hist.size() == 100;
        for (std::size_t i = 0; contiguous && i < hist.size(); ++i)
            contiguous = hist[i].version == i + 1;
        c.expect(contiguous, "racing writers");
    }
    {
        StateStore s;
        s.put("ns", "counter", std::string("0"), "init");
        std::vector<std::thread> threads;
        for (int i = 0; i < 10; ++i)
            threads.emplace_back([&] {
                while (true) {
                    const auto cur = s.get("ns", "counter");
                    const int n = std::stoi(text(*cur));
                    if (s.compare_and_put("ns", "counter", cur->version, std::to_string(n + 1), "inc").ok)
                        return;
                }
            });
        for (auto& t : threads)
            t.join();
        const auto final = s.get("ns", "counter");
        c.expect(text(*final) == "10" && final->version == 11, "CAS counter");
    }
    {
        StateStore s;
        for (const auto* v : {"v1", "v2", "v3"})
            s.put("ns", "k", std::string(v), "a");
        const auto version = s.rollback("ns", "k", 1, "undo");
        const auto hist = s.history("ns", "k");
        c.expect(version == 4 && hist.size() == 4 && text(hist[1]) == "v2" && text(hist[3]) == "v1",
                 "rollback appends");
    }
}

void resilience(Check& c)
{
    {
        ManualClock clock;
        std::vector<AttemptRecord> records;
        RetryObserver obs;
        obs.on_attempt = [&](const AttemptRecord& r) { records.push_back(r); };
        with_retry(
            RetryPolicy {}, clock,
            [](int attempt) {
                if (attempt < 3)
                    throw Error(Errc::Timeout, "slow");
                return 0;
            },
            obs);
        c.expect(records.size() == 3 && records[1].delay_before == Millis(100) && records[2].delay_before == Millis(200),
                 "fail-fail-succeed delays");
    }
    {
        ManualClock clock;
        HealthMonitor h(clock);
        std::vector<int> alert_at;
        for (int i = 1; i <= 9; ++i) {
            if (h.record_failure("sd"))
                alert_at.push_back(i);
            clock.advance(Millis(5'000));
        }
        c.expect(alert_at == std::vector<int> {5}, "one alert at the 5th failure");
    }
    {
        ManualClock clock;
        HealthMonitor health(clock);
        auto primary = std::make_shared<ScriptedBackend>("p", std::vector {ScriptedBackend::fail(Errc::Timeout)});
        auto alt = std::make_shared<ScriptedBackend>("alt", std::vector {ScriptedBackend::fail(Errc::Timeout)});
        std::vector<std::string> order;
        ResilienceHooks hooks;
        hooks.on_fallback = [&](const std::string& from, const std::string& to) { order.push_back(from + "->" + to); };
        hooks.on_attempt = [&](const std::string& b, const AttemptRecord&) { order.push_back(b); };
        const auto r = route_with_fallback({primary, alt, std::string("{binding} unavailable")}, chat_request("q"),
                                           clock, &health, nullptr, {}, hooks);
        c.expect(r.degraded && alt->calls() == 3 && order.size() == 7 && order[3] == "p->alt" && order[6] == "alt",
                 "alternate before degradation");
    }
}

void termination(Check& c)
{
    RuntimeOptions o;
    ManualClock clock;
    o.clock = &clock;
    auto rt = std::make_shared<Runtime>(o);
    rt->add_workflow(parse_workflow(R"({
      "id": "endless", "name": "Endless", "entry": "Supervisor", "max_hops": 8, "shared_memory": "endless",
      "nodes": [
        {"name": "Supervisor", "kind": "supervisor", "profile": {"system_template": "Workers: {team_members}.", "backend": "sup"}},
        {"name": "A", "kind": "worker", "profile": {"system_template": "You are A.", "backend": "wk"}},
        {"name": "sup", "kind": "backend", "config": {"adapter": "mock", "fixture_set": "unused"}},
        {"name": "wk", "kind": "backend", "config": {"adapter": "mock", "fixture_set": "unused"}}
      ],
      "edges": [["Supervisor", "A"]]
    })"));
    auto wk = std::make_shared<ScriptedBackend>("wk", std::vector {ScriptedBackend::ok("more")});
    rt->backends().override_backend("sup", std::make_shared<ScriptedBackend>("sup", std::vector {ScriptedBackend::ok("A")}));
    rt->backends().override_backend("wk", wk);
    Engine engine(rt);
    Session s;
    s.id = "loop";
    const auto r = engine.run_turn(s, make_text_message(Author::user(), "never stop"), *rt->workflow("endless"));
    c.expect(count_events(r.trace, TraceEventType::WorkerCall) == 8 && wk->calls() == 8, "8 worker executions");
    const auto& last = r.trace.events.back();
    c.expect(last.type == TraceEventType::Degraded && last.body.value("reason", "") == "HopLimitExceeded",
             "HopLimitExceeded");
    c.expect(r.final_message.degraded, "final degraded flag");
}

void workflow_validation(Check& c)
{
    const std::vector<std::string> ids = {"code_review", "rag", "image_gen", "video_gen", "integrated"};
    auto known = [&](const std::string& id) { return std::find(ids.begin(), ids.end(), id) != ids.end(); };
    auto load = [](const std::string& id) { return load_workflow_file(data_path("workflows/" + id + ".flow.json")); };
    for (const auto& id : ids)
        c.expect(validate_workflow(load(id), known).empty(), id + " not clean");
    auto has = [](const std::vector<Diagnostic>& diags, const std::string& code) {
        return std::any_of(diags.begin(), diags.end(),
                           [&](const Diagnostic& d) { return d.code == code && d.severity == Severity::Error; });
    };
    auto no_sup = load("code_review");
    std::erase_if(no_sup.nodes, [](const NodeSpec& n) { return n.kind == NodeKind::Supervisor; });
    c.expect(has(validate_workflow(no_sup), "W001"), "W001");
    auto dup = load("code_review");
    dup.nodes.push_back(dup.nodes[1]);
    c.expect(has(validate_workflow(dup), "W012"), "W012");
    auto dangling = load("rag");
    for (auto& n : dangling.nodes)
        if (n.name == "RAG Contents Searcher")
            n.profile->tools.push_back("no_such_tool");
    c.expect(has(validate_workflow(dangling), "W003"), "W003");
}

class GatewayClient {
public:
    explicit GatewayClient(int port) : port_(port) {}

    httplib::Client client() const
    {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(30, 0);
        c.set_bearer_token_auth("acceptance");
        return c;
    }

    std::string session(const std::string& workflow) const
    {
        auto r = client().Post("/v1/sessions", nlohmann::json {{"workflow_id", workflow}}.dump(), "application/json");
        return r && r->status == 201 ? nlohmann::json::parse(r->body)["session_id"].get<std::string>() : "";
    }

    std::string post(const std::string& sid, const httplib::MultipartFormDataItems& items) const
    {
        auto r = client().Post("/v1/sessions/" + sid + "/messages", items);
        return r && r->status == 202 ? nlohmann::json::parse(r->body)["turn_id"].get<std::string>() : "";
    }

    std::vector<Frame> follow(const std::string& sid, const std::string& query,
                              const std::function<bool(const std::vector<Frame>&)>& stop) const
    {
        SseParser parser;
        client().Get("/v1/sessions/" + sid + "/events" + query, [&](const char* d, std::size_t n) {
            parser.feed(d, n);
            return !stop(parser.frames);
        });
        return parser.frames;
    }

    std::vector<Frame> until_done(const std::string& sid, const std::string& turn, const std::string& query) const
    {
        return follow(sid, query, [&](const std::vector<Frame>& fs) {
            return !fs.empty() && fs.back().data.value("turn_id", "") == turn &&
                   (fs.back().type == "done" || fs.back().type == "error");
        });
    }

    std::vector<Frame> replay(const std::string& sid) const
    {
        SseParser parser;
        if (auto r = client().Get("/v1/sessions/" + sid + "/events?follow=0"))
            parser.feed(r->body.data(), r->body.size());
        return parser.frames;
    }

    nlohmann::json trace(const std::string& turn) const
    {
        auto r = client().Get("/v1/turns/" + turn + "/trace");
        return r && r->status == 200 ? nlohmann::json::parse(r->body) : nlohmann::json::object();
    }

private:
    int port_;
};

bool contiguous(const std::vector<Frame>& frames, std::uint64_t first)
{
    for (std::size_t i = 0; i < frames.size(); ++i)
        if (frames[i].seq != first + i)
            return false;
    return true;
}

// Frames of a turn are its trace events in order plus exactly one done.
bool frames_equal_trace(const std::vector<Frame>& all, const std::string& turn, const nlohmann::json& trace)
{
    std::vector<Frame> frames;
    for (const auto& f : all)
        if (f.data.value("turn_id", "") == turn)
            frames.push_back(f);
    const auto& events = trace.value("events", nlohmann::json::array());
    if (frames.size() != events.size() + 1 || frames.back().type != "done")
        return false;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& d = frames[i].data;
        if (d["trace_seq"] != events[i]["seq"] || d["event"] != events[i]["event"] || d["name"] != events[i]["name"] ||
            d["digest"] != events[i]["digest"] || d["body"] != events[i]["body"])
            return false;
    }
    return true;
}

void gateway_conformance(Check& c)
{
    auto rt = bundled_runtime();
    auto slow = nlohmann::json::parse(slurp(data_path("workflows/rag.flow.json")));
    slow["id"] = "rag_slow";
    for (auto& n : slow["nodes"])
        if (n["kind"] == "backend")
            n["config"]["delay_ms"] = "60";
    rt->add_workflow(parse_workflow(slow.dump()));
    GatewayOptions opts;
    opts.token = "acceptance";
    Gateway gw(rt, opts);
    const int port = gw.start("127.0.0.1", 0);
    GatewayClient g(port);

    httplib::MultipartFormDataItems doc {{"file", slurp(data_path("docs/dress_code.txt")), "dress_code.txt", "text/plain"}};
    auto ingested = g.client().Post("/v1/rag/documents", doc);
    c.expect(ingested && ingested->status == 201, "ingest");

    const auto sid = g.session("rag");
    std::vector<std::string> turns;
    std::vector<Frame> live;
    const std::vector<httplib::MultipartFormDataItems> inputs = {
        {{"text", "What is the men's dress code?", "", ""}},
        {{"text", "What is the population of South Korea in 2024?", "", ""}},
        {{"file", slurp(data_path("media/voice_query.wav")), "voice_query.wav", "audio/wav"}}};
    for (const auto& in : inputs) {
        const auto turn = g.post(sid, in);
        c.expect(!turn.empty(), "message accepted");
        turns.push_back(turn);
        const auto from = live.empty() ? 1 : live.back().seq + 1;
        const auto frames = g.until_done(sid, turn, "?from_seq=" + std::to_string(from));
        live.insert(live.end(), frames.begin(), frames.end());
    }
    const auto all = g.replay(sid);
    c.expect(contiguous(all, 1) && all.size() == live.size(), "session frames contiguous");
    const std::vector<std::string> sources = {"rag", "web", "web"};
    for (std::size_t i = 0; i < turns.size(); ++i) {
        c.expect(frames_equal_trace(all, turns[i], g.trace(turns[i])), "turn " + turns[i] + " frames != trace + done");
        c.expect(frames_equal_trace(live, turns[i], g.trace(turns[i])), "live turn " + turns[i]);
        for (const auto& f : all)
            if (f.type == "done" && f.data["turn_id"] == turns[i])
                c.expect(f.data["source"] == sources[i], "turn " + turns[i] + " source");
    }

    // Disconnect after three frames of a slow turn, then resume from the next seq.
    const auto slow_sid = g.session("rag_slow");
    const auto slow_turn = g.post(slow_sid, {{"text", "What is the population of South Korea in 2024?", "", ""}});
    const auto head = g.follow(slow_sid, "", [](const std::vector<Frame>& fs) { return fs.size() >= 3; });
    c.expect(head.size() == 3 && head.back().type != "done", "disconnect happened mid-turn");
    const auto tail = g.until_done(slow_sid, slow_turn, "?from_seq=" + std::to_string(head.back().seq + 1));
    std::vector<Frame> joined = head;
    joined.insert(joined.end(), tail.begin(), tail.end());
    c.expect(contiguous(joined, 1), "resume has gaps");
    c.expect(frames_equal_trace(joined, slow_turn, g.trace(slow_turn)), "resumed frames != trace + done");

    gw.stop();
    namespace fs = std::filesystem;
    const std::set<std::string> ui_dirs = {"ui", "chat-ui", "chat_ui", "frontend", "web"};
    bool ui = false;
    for (const auto& entry : fs::directory_iterator(MAESTRO_SOURCE_DIR))
        ui = ui || (entry.is_directory() && ui_dirs.count(entry.path().filename().string()));
    c.expect(!ui, "a UI directory exists");
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
        {"S1 code-from-image: worker order, verbatim code, deterministic, under 2 s", code_scenario},
        {"S2 RAG and web search: sources and tool calls for text and audio, under 2 s", rag_scenario},
        {"S3/S4 wire requests byte-match goldens", wire_goldens},
        {"Splitter: 10000 random property cases and oracle goldens", splitter},
        {"Vector search: equals exhaustive-scan oracle; mock(\"abab\")", vector_search},
        {"State store: racing writers, CAS counter, rollback appends", state_store},
        {"Resilience: retry delays, single alert, alternate before degradation", resilience},
        {"Termination: hop limit after 8 worker executions, degraded final message", termination},
        {"Workflow validation: bundled clean, W001/W012/W003 mutations", workflow_validation},
        {"Gateway conformance: SSE frames equal trace plus done, gap-free resume", gateway_conformance},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Check c;
        try {
            fn(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        if (c.failed())
            ++failures;
        std::cout << (c.failed() ? "FAIL " : "PASS ") << name;
        if (c.failed())
            std::cout << " (" << c.notes() << ")";
        std::cout << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
