// SPDX-License-Identifier: Apache-2.0
#include "maestro/gateway/gateway.hpp"
#include "maestro/core/serialize.hpp"
#include "maestro/scenario/scenario.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace maestro;
using maestro::test::data_path;
using maestro::test::slurp;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

class TempDir {
public:
    TempDir()
    {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("maestro-cli-" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& content) const
    {
        const auto p = (path_ / name).string();
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s)
        out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

RunResult run(const std::vector<std::string>& args, const std::string& input = "")
{
    TempDir tmp;
    const auto in = tmp.file("stdin", input);
    const auto err = tmp.path("stderr");
    std::string cmd = quote(MAESTRO_CLI);
    for (const auto& a : args)
        cmd += " " + quote(a);
    cmd += " < " + quote(in) + " 2> " + quote(err);
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

} // namespace

TEST(Cli, ValidateExitCodes)
{
    for (const auto& wf : {"code_review", "rag", "image_gen", "video_gen", "integrated"}) {
        auto r = run({"validate", data_path(std::string("workflows/") + wf + ".flow.json")});
        EXPECT_EQ(r.exit_code, 0) << wf << ": " << r.err;
    }

    TempDir tmp;
    auto doc = nlohmann::json::parse(slurp(data_path("workflows/code_review.flow.json")));
    auto& nodes = doc["nodes"];
    nodes.erase(std::remove_if(nodes.begin(), nodes.end(), [](const auto& n) { return n["kind"] == "supervisor"; }),
                nodes.end());
    auto broken = run({"validate", tmp.file("broken.flow.json", doc.dump())});
    EXPECT_EQ(broken.exit_code, 1);
    EXPECT_NE(broken.err.find("\"W001\""), std::string::npos) << broken.err;

    auto dup = nlohmann::json::parse(slurp(data_path("workflows/code_review.flow.json")));
    dup["nodes"].push_back(dup["nodes"][1]);
    auto dup_run = run({"validate", tmp.file("dup.flow.json", dup.dump())});
    EXPECT_EQ(dup_run.exit_code, 1);
    EXPECT_NE(dup_run.err.find("\"W012\""), std::string::npos);

    EXPECT_EQ(run({"validate", tmp.file("junk.flow.json", "{not json")}).exit_code, 2);
    EXPECT_EQ(run({"validate", tmp.path("absent.flow.json")}).exit_code, 2);
    EXPECT_EQ(run({"no-such-command"}).exit_code, 2);
}

TEST(Cli, ScenarioRun)
{
    TempDir tmp;
    const auto transcript = tmp.path("t.jsonl");
    auto r = run({"scenario", "run", data_path("scenarios/s2_rag.json"), "--transcript", transcript});
    EXPECT_EQ(r.exit_code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("s2_rag: passed"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    EXPECT_EQ(lines(slurp(transcript)).size(), 3u);

    auto again = run({"scenario", "run", data_path("scenarios/s2_rag.json"), "--transcript", tmp.path("t2.jsonl")});
    EXPECT_EQ(slurp(transcript), slurp(tmp.path("t2.jsonl")));

    auto sc = nlohmann::json::parse(slurp(data_path("scenarios/s1_code.json")));
    sc["workflow"] = data_path("workflows/code_review.flow.json");
    sc["workflows_dir"] = data_path("workflows");
    sc["fixtures_dir"] = tmp.path("no-fixtures");
    auto missing = run({"scenario", "run", tmp.file("s1.json", sc.dump())});
    EXPECT_EQ(missing.exit_code, 2);
    EXPECT_NE(missing.err.find("setup"), std::string::npos);
}

TEST(Cli, IngestPrintsDocument)
{
    TempDir tmp;
    const auto text = slurp(data_path("docs/dress_code.txt"));
    auto r = run({"ingest", data_path("docs/dress_code.txt"), "--chunk-size", "120", "--overlap", "20", "--export",
                  tmp.path("index.jsonl")});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["doc_id"], sha256_hex(std::string_view(text)));
    EXPECT_EQ(j["chunks"], 8);
    EXPECT_EQ(j["index"], "default");
    EXPECT_EQ(lines(slurp(tmp.path("index.jsonl"))).size(), 8u);

    EXPECT_EQ(run({"ingest", tmp.file("x.pdf", "%PDF")}).exit_code, 1);
    EXPECT_NE(run({"ingest", tmp.path("absent.txt")}).exit_code, 0);
}

TEST(Cli, ChatTranscriptMatchesGateway)
{
    const std::string dress = "What is the men's dress code?";
    const std::string pop = "What is the population of South Korea in 2024?";
    auto r = run({"chat", "--workflow", "rag", "--workflows-dir", data_path("workflows"), "--fixtures-dir",
                  data_path("fixtures"), "--ingest", data_path("docs/dress_code.txt")},
                 dress + "\n" + pop + "\n/quit\n");
    ASSERT_EQ(r.exit_code, 0) << r.err;

    // Same turns through the gateway; the CLI output is the rendered trace plus the final line.
    RuntimeOptions o;
    o.fixtures_dir = data_path("fixtures");
    auto rt = std::make_shared<Runtime>(o);
    rt->load_workflows_dir(data_path("workflows"));
    rt->ingest("default", slurp(data_path("docs/dress_code.txt")), "text/plain");
    Gateway gw(rt);
    const auto sid = gw.create_session({{"workflow_id", "rag"}})["session_id"].get<std::string>();
    std::string expected;
    for (const auto& q : {dress, pop}) {
        const auto turn = gw.post_message(sid, q, {})["turn_id"].get<std::string>();
        gw.wait_idle();
        const auto trace = gw.turn_trace(turn);
        for (const auto& e : trace["events"])
            if (const auto s = render_event_line(trace_event_from_json(e)); !s.empty())
                expected += s + "\n";
        const auto done = gw.events(sid, 1).back().data;
        ASSERT_EQ(done["type"], "done");
        expected += "[supervisor] " + render_message_text(message_from_json(done["message"])) + " (source: " +
                    done["source"].get<std::string>() + ")\n";
    }
    gw.stop();
    EXPECT_EQ(r.out, expected);
}

TEST(Cli, ServeAnswersHealthAndStopsOnSigterm)
{
    int fds[2];
    ASSERT_EQ(pipe(fds), 0);
    const pid_t pid = fork();
    ASSERT_GE(pid, 0);
    if (pid == 0) {
        dup2(fds[1], STDERR_FILENO);
        close(fds[0]);
        close(fds[1]);
        setenv("MAESTRO_TOKEN", "cli-token", 1);
        execl(MAESTRO_CLI, MAESTRO_CLI, "serve", "--listen", "127.0.0.1:0", "--workflows-dir",
              data_path("workflows").c_str(), "--fixtures-dir", data_path("fixtures").c_str(), (char*)nullptr);
        _exit(127);
    }
    close(fds[1]);
    std::string banner;
    char c;
    while (read(fds[0], &c, 1) == 1 && c != '\n')
        banner += c;
    close(fds[0]);
    const auto colon = banner.rfind(':');
    ASSERT_NE(colon, std::string::npos) << banner;
    const int port = std::stoi(banner.substr(colon + 1));

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/healthz");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(client.Get("/v1/workflows")->status, 401);
    client.set_bearer_token_auth("cli-token");
    EXPECT_EQ(client.Get("/v1/workflows")->status, 200);

    const auto url = "http://127.0.0.1:" + std::to_string(port);
    unsetenv("MAESTRO_TOKEN");
    EXPECT_EQ(run({"state", "export", "--gateway", url}).exit_code, 1);
    setenv("MAESTRO_TOKEN", "cli-token", 1);
    auto exported = run({"state", "export", "--gateway", url});
    unsetenv("MAESTRO_TOKEN");
    EXPECT_EQ(exported.exit_code, 0) << exported.err;
    EXPECT_TRUE(exported.out.empty());

    kill(pid, SIGTERM);
    int status = 0;
    waitpid(pid, &status, 0);
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 0);
}

TEST(Cli, StateExportFromScenario)
{
    auto r = run({"state", "export", "--scenario", data_path("scenarios/s1_code.json")});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    auto rows = lines(r.out);
    ASSERT_FALSE(rows.empty());
    for (const auto& row : rows)
        EXPECT_TRUE(nlohmann::json::parse(row).contains("version"));
    EXPECT_EQ(run({"state", "export"}).exit_code, 2);
}
