// SPDX-License-Identifier: Apache-2.0
#include "maestro/engine/tools.hpp"

#include "maestro/backend/http_transport.hpp"
#include "maestro/backend/mock_backend.hpp"
#include "maestro/core/digest.hpp"
#include "maestro/error.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace maestro {

std::optional<ToolDirective> parse_tool_directive(std::string_view reply)
{
    std::size_t start = 0;
    while (start <= reply.size()) {
        auto end = reply.find('\n', start);
        if (end == std::string_view::npos)
            end = reply.size();
        auto line = reply.substr(start, end - start);
        const auto b = line.find_first_not_of(" \t\r");
        if (b != std::string_view::npos) {
            line = line.substr(b);
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
                line.remove_suffix(1);
            if (line.rfind("TOOL ", 0) == 0) {
                auto rest = line.substr(5);
                rest.remove_prefix(std::min(rest.find_first_not_of(' '), rest.size()));
                const auto sp = rest.find(' ');
                ToolDirective d;
                // Tool names may not contain spaces; everything after the first space is arguments.
                d.name = std::string(rest.substr(0, sp));
                auto args = sp == std::string_view::npos ? std::string_view {} : rest.substr(sp + 1);
                auto parsed = nlohmann::json::parse(args, nullptr, false);
                if (!parsed.is_discarded() && parsed.is_object())
                    d.args = std::move(parsed);
                else
                    d.args = {{"query", std::string(args)}};
                if (!d.name.empty())
                    return d;
            }
        }
        start = end + 1;
    }
    return std::nullopt;
}

std::string tool_result_line(const nlohmann::json& result)
{
    return "TOOL_RESULT " + result.dump();
}

namespace {

std::string query_arg(const NodeSpec& tool, const nlohmann::json& args)
{
    if (!args.contains("query") || !args["query"].is_string() || args["query"].get<std::string>().empty())
        throw Error(Errc::ToolFailure, tool.name + ": missing query argument");
    return args["query"].get<std::string>();
}

double number_config(const NodeSpec& tool, std::string_view key, double fallback)
{
    const auto raw = tool.config_value(key);
    if (raw.empty())
        return fallback;
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end != raw.c_str() + raw.size())
        throw Error(Errc::ToolFailure, tool.name + ": " + std::string(key) + " is not a number");
    return v;
}

ToolOutput rag_search(const NodeSpec& tool, const nlohmann::json& args, ToolEnv& env)
{
    const auto query = query_arg(tool, args);
    const auto* store = env.doc.find(tool.config_value("store"));
    if (!store || store->kind != NodeKind::VectorStore)
        throw Error(Errc::ToolFailure, tool.name + ": store node not found");
    auto& pipeline = env.runtime.index(Runtime::index_name(*store));
    const double threshold = number_config(tool, "threshold", pipeline.config().threshold);
    const auto top_k = static_cast<std::size_t>(number_config(tool, "top_k", static_cast<double>(pipeline.config().top_k)));

    auto r = pipeline.retrieve(query, threshold, top_k);

    ToolOutput out;
    out.details["top_score"] = r.top_score;
    out.details["threshold"] = threshold;
    out.details["k"] = r.k_used;
    out.details["hits"] = nlohmann::json::array();
    for (const auto& h : r.hits)
        out.details["hits"].push_back({{"doc_id", h.chunk->doc_id},
                                       {"chunk_index", h.chunk->chunk_index},
                                       {"score", h.score},
                                       {"rerank_score", h.rerank_score},
                                       {"rank", h.rank}});

    if (r.top_score >= threshold) {
        BackendRequest req;
        req.kind = RequestKind::ChatCompletion;
        req.system_prompt = "Answer the question using only the context below.\n\nContext:\n" + format_hits(r.hits);
        req.messages.push_back({"user", "", {ModalPayload::text(query)}});
        auto resp = env.call_backend(tool.config_value("generation_backend"), req);
        out.result = {{"answer", resp.text.value_or("")}, {"source", "rag"}, {"tool", tool.name}};
        out.source = AnswerSource::Rag;
        return out;
    }

    if (auto fallback = tool.config_value("fallback_tool"); !fallback.empty()) {
        auto web = env.call_tool(fallback, {{"query", query}});
        const auto text = web.result.value("result", web.result.value("answer", std::string()));
        out.result = {{"answer", text}, {"source", "web"}, {"tool", fallback}};
        out.source = AnswerSource::Web;
        return out;
    }
    out.result = {{"answer", "No relevant content was found in the indexed documents."},
                  {"source", "none"},
                  {"tool", tool.name}};
    return out;
}

std::string url_encode(std::string_view s)
{
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%%%02X", c);
            out += buf;
        }
    }
    return out;
}

std::string google_cse(const NodeSpec& tool, const std::string& query, ToolEnv& env)
{
    auto http = env.runtime.backends().http();
    if (!http)
        throw Error(Errc::ToolFailure, tool.name + ": no HTTP transport configured");
    const auto env_name = tool.config_value("credentials_env");
    const char* key = env_name.empty() ? nullptr : std::getenv(env_name.c_str());
    if (!key || !*key)
        throw Error(Errc::ToolFailure, tool.name + ": credential variable " + env_name + " is not set");
    HttpRequest req;
    req.url = tool.config_value("base_url", "https://www.googleapis.com/customsearch/v1") + "?key=" +
              url_encode(key) + "&cx=" + url_encode(tool.config_value("cx")) + "&q=" + url_encode(query);
    HttpResponse resp;
    try {
        resp = http->send(req, kDefaultTimeout);
    } catch (const Error& e) {
        // The request URL carries the key, so only the error class is reported.
        throw Error(Errc::ToolFailure, tool.name + ": " + std::string(to_string(e.code())));
    }
    if (resp.status != 200)
        throw Error(Errc::ToolFailure, tool.name + ": status " + std::to_string(resp.status));
    auto j = nlohmann::json::parse(resp.body, nullptr, false);
    std::string text;
    if (!j.is_discarded() && j.contains("items") && j["items"].is_array()) {
        for (const auto& item : j["items"]) {
            if (!text.empty())
                text += "\n";
            text += item.value("title", "") + ": " + item.value("snippet", "");
        }
    }
    return text.empty() ? "No results." : text;
}

ToolOutput web_search(const NodeSpec& tool, const nlohmann::json& args, ToolEnv& env)
{
    const auto query = query_arg(tool, args);
    const auto adapter = tool.config_value("adapter", "mock");
    std::string text;
    if (adapter == "mock") {
        auto set = env.runtime.backends().fixture_set(tool.config_value("fixture_set"));
        const auto* entry = set->find(sha256_hex(query), "web_search");
        if (!entry || !entry->text)
            throw Error(Errc::ToolFailure, tool.name + ": FixtureMiss for query digest " + sha256_hex(query));
        text = *entry->text;
    } else if (adapter == "google_cse") {
        text = google_cse(tool, query, env);
    } else {
        throw Error(Errc::ToolFailure, tool.name + ": unknown adapter " + adapter);
    }
    ToolOutput out;
    out.result = {{"result", text}, {"tool", tool.name}};
    out.source = AnswerSource::Web;
    return out;
}

ToolOutput subflow(const NodeSpec& tool, const nlohmann::json& args, ToolEnv& env)
{
    const auto query = query_arg(tool, args);
    auto answer = env.run_subflow(tool.config_value("workflow"), query);
    ToolOutput out;
    out.result = {{"answer", answer.text}, {"tool", tool.name}, {"workflow", tool.config_value("workflow")}};
    if (answer.source)
        out.result["source"] = answer.source == AnswerSource::Rag ? "rag" : "web";
    out.source = answer.source;
    for (const auto& p : answer.payloads)
        if (!p.is_text())
            out.attachments.push_back(p);
    out.details["turn_id"] = answer.turn_id;
    return out;
}

} // namespace

ToolOutput run_tool(const NodeSpec& tool, const nlohmann::json& args, ToolEnv& env)
{
    const auto kind = tool.config_value("kind");
    try {
        if (kind == "rag_search")
            return rag_search(tool, args, env);
        if (kind == "web_search")
            return web_search(tool, args, env);
        if (kind == "subflow")
            return subflow(tool, args, env);
    } catch (const Error& e) {
        switch (e.code()) {
        case Errc::ToolFailure:
        case Errc::BackendFailure:
        case Errc::Timeout:
        case Errc::ProviderError:
        case Errc::AuthError:
        case Errc::TransportError:
        case Errc::FixtureMiss:
            throw;
        default:
            break;
        }
        throw Error(Errc::ToolFailure, tool.name + ": " + e.what());
    }
    throw Error(Errc::ToolFailure, tool.name + ": unknown tool kind " + kind);
}

} // namespace maestro
