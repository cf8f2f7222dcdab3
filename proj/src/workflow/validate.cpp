// SPDX-License-Identifier: Apache-2.0
#include "maestro/workflow/validate.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <set>

namespace maestro {

std::string_view to_string(Severity s)
{
    return s == Severity::Error ? "error" : "warning";
}

std::string diagnostic_json(const Diagnostic& d)
{
    nlohmann::ordered_json j;
    j["code"] = d.code;
    j["severity"] = to_string(d.severity);
    j["node"] = d.node;
    j["msg"] = d.msg;
    return j.dump();
}

bool has_errors(const std::vector<Diagnostic>& diags)
{
    return std::any_of(diags.begin(), diags.end(), [](const auto& d) { return d.severity == Severity::Error; });
}

namespace {

const std::set<std::string, std::less<>> kBuiltinVars = {"team_members", "query", "company"};
const std::set<std::string, std::less<>> kRequestKinds = {
    "chat_completion", "vision_completion", "transcription", "image_generation", "video_generation"};

bool is_number(std::string_view s)
{
    if (s.empty())
        return false;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
}

class Checker {
public:
    Checker(const WorkflowDoc& doc, const WorkflowResolver& resolver) : doc_(doc), resolver_(resolver) {}

    std::vector<Diagnostic> run()
    {
        check_names();
        check_topology();
        for (const auto& n : doc_.nodes) {
            check_shape(n);
            if (n.is_agent() && n.profile)
                check_agent(n);
            else if (n.kind == NodeKind::Backend)
                check_backend(n);
            else if (n.kind == NodeKind::Tool)
                check_tool(n);
            else if (n.kind == NodeKind::VectorStore)
                check_store(n);
        }
        return std::move(out_);
    }

private:
    void error(const char* code, const std::string& node, std::string msg)
    {
        out_.push_back({code, Severity::Error, node, std::move(msg)});
    }

    void warning(const char* code, const std::string& node, std::string msg)
    {
        out_.push_back({code, Severity::Warning, node, std::move(msg)});
    }

    const NodeSpec* node_of_kind(std::string_view name, NodeKind kind) const
    {
        const auto* n = doc_.find(name);
        return n && n->kind == kind ? n : nullptr;
    }

    void check_names()
    {
        std::set<std::string> seen;
        for (const auto& n : doc_.nodes) {
            if (!seen.insert(n.name).second)
                error("W012", n.name, "duplicate node name");
        }
    }

    void check_topology()
    {
        std::vector<const NodeSpec*> supervisors;
        for (const auto& n : doc_.nodes) {
            if (n.kind == NodeKind::Supervisor)
                supervisors.push_back(&n);
        }
        if (supervisors.empty())
            error("W001", "", "no supervisor");
        if (supervisors.size() > 1) {
            for (std::size_t i = 1; i < supervisors.size(); ++i)
                error("W002", supervisors[i]->name, "more than one supervisor");
        }
        if (!supervisors.empty() && doc_.entry != supervisors.front()->name)
            error("W007", doc_.entry, "entry does not name the supervisor");
        if (doc_.max_hops < 1)
            error("W008", "", "max_hops must be at least 1");

        for (const auto& [from, to] : doc_.edges) {
            if (!doc_.find(from))
                error("W005", from, "edge endpoint is not a declared node");
            if (!doc_.find(to))
                error("W005", to, "edge endpoint is not a declared node");
        }

        const auto team = team_members(doc_);
        if (team.empty())
            warning("W010", doc_.entry, "workflow has no workers");
        if (supervisors.size() == 1) {
            const auto& sup = supervisors.front()->name;
            for (const auto& w : team) {
                const bool linked = std::any_of(doc_.edges.begin(), doc_.edges.end(), [&](const auto& e) {
                    return (e.first == sup && e.second == w) || (e.first == w && e.second == sup);
                });
                if (!linked)
                    error("W006", w, "worker is not connected to the supervisor");
            }
        }
    }

    void check_shape(const NodeSpec& n)
    {
        if (n.is_agent() && !n.profile)
            error("W013", n.name, "agent node requires a profile");
        if (!n.is_agent() && n.profile)
            error("W013", n.name, "only agent nodes carry a profile");
        if ((n.kind == NodeKind::Tool || n.kind == NodeKind::Backend) && !n.config)
            error("W013", n.name, std::string(to_string(n.kind)) + " node requires a config");
    }

    void check_agent(const NodeSpec& n)
    {
        const auto& p = *n.profile;
        if (n.kind == NodeKind::Supervisor && !p.tools.empty())
            error("W011", n.name, "supervisor declares tools");
        for (const auto& t : p.tools) {
            if (!node_of_kind(t, NodeKind::Tool))
                error("W003", n.name, "unresolved tool \"" + t + "\"");
        }
        if (!node_of_kind(p.backend, NodeKind::Backend))
            error("W004", n.name, "unresolved backend \"" + p.backend + "\"");
        if (p.request_kind && !kRequestKinds.contains(*p.request_kind))
            error("W013", n.name, "unknown request_kind \"" + *p.request_kind + "\"");

        auto check_vars = [&](const PromptTemplate& tpl) {
            for (const auto& var : tpl.declared_vars()) {
                const bool bound = kBuiltinVars.contains(var) || (n.config && n.config->contains(var));
                if (!bound)
                    error("W009", n.name, "placeholder {" + var + "} is not bound");
            }
        };
        check_vars(p.system_template);
        if (p.query_template)
            check_vars(*p.query_template);
    }

    void check_backend(const NodeSpec& n)
    {
        if (!n.config)
            return;
        const auto adapter = n.config_value("adapter");
        if (adapter == "mock") {
            if (n.config_value("fixture_set").empty())
                error("W014", n.name, "mock binding requires fixture_set");
        } else if (adapter == "chat_completions" || adapter == "prediction") {
            if (n.config_value("base_url").empty())
                error("W014", n.name, "wire binding requires base_url");
            if (n.config_value("credentials_env").empty())
                error("W014", n.name, "wire binding requires credentials_env");
            if (n.config_value("model").empty())
                error("W014", n.name, "wire binding requires model");
        } else {
            error("W014", n.name, "unknown adapter \"" + adapter + "\"");
        }
        const auto alt = n.config_value("alternate");
        if (!alt.empty() && (alt == n.name || !node_of_kind(alt, NodeKind::Backend)))
            error("W014", n.name, "alternate must name a different backend node");
        for (const char* key : {"max_attempts", "base_delay_ms", "factor", "timeout_ms", "delay_ms"}) {
            auto v = n.config_value(key);
            if (!v.empty() && !is_number(v))
                error("W014", n.name, std::string(key) + " must be numeric");
        }
    }

    void check_tool(const NodeSpec& n)
    {
        if (!n.config)
            return;
        const auto kind = n.config_value("kind");
        if (kind == "rag_search") {
            if (!node_of_kind(n.config_value("store"), NodeKind::VectorStore))
                error("W015", n.name, "store must name a vector_store node");
            if (!node_of_kind(n.config_value("generation_backend"), NodeKind::Backend))
                error("W015", n.name, "generation_backend must name a backend node");
            const auto fb = n.config_value("fallback_tool");
            if (!fb.empty()) {
                const auto* t = node_of_kind(fb, NodeKind::Tool);
                if (!t || t->config_value("kind") != "web_search")
                    error("W015", n.name, "fallback_tool must name a web_search tool");
            }
            for (const char* key : {"threshold", "top_k"}) {
                auto v = n.config_value(key);
                if (!v.empty() && !is_number(v))
                    error("W015", n.name, std::string(key) + " must be numeric");
            }
        } else if (kind == "web_search") {
            const auto adapter = n.config_value("adapter", "mock");
            if (adapter == "mock") {
                if (n.config_value("fixture_set").empty())
                    error("W015", n.name, "mock web search requires fixture_set");
            } else if (adapter == "google_cse") {
                if (n.config_value("base_url").empty() || n.config_value("credentials_env").empty())
                    error("W015", n.name, "google_cse requires base_url and credentials_env");
            } else {
                error("W015", n.name, "unknown web search adapter \"" + adapter + "\"");
            }
        } else if (kind == "subflow") {
            const auto target = n.config_value("workflow");
            if (target.empty())
                error("W015", n.name, "subflow requires workflow");
            else if (target == doc_.id)
                error("W015", n.name, "subflow cannot reference its own workflow");
            else if (resolver_ && !resolver_(target))
                error("W016", n.name, "unresolved subflow \"" + target + "\"");
        } else {
            error("W015", n.name, "unknown tool kind \"" + kind + "\"");
        }
    }

    void check_store(const NodeSpec& n)
    {
        for (const char* key : {"chunk_size", "overlap"}) {
            auto v = n.config_value(key);
            if (!v.empty() && !is_number(v))
                error("W015", n.name, std::string(key) + " must be numeric");
        }
    }

    const WorkflowDoc& doc_;
    const WorkflowResolver& resolver_;
    std::vector<Diagnostic> out_;
};

} // namespace

std::vector<Diagnostic> validate_workflow(const WorkflowDoc& doc, const WorkflowResolver& resolver)
{
    return Checker(doc, resolver).run();
}

} // namespace maestro
