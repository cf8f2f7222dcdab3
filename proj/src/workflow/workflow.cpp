// SPDX-License-Identifier: Apache-2.0
#include "maestro/workflow/workflow.hpp"

#include "maestro/error.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace maestro {

using json = nlohmann::json;

std::string_view to_string(NodeKind k)
{
    switch (k) {
    case NodeKind::Supervisor: return "supervisor";
    case NodeKind::Worker: return "worker";
    case NodeKind::Tool: return "tool";
    case NodeKind::VectorStore: return "vector_store";
    case NodeKind::Backend: return "backend";
    }
    return "worker";
}

std::optional<NodeKind> node_kind_from_string(std::string_view s)
{
    if (s == "supervisor") return NodeKind::Supervisor;
    if (s == "worker") return NodeKind::Worker;
    if (s == "tool") return NodeKind::Tool;
    if (s == "vector_store") return NodeKind::VectorStore;
    if (s == "backend") return NodeKind::Backend;
    return std::nullopt;
}

std::string NodeSpec::config_value(std::string_view key, std::string_view fallback) const
{
    if (config) {
        if (auto it = config->find(key); it != config->end())
            return it->second;
    }
    return std::string(fallback);
}

const NodeSpec* WorkflowDoc::find(std::string_view name) const
{
    for (const auto& n : nodes) {
        if (n.name == name)
            return &n;
    }
    return nullptr;
}

const NodeSpec* WorkflowDoc::supervisor() const
{
    for (const auto& n : nodes) {
        if (n.kind == NodeKind::Supervisor)
            return &n;
    }
    return nullptr;
}

namespace {

[[noreturn]] void missing(const std::string& path)
{
    throw Error(Errc::MissingField, path);
}

std::string require_string(const json& obj, const char* key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        missing(path + key);
    if (!it->is_string())
        throw Error(Errc::SyntaxError, path + key + " must be a string");
    return it->get<std::string>();
}

std::string optional_string(const json& obj, const char* key, std::string fallback)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return fallback;
    if (!it->is_string())
        throw Error(Errc::SyntaxError, std::string(key) + " must be a string");
    return it->get<std::string>();
}

Config parse_config(const json& j, const std::string& path)
{
    if (!j.is_object())
        throw Error(Errc::SyntaxError, path + " must be an object");
    Config out;
    for (const auto& [key, value] : j.items()) {
        if (value.is_string())
            out.emplace(key, value.get<std::string>());
        else if (value.is_number() || value.is_boolean())
            out.emplace(key, value.dump());
        else
            throw Error(Errc::SyntaxError, path + "." + key + " must be a scalar");
    }
    return out;
}

AgentProfile parse_profile(const json& j, const std::string& name, NodeKind kind, const std::string& path)
{
    if (!j.is_object())
        throw Error(Errc::SyntaxError, path + " must be an object");
    AgentProfile p;
    p.name = name;
    p.kind = kind == NodeKind::Supervisor ? AgentKind::Supervisor : AgentKind::Worker;
    p.system_template = PromptTemplate(require_string(j, "system_template", path + "."));
    p.backend = require_string(j, "backend", path + ".");
    if (auto it = j.find("tools"); it != j.end()) {
        if (!it->is_array())
            throw Error(Errc::SyntaxError, path + ".tools must be an array");
        for (const auto& t : *it) {
            if (!t.is_string())
                throw Error(Errc::SyntaxError, path + ".tools entries must be strings");
            p.tools.push_back(t.get<std::string>());
        }
    }
    if (auto it = j.find("query_template"); it != j.end() && it->is_string())
        p.query_template = PromptTemplate(it->get<std::string>());
    if (auto it = j.find("request_kind"); it != j.end() && it->is_string())
        p.request_kind = it->get<std::string>();
    return p;
}

std::pair<int, int> line_col(std::string_view text, std::size_t byte)
{
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

WorkflowDoc parse_workflow(std::string_view document_text)
{
    json root;
    try {
        root = json::parse(document_text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(document_text, e.byte);
        throw Error(Errc::SyntaxError, "line " + std::to_string(line) + ", col " + std::to_string(col));
    }
    if (!root.is_object())
        throw Error(Errc::SyntaxError, "line 1, col 1: top level must be an object");

    WorkflowDoc doc;
    auto nodes_it = root.find("nodes");
    if (nodes_it == root.end())
        missing("nodes");
    if (!nodes_it->is_array())
        throw Error(Errc::SyntaxError, "nodes must be an array");

    doc.id = require_string(root, "id", "");
    doc.entry = require_string(root, "entry", "");
    doc.name = optional_string(root, "name", doc.id);
    doc.shared_memory = optional_string(root, "shared_memory", doc.id);
    if (auto it = root.find("max_hops"); it != root.end()) {
        if (!it->is_number_integer())
            throw Error(Errc::SyntaxError, "max_hops must be an integer");
        doc.max_hops = it->get<int>();
    }
    if (auto it = root.find("expose_trace"); it != root.end()) {
        if (!it->is_boolean())
            throw Error(Errc::SyntaxError, "expose_trace must be a boolean");
        doc.expose_trace = it->get<bool>();
    }
    if (auto it = root.find("vars"); it != root.end())
        doc.vars = parse_config(*it, "vars");

    std::set<std::string> seen;
    for (std::size_t i = 0; i < nodes_it->size(); ++i) {
        const auto& jn = (*nodes_it)[i];
        const auto path = "nodes[" + std::to_string(i) + "].";
        if (!jn.is_object())
            throw Error(Errc::SyntaxError, path + " must be an object");
        NodeSpec node;
        node.name = require_string(jn, "name", path);
        auto kind = node_kind_from_string(require_string(jn, "kind", path));
        if (!kind)
            throw Error(Errc::SyntaxError, path + "kind is not a known node kind");
        node.kind = *kind;
        if (!seen.insert(node.name).second)
            throw Error(Errc::DuplicateNodeName, node.name);
        if (auto it = jn.find("profile"); it != jn.end() && !it->is_null())
            node.profile = parse_profile(*it, node.name, node.kind, path + "profile");
        if (auto it = jn.find("config"); it != jn.end() && !it->is_null())
            node.config = parse_config(*it, path + "config");
        doc.nodes.push_back(std::move(node));
    }

    if (auto it = root.find("edges"); it != root.end()) {
        if (!it->is_array())
            throw Error(Errc::SyntaxError, "edges must be an array");
        for (const auto& e : *it) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
                throw Error(Errc::SyntaxError, "edges entries must be [from, to] string pairs");
            doc.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
        }
    }
    return doc;
}

WorkflowDoc load_workflow_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::NotFound, path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_workflow(ss.str());
}

std::string serialize_workflow(const WorkflowDoc& doc)
{
    using ojson = nlohmann::ordered_json;
    ojson root;
    root["id"] = doc.id;
    root["name"] = doc.name;
    root["entry"] = doc.entry;
    root["max_hops"] = doc.max_hops;
    root["shared_memory"] = doc.shared_memory;
    root["expose_trace"] = doc.expose_trace;
    if (!doc.vars.empty())
        root["vars"] = doc.vars;
    root["nodes"] = ojson::array();
    for (const auto& n : doc.nodes) {
        ojson jn;
        jn["name"] = n.name;
        jn["kind"] = to_string(n.kind);
        if (n.profile) {
            ojson p;
            p["system_template"] = n.profile->system_template.text();
            p["tools"] = n.profile->tools;
            p["backend"] = n.profile->backend;
            if (n.profile->query_template)
                p["query_template"] = n.profile->query_template->text();
            if (n.profile->request_kind)
                p["request_kind"] = *n.profile->request_kind;
            jn["profile"] = std::move(p);
        }
        if (n.config)
            jn["config"] = *n.config;
        root["nodes"].push_back(std::move(jn));
    }
    root["edges"] = ojson::array();
    for (const auto& [from, to] : doc.edges)
        root["edges"].push_back(ojson::array({from, to}));
    return root.dump(2) + "\n";
}

std::vector<std::string> team_members(const WorkflowDoc& doc)
{
    std::vector<std::string> team;
    for (const auto& n : doc.nodes) {
        if (n.kind == NodeKind::Worker)
            team.push_back(n.name);
    }
    return team;
}

std::string join_team(const std::vector<std::string>& team)
{
    std::string out;
    for (const auto& name : team) {
        if (!out.empty())
            out += ", ";
        out += name;
    }
    return out;
}

} // namespace maestro
