// SPDX-License-Identifier: Apache-2.0
#include "maestro/backend/backend.hpp"

#include "maestro/core/digest.hpp"
#include "maestro/core/serialize.hpp"
#include "maestro/error.hpp"

#include <charconv>
#include <cstdlib>

namespace maestro {

std::string_view to_string(RequestKind k)
{
    switch (k) {
    case RequestKind::ChatCompletion: return "chat_completion";
    case RequestKind::VisionCompletion: return "vision_completion";
    case RequestKind::Transcription: return "transcription";
    case RequestKind::ImageGeneration: return "image_generation";
    case RequestKind::VideoGeneration: return "video_generation";
    }
    return "chat_completion";
}

std::optional<RequestKind> request_kind_from_string(std::string_view s)
{
    for (auto k : {RequestKind::ChatCompletion, RequestKind::VisionCompletion, RequestKind::Transcription,
                   RequestKind::ImageGeneration, RequestKind::VideoGeneration})
        if (to_string(k) == s)
            return k;
    return std::nullopt;
}

bool produces_blob(RequestKind k)
{
    return k == RequestKind::ImageGeneration || k == RequestKind::VideoGeneration;
}

std::string BackendRequest::prompt_text() const
{
    if (messages.empty())
        return {};
    const auto& m = produces_blob(kind) ? messages.front() : messages.back();
    std::string out;
    for (const auto& p : m.payloads) {
        if (!p.is_text())
            continue;
        if (!out.empty())
            out += '\n';
        out += p.text();
    }
    return out;
}

namespace {

std::size_t count_kind(const BackendRequest& req, Modality m)
{
    std::size_t n = 0;
    for (const auto& msg : req.messages)
        for (const auto& p : msg.payloads)
            n += p.kind() == m ? 1 : 0;
    return n;
}

} // namespace

void check_request(const BackendRequest& req)
{
    switch (req.kind) {
    case RequestKind::ChatCompletion:
        if (req.messages.empty())
            throw Error(Errc::InvalidRequest, "chat completion without messages");
        break;
    case RequestKind::VisionCompletion:
        if (count_kind(req, Modality::Image) == 0)
            throw Error(Errc::InvalidRequest, "vision completion needs an image payload");
        break;
    case RequestKind::Transcription:
        if (count_kind(req, Modality::Audio) != 1)
            throw Error(Errc::InvalidRequest, "transcription needs exactly one audio payload");
        break;
    case RequestKind::ImageGeneration:
    case RequestKind::VideoGeneration:
        if (req.prompt_text().empty())
            throw Error(Errc::InvalidRequest, "generation needs a text prompt");
        if (count_kind(req, Modality::Image) > 1)
            throw Error(Errc::InvalidRequest, "generation takes at most one image");
        break;
    }
}

nlohmann::json canonical_request_json(const BackendRequest& req)
{
    nlohmann::json j;
    j["kind"] = to_string(req.kind);
    j["model"] = req.model_slug;
    j["params"] = req.params;
    j["system"] = req.system_prompt ? nlohmann::json(*req.system_prompt) : nlohmann::json();
    j["messages"] = nlohmann::json::array();
    for (const auto& m : req.messages) {
        nlohmann::json jm {{"role", m.role}, {"name", m.name}, {"payloads", nlohmann::json::array()}};
        for (const auto& p : m.payloads)
            jm["payloads"].push_back(to_json(p));
        j["messages"].push_back(std::move(jm));
    }
    return j;
}

std::string request_digest(const BackendRequest& req)
{
    return sha256_hex(canonical_request_json(req).dump());
}

std::string_view to_string(AdapterKind a)
{
    switch (a) {
    case AdapterKind::Mock: return "mock";
    case AdapterKind::ChatCompletionsWire: return "chat_completions";
    case AdapterKind::PredictionWire: return "prediction";
    }
    return "mock";
}

std::optional<AdapterKind> adapter_from_string(std::string_view s)
{
    for (auto a : {AdapterKind::Mock, AdapterKind::ChatCompletionsWire, AdapterKind::PredictionWire})
        if (to_string(a) == s)
            return a;
    return std::nullopt;
}

Millis BackendBinding::timeout_for(RequestKind k) const
{
    if (timeout)
        return *timeout;
    return k == RequestKind::VideoGeneration ? kVideoTimeout : kDefaultTimeout;
}

namespace {

template <typename T>
T parse_number(const NodeSpec& node, std::string_view key, T fallback)
{
    const auto raw = node.config_value(key);
    if (raw.empty())
        return fallback;
    T value {};
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc() || ptr != raw.data() + raw.size())
        throw Error(Errc::InvalidParams, node.name + ": " + std::string(key) + " is not a number");
    return value;
}

double parse_double(const NodeSpec& node, std::string_view key, double fallback)
{
    const auto raw = node.config_value(key);
    if (raw.empty())
        return fallback;
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end != raw.c_str() + raw.size())
        throw Error(Errc::InvalidParams, node.name + ": " + std::string(key) + " is not a number");
    return v;
}

} // namespace

BackendBinding binding_from_node(const NodeSpec& node)
{
    if (node.kind != NodeKind::Backend)
        throw Error(Errc::InvalidParams, node.name + " is not a backend node");
    BackendBinding b;
    b.name = node.name;
    const auto adapter = node.config_value("adapter", "mock");
    auto a = adapter_from_string(adapter);
    if (!a)
        throw Error(Errc::InvalidParams, node.name + ": unknown adapter " + adapter);
    b.adapter = *a;
    b.base_url = node.config_value("base_url");
    b.model_slug = node.config_value("model");
    b.credentials_env = node.config_value("credentials_env");
    b.fixture_set = node.config_value("fixture_set");

    const auto kinds = node.config_value("kinds");
    std::size_t start = 0;
    while (start < kinds.size()) {
        auto end = kinds.find(',', start);
        if (end == std::string::npos)
            end = kinds.size();
        auto item = kinds.substr(start, end - start);
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) {
            auto k = request_kind_from_string(item);
            if (!k)
                throw Error(Errc::InvalidParams, node.name + ": unknown request kind " + item);
            b.kinds.insert(*k);
        }
        start = end + 1;
    }

    if (auto alt = node.config_value("alternate"); !alt.empty())
        b.alternate = alt;
    if (auto deg = node.config_value("degradation"); !deg.empty())
        b.degradation = deg;
    b.retry.max_attempts = parse_number<int>(node, "max_attempts", 3);
    b.retry.base_delay = Millis(parse_number<long long>(node, "base_delay_ms", 100));
    b.retry.factor = parse_double(node, "factor", 2.0);
    b.retry.jitter = node.config_value("jitter") == "true";
    if (auto t = parse_number<long long>(node, "timeout_ms", 0); t > 0)
        b.timeout = Millis(t);
    b.mock_delay = Millis(parse_number<long long>(node, "delay_ms", 0));
    check_binding(b);
    return b;
}

void check_binding(const BackendBinding& b)
{
    if (b.adapter == AdapterKind::Mock) {
        if (b.fixture_set.empty())
            throw Error(Errc::InvalidParams, b.name + ": mock binding needs fixture_set");
    } else {
        if (b.base_url.empty() || b.credentials_env.empty())
            throw Error(Errc::InvalidParams, b.name + ": wire binding needs base_url and credentials_env");
    }
    if (b.alternate && *b.alternate == b.name)
        throw Error(Errc::InvalidParams, b.name + ": alternate equals primary");
    if (b.retry.max_attempts < 1 || b.retry.factor < 1.0 || b.retry.base_delay.count() < 0)
        throw Error(Errc::InvalidParams, b.name + ": bad retry policy");
}

void check_response(const BackendRequest& req, const BackendResponse& resp)
{
    if (resp.kind != req.kind)
        throw Error(Errc::BackendFailure, "response kind " + std::string(to_string(resp.kind)) +
                                              " does not match request kind " + std::string(to_string(req.kind)));
    if (produces_blob(req.kind) ? !resp.blob : !resp.text)
        throw Error(Errc::BackendFailure, "response output does not match request kind");
}

std::string read_credential(const BackendBinding& b)
{
    const char* v = b.credentials_env.empty() ? nullptr : std::getenv(b.credentials_env.c_str());
    if (!v || !*v)
        throw Error(Errc::AuthError, b.name + ": credential variable " + b.credentials_env + " is not set");
    return v;
}

} // namespace maestro
