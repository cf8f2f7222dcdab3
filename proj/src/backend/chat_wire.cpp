// SPDX-License-Identifier: Apache-2.0
#include "maestro/backend/wire.hpp"

#include "maestro/core/digest.hpp"
#include "maestro/error.hpp"

namespace maestro {
namespace {

std::string inline_b64(const BlobStore& blobs, const BlobRef& ref)
{
    auto bytes = blobs.get(ref.digest);
    if (!bytes)
        throw Error(Errc::InvalidRequest, "blob " + ref.digest + " is not in the store");
    return base64_encode(*bytes);
}

nlohmann::json content_part(const ModalPayload& p, const BlobStore& blobs)
{
    switch (p.kind()) {
    case Modality::Text:
        return {{"type", "text"}, {"text", p.text()}};
    case Modality::Image:
        return {{"type", "image_url"},
                {"image_url", {{"url", "data:" + p.media_type() + ";base64," + inline_b64(blobs, p.blob_ref())}}}};
    case Modality::Audio: {
        auto format = p.media_type().substr(p.media_type().find('/') + 1);
        if (format == "x-wav" || format == "wave")
            format = "wav";
        if (format == "mpeg")
            format = "mp3";
        return {{"type", "input_audio"},
                {"input_audio", {{"data", inline_b64(blobs, p.blob_ref())}, {"format", format}}}};
    }
    case Modality::Video:
        return {{"type", "text"}, {"text", "[video " + p.blob_ref().digest + " " + p.media_type() + "]"}};
    }
    return {};
}

} // namespace

nlohmann::json chat_request_body(const BackendRequest& req, const BlobStore& blobs)
{
    nlohmann::json body;
    body["model"] = req.model_slug;
    body["messages"] = nlohmann::json::array();
    if (req.system_prompt)
        body["messages"].push_back(
            {{"role", "system"}, {"content", nlohmann::json::array({{{"type", "text"}, {"text", *req.system_prompt}}})}});
    for (const auto& m : req.messages) {
        nlohmann::json content = nlohmann::json::array();
        for (const auto& p : m.payloads)
            content.push_back(content_part(p, blobs));
        body["messages"].push_back({{"role", m.role == "tool" ? "user" : m.role}, {"content", std::move(content)}});
    }
    for (const auto& [k, v] : req.params)
        body[k] = v;
    return body;
}

void raise_for_status(const std::string& binding, const HttpResponse& resp)
{
    if (resp.status >= 200 && resp.status < 300)
        return;
    if (resp.status == 401 || resp.status == 403)
        throw Error(Errc::AuthError, binding + ": provider rejected the credential", resp.status);
    throw Error(Errc::ProviderError,
                binding + ": status " + std::to_string(resp.status) + " body " + sha256_hex(resp.body), resp.status);
}

ChatCompletionsBackend::ChatCompletionsBackend(BackendBinding binding, std::shared_ptr<HttpTransport> http,
                                               std::shared_ptr<BlobStore> blobs, Clock& clock)
    : Backend(std::move(binding)), http_(std::move(http)), blobs_(std::move(blobs)), clock_(clock)
{
}

bool ChatCompletionsBackend::supports(RequestKind k) const
{
    return !produces_blob(k);
}

BackendResponse ChatCompletionsBackend::invoke(const BackendRequest& req, const InvokeContext&)
{
    check_request(req);
    if (!supports(req.kind))
        throw Error(Errc::InvalidRequest, binding_.name + " cannot serve " + std::string(to_string(req.kind)));
    if (!http_)
        throw Error(Errc::TransportError, binding_.name + ": no HTTP transport configured");

    auto send = req;
    if (send.model_slug.empty())
        send.model_slug = binding_.model_slug;
    HttpRequest http;
    http.method = "POST";
    http.url = binding_.base_url + "/chat/completions";
    http.body = chat_request_body(send, *blobs_).dump();
    http.content_type = "application/json";
    http.headers.emplace_back("Authorization", "Bearer " + read_credential(binding_));

    const auto started = clock_.now();
    auto resp = http_->send(http, binding_.timeout_for(req.kind));
    raise_for_status(binding_.name, resp);

    nlohmann::json j = nlohmann::json::parse(resp.body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
        throw Error(Errc::BackendFailure, binding_.name + ": malformed completion");
    const auto& content = j["choices"][0]["message"]["content"];
    std::string text;
    if (content.is_string()) {
        text = content.get<std::string>();
    } else if (content.is_array()) {
        for (const auto& part : content)
            if (part.value("type", "") == "text")
                text += part.value("text", "");
    } else {
        throw Error(Errc::BackendFailure, binding_.name + ": completion without content");
    }
    BackendResponse out;
    out.kind = req.kind;
    out.text = std::move(text);
    out.latency = clock_.now() - started;
    out.raw_digest = sha256_hex(resp.body);
    out.served_by = binding_.name;
    return out;
}

} // namespace maestro
