// SPDX-License-Identifier: Apache-2.0
#include "maestro/backend/wire.hpp"

#include "maestro/core/digest.hpp"
#include "maestro/error.hpp"

namespace maestro {

nlohmann::json prediction_request_body(const BackendRequest& req, const BlobStore& blobs)
{
    nlohmann::json body;
    const auto colon = req.model_slug.find(':');
    if (colon == std::string::npos)
        body["model"] = req.model_slug;
    else
        body["version"] = req.model_slug.substr(colon + 1);

    nlohmann::json input;
    input["prompt"] = req.prompt_text();
    for (const auto& m : req.messages) {
        for (const auto& p : m.payloads) {
            if (p.kind() != Modality::Image)
                continue;
            auto bytes = blobs.get(p.blob_ref().digest);
            if (!bytes)
                throw Error(Errc::InvalidRequest, "blob " + p.blob_ref().digest + " is not in the store");
            input["image"] = "data:" + p.media_type() + ";base64," + base64_encode(*bytes);
        }
    }
    for (const auto& [k, v] : req.params)
        input[k] = v;
    body["input"] = std::move(input);
    return body;
}

std::vector<Millis> poll_schedule(Millis timeout)
{
    std::vector<Millis> waits;
    Millis total {0};
    const Millis steps[] = {Millis(1000), Millis(2000), Millis(4000)};
    std::size_t i = 0;
    while (total < timeout) {
        Millis w = i < 3 ? steps[i] : Millis(5000);
        if (total + w > timeout)
            w = timeout - total;
        waits.push_back(w);
        total += w;
        ++i;
    }
    return waits;
}

PredictionBackend::PredictionBackend(BackendBinding binding, std::shared_ptr<HttpTransport> http,
                                     std::shared_ptr<BlobStore> blobs, Clock& clock)
    : Backend(std::move(binding)), http_(std::move(http)), blobs_(std::move(blobs)), clock_(clock)
{
}

bool PredictionBackend::supports(RequestKind k) const
{
    return produces_blob(k);
}

BackendResponse PredictionBackend::invoke(const BackendRequest& req, const InvokeContext& ctx)
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
    http.url = binding_.base_url + "/predictions";
    http.body = prediction_request_body(send, *blobs_).dump();
    http.content_type = "application/json";
    http.headers.emplace_back("Authorization", "Bearer " + read_credential(binding_));

    const auto digest = request_digest(send);
    const auto started = clock_.now();
    const auto timeout = binding_.timeout_for(req.kind);
    HttpResponse resp;
    try {
        resp = http_->send(http, timeout);
        raise_for_status(binding_.name, resp);
    } catch (const Error& e) {
        ctx.emit({binding_.name, "create", ctx.attempt, resp.status, clock_.now() - started, digest, false,
                  std::string(to_string(e.code()))});
        throw;
    }
    ctx.emit({binding_.name, "create", ctx.attempt, resp.status, clock_.now() - started, digest, true, {}});

    auto created = nlohmann::json::parse(resp.body, nullptr, false);
    if (created.is_discarded() || !created.contains("id") || !created["id"].is_string())
        throw Error(Errc::BackendFailure, binding_.name + ": prediction without id");
    if (auto done = interpret(req.kind, created, ctx)) {
        done->latency = clock_.now() - started;
        return *done;
    }

    const auto id = created["id"].get<std::string>();
    for (auto wait : poll_schedule(timeout)) {
        clock_.sleep_for(wait);
        if (auto done = prediction_poll(req.kind, id, ctx)) {
            done->latency = clock_.now() - started;
            return *done;
        }
    }
    throw Error(Errc::Timeout, binding_.name + ": prediction " + id + " still pending after " +
                                   std::to_string(timeout.count() / 1000) + " s");
}

std::optional<BackendResponse> PredictionBackend::prediction_poll(RequestKind kind, const std::string& prediction_id,
                                                                  const InvokeContext& ctx)
{
    HttpRequest http;
    http.url = binding_.base_url + "/predictions/" + prediction_id;
    http.headers.emplace_back("Authorization", "Bearer " + read_credential(binding_));
    const auto started = clock_.now();
    HttpResponse resp;
    try {
        resp = http_->send(http, kDefaultTimeout);
        raise_for_status(binding_.name, resp);
    } catch (const Error& e) {
        ctx.emit({binding_.name, "poll", ctx.attempt, resp.status, clock_.now() - started, prediction_id, false,
                  std::string(to_string(e.code()))});
        throw;
    }
    ctx.emit({binding_.name, "poll", ctx.attempt, resp.status, clock_.now() - started, sha256_hex(resp.body), true, {}});
    auto status = nlohmann::json::parse(resp.body, nullptr, false);
    if (status.is_discarded())
        throw Error(Errc::BackendFailure, binding_.name + ": malformed prediction status");
    return interpret(kind, status, ctx);
}

std::optional<BackendResponse> PredictionBackend::interpret(RequestKind kind, const nlohmann::json& status,
                                                            const InvokeContext& ctx)
{
    const auto state = status.value("status", "");
    if (state == "failed" || state == "canceled")
        throw Error(Errc::ProviderError, binding_.name + ": prediction " + state, 200);
    if (state != "succeeded")
        return std::nullopt;
    const auto& output = status.contains("output") ? status["output"] : nlohmann::json();
    std::string url;
    if (output.is_string())
        url = output.get<std::string>();
    else if (output.is_array() && !output.empty() && output[0].is_string())
        url = output[0].get<std::string>();
    if (url.empty())
        throw Error(Errc::BackendFailure, binding_.name + ": succeeded prediction without output");
    return download(kind, url, ctx);
}

BackendResponse PredictionBackend::download(RequestKind kind, const std::string& url, const InvokeContext& ctx)
{
    HttpRequest http;
    http.url = url;
    const auto started = clock_.now();
    auto resp = http_->send(http, binding_.timeout_for(kind));
    const bool ok = resp.status >= 200 && resp.status < 300;
    ctx.emit({binding_.name, "download", ctx.attempt, resp.status, clock_.now() - started, sha256_hex(resp.body), ok,
              ok ? std::string() : std::string("ProviderError")});
    raise_for_status(binding_.name, resp);

    std::string media_type = kind == RequestKind::VideoGeneration ? "video/mp4" : "image/png";
    if (auto it = resp.headers.find("content-type"); it != resp.headers.end()) {
        auto mt = it->second.substr(0, it->second.find(';'));
        if (mt.rfind("image/", 0) == 0 || mt.rfind("video/", 0) == 0)
            media_type = mt;
    }
    BackendResponse out;
    out.kind = kind;
    out.blob = blobs_->put(to_bytes(resp.body), media_type);
    out.raw_digest = out.blob->digest;
    out.served_by = binding_.name;
    return out;
}

} // namespace maestro
