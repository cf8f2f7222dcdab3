// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/backend/backend.hpp"
#include "maestro/backend/http_transport.hpp"
#include "maestro/core/blob_store.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace maestro {

/// {model, messages:[{role, content:[{type:"text"|"image_url"|"input_audio", ...}]}]}
/// Images and audio are inlined as base64 from the blob store.
nlohmann::json chat_request_body(const BackendRequest& req, const BlobStore& blobs);

/// {model|version, input:{prompt, image?}}; the image is a data URI.
nlohmann::json prediction_request_body(const BackendRequest& req, const BlobStore& blobs);

/// Waits between polls: 1 s, 2 s, 4 s, then 5 s, clipped so the last poll lands on the timeout.
std::vector<Millis> poll_schedule(Millis timeout);

class ChatCompletionsBackend final : public Backend {
public:
    ChatCompletionsBackend(BackendBinding binding, std::shared_ptr<HttpTransport> http,
                           std::shared_ptr<BlobStore> blobs, Clock& clock);

    bool supports(RequestKind k) const override;
    BackendResponse invoke(const BackendRequest& req, const InvokeContext& ctx = {}) override;

private:
    std::shared_ptr<HttpTransport> http_;
    std::shared_ptr<BlobStore> blobs_;
    Clock& clock_;
};

class PredictionBackend final : public Backend {
public:
    PredictionBackend(BackendBinding binding, std::shared_ptr<HttpTransport> http, std::shared_ptr<BlobStore> blobs,
                      Clock& clock);

    bool supports(RequestKind k) const override;
    BackendResponse invoke(const BackendRequest& req, const InvokeContext& ctx = {}) override;

    /// One status check. nullopt while the prediction is still pending.
    std::optional<BackendResponse> prediction_poll(RequestKind kind, const std::string& prediction_id,
                                                   const InvokeContext& ctx = {});

private:
    std::optional<BackendResponse> interpret(RequestKind kind, const nlohmann::json& status, const InvokeContext& ctx);
    BackendResponse download(RequestKind kind, const std::string& url, const InvokeContext& ctx);

    std::shared_ptr<HttpTransport> http_;
    std::shared_ptr<BlobStore> blobs_;
    Clock& clock_;
};

/// Maps a provider status to AuthError / ProviderError. The body is only referenced by digest.
void raise_for_status(const std::string& binding, const HttpResponse& resp);

} // namespace maestro
