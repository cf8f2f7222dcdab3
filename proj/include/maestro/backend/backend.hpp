// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/clock.hpp"
#include "maestro/core/payload.hpp"
#include "maestro/resilience/retry.hpp"
#include "maestro/workflow/workflow.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace maestro {

enum class RequestKind { ChatCompletion, VisionCompletion, Transcription, ImageGeneration, VideoGeneration };

std::string_view to_string(RequestKind k);
std::optional<RequestKind> request_kind_from_string(std::string_view s);
bool produces_blob(RequestKind k);

struct BackendMessage {
    std::string role; // "user", "assistant", "tool"
    std::string name; // agent name, informational
    std::vector<ModalPayload> payloads;
};

struct BackendRequest {
    RequestKind kind = RequestKind::ChatCompletion;
    std::optional<std::string> system_prompt;
    std::vector<BackendMessage> messages;
    std::string model_slug;
    Config params; // passed through opaquely

    /// Text payloads of the newest message, or of the first message for generation prompts.
    std::string prompt_text() const;
};

/// Throws InvalidRequest when the kind's payload rules do not hold.
void check_request(const BackendRequest& req);

nlohmann::json canonical_request_json(const BackendRequest& req);
std::string request_digest(const BackendRequest& req);

struct BackendResponse {
    RequestKind kind = RequestKind::ChatCompletion;
    std::optional<std::string> text;
    std::optional<BlobRef> blob;
    Millis latency {0};
    std::string raw_digest; // digest of the provider payload or fixture entry
    bool degraded = false;
    std::string served_by;  // binding that produced it
};

enum class AdapterKind { Mock, ChatCompletionsWire, PredictionWire };

std::string_view to_string(AdapterKind a);
std::optional<AdapterKind> adapter_from_string(std::string_view s);

inline constexpr Millis kDefaultTimeout {60'000};
inline constexpr Millis kVideoTimeout {300'000};

struct BackendBinding {
    std::string name;
    AdapterKind adapter = AdapterKind::Mock;
    std::string base_url;
    std::string model_slug;
    std::string credentials_env;
    std::string fixture_set;
    std::set<RequestKind> kinds; // advertised roles, e.g. Transcription
    std::optional<std::string> alternate;
    std::optional<std::string> degradation; // template; {error} and {binding} are bound
    RetryPolicy retry;
    std::optional<Millis> timeout;
    Millis mock_delay {0};

    Millis timeout_for(RequestKind k) const;
};

/// Reads a Backend node's config. Throws InvalidParams on malformed values or
/// when the adapter's required keys are missing.
BackendBinding binding_from_node(const NodeSpec& node);
void check_binding(const BackendBinding& b);

/// One provider round-trip, poll, download or fixture lookup.
struct BackendEvent {
    std::string binding;
    std::string phase; // "call", "create", "poll", "download"
    int attempt = 1;
    int status = 0;
    Millis duration {0};
    std::string digest;
    bool ok = true;
    std::string error;
};

struct InvokeContext {
    std::function<void(const BackendEvent&)> on_event;
    int attempt = 1;

    void emit(const BackendEvent& e) const
    {
        if (on_event)
            on_event(e);
    }
};

class Backend {
public:
    explicit Backend(BackendBinding binding) : binding_(std::move(binding)) {}
    virtual ~Backend() = default;

    const BackendBinding& binding() const { return binding_; }
    virtual bool supports(RequestKind k) const = 0;
    virtual BackendResponse invoke(const BackendRequest& req, const InvokeContext& ctx = {}) = 0;

protected:
    BackendBinding binding_;
};

/// Throws BackendFailure if the response shape does not match the request kind.
void check_response(const BackendRequest& req, const BackendResponse& resp);

/// Reads the credential named by the binding. Throws AuthError without echoing any value.
std::string read_credential(const BackendBinding& b);

} // namespace maestro
