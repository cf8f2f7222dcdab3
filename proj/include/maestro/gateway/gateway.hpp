// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/engine/supervisor.hpp"
#include "maestro/gateway/event_log.hpp"
#include "maestro/scheduler/worker_pool.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace maestro {

inline constexpr std::size_t kMaxUploadBytes = 25u * 1024u * 1024u;

struct GatewayOptions {
    std::string token;            // bearer token; empty disables auth
    std::size_t turn_threads = 4; // WorkerPool size
    std::size_t http_threads = 32;
    std::size_t max_upload = kMaxUploadBytes;
    Millis heartbeat {15'000};
};

/// Uploaded part of a message or document.
struct UploadPart {
    std::string filename;
    std::string media_type;
    std::string content;
};

/// HTTP error raised by gateway operations; status is the response code.
struct GatewayError {
    int status = 500;
    std::string code;
    std::string detail;
    nlohmann::json extra;
};

/// Session-facing service. Every HTTP route is a thin wrapper over one of the
/// public operations below, which tests can also call directly.
class Gateway {
public:
    Gateway(std::shared_ptr<Runtime> runtime, GatewayOptions options = {});
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Binds and serves on a background thread; port 0 picks a free port. Returns the bound port.
    int start(const std::string& host, int port);
    /// Binds and serves on the calling thread.
    bool listen(const std::string& host, int port);
    void stop();

    // Operations. Each throws GatewayError on a client-visible failure.
    nlohmann::json create_session(const nlohmann::json& body);
    nlohmann::json post_message(const std::string& session_id, const std::string& text,
                                const std::vector<UploadPart>& files);
    nlohmann::json close_session(const std::string& session_id);
    nlohmann::json session_json(const std::string& session_id) const;
    std::vector<EventFrame> events(const std::string& session_id, std::uint64_t from_seq) const;
    std::shared_ptr<SessionEventLog> event_log(const std::string& session_id) const;
    nlohmann::json ingest_document(const UploadPart& file, const std::string& index);
    nlohmann::json turn_trace(const std::string& turn_id) const;
    nlohmann::json workflows_json() const;
    nlohmann::json add_workflow(const std::string& document_text);
    nlohmann::json batch(const nlohmann::json& body);
    std::string metrics_text() const;

    /// Blocks until every submitted turn has finished.
    void wait_idle();

    Runtime& runtime() { return *runtime_; }
    const GatewayOptions& options() const { return options_; }

private:
    struct SessionEntry {
        mutable std::mutex mutex;
        Session session;
        std::shared_ptr<const WorkflowDoc> doc;
        std::shared_ptr<SessionEventLog> log = std::make_shared<SessionEventLog>();
        bool busy = false;
        int turns = 0;
    };

    std::shared_ptr<SessionEntry> find_session(const std::string& id) const;
    void run_turn(std::shared_ptr<SessionEntry> entry, ChatMessage user_msg, std::string turn_id);
    void install_routes();

    std::shared_ptr<Runtime> runtime_;
    GatewayOptions options_;
    Engine engine_;
    std::shared_ptr<TaskQueue> queue_;
    std::unique_ptr<WorkerPool> pool_;
    std::unique_ptr<httplib::Server> server_;
    std::thread server_thread_;
    std::atomic<bool> stopping_ {false};
    std::mutex stop_mutex_;
    bool stopped_ = false;

    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
    std::map<std::string, nlohmann::json> traces_; // turn id -> trace json
    std::uint64_t next_session_ = 1;

    std::atomic<std::uint64_t> turns_started_ {0};
    std::atomic<std::uint64_t> turns_completed_ {0};
    std::atomic<std::uint64_t> turns_failed_ {0};
    std::atomic<std::uint64_t> turns_degraded_ {0};
    std::atomic<std::uint64_t> http_requests_ {0};
    std::atomic<std::uint64_t> documents_ingested_ {0};
};

} // namespace maestro
