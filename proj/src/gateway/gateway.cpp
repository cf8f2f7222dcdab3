// SPDX-License-Identifier: Apache-2.0
#include "maestro/gateway/gateway.hpp"

#include "maestro/core/serialize.hpp"
#include "maestro/error.hpp"
#include "maestro/scenario/scenario.hpp"
#include "maestro/workflow/validate.hpp"

#include <httplib.h>

#include <chrono>
#include <sstream>

namespace maestro {

namespace {

int status_for(Errc code)
{
    switch (code) {
    case Errc::SyntaxError:
    case Errc::MissingField:
    case Errc::DuplicateNodeName:
    case Errc::DecodeError:
    case Errc::InvalidParams:
    case Errc::EmptyText:
    case Errc::InvalidRequest: return 400;
    case Errc::AuthError: return 401;
    case Errc::NotFound:
    case Errc::UnknownTask: return 404;
    case Errc::SessionClosed:
    case Errc::Busy:
    case Errc::Conflict: return 409;
    case Errc::UnsupportedMediaType: return 415;
    case Errc::InvalidWorkflow: return 422;
    default: return 500;
    }
}

GatewayError from_error(const Error& e)
{
    return {status_for(e.code()), std::string(to_string(e.code())), e.detail(), {}};
}

nlohmann::json error_body(const GatewayError& e)
{
    nlohmann::json j {{"error", e.code}, {"detail", e.detail}};
    if (e.extra.is_object())
        j.update(e.extra);
    return j;
}

void send_json(httplib::Response& res, int status, const nlohmann::json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

std::string guess_media_type(const UploadPart& part)
{
    if (!part.media_type.empty() && part.media_type != "application/octet-stream")
        return part.media_type;
    return media_type_for_path(part.filename);
}

std::vector<UploadPart> upload_parts(const httplib::Request& req, std::string* text)
{
    std::vector<UploadPart> parts;
    for (const auto& [name, file] : req.files) {
        if (name == "text" && file.filename.empty()) {
            if (text)
                *text = file.content;
            continue;
        }
        if (file.filename.empty())
            continue;
        parts.push_back({file.filename, file.content_type, file.content});
    }
    return parts;
}

} // namespace

Gateway::Gateway(std::shared_ptr<Runtime> runtime, GatewayOptions options)
    : runtime_(std::move(runtime)), options_(std::move(options)), engine_(runtime_),
      queue_(std::make_shared<TaskQueue>()),
      pool_(std::make_unique<WorkerPool>(queue_, options_.turn_threads == 0 ? 1 : options_.turn_threads)),
      server_(std::make_unique<httplib::Server>())
{
    install_routes();
}

Gateway::~Gateway()
{
    stop();
}

int Gateway::start(const std::string& host, int port)
{
    int bound = port;
    if (port == 0)
        bound = server_->bind_to_any_port(host);
    else if (!server_->bind_to_port(host, port))
        bound = -1;
    if (bound < 0)
        throw Error(Errc::TransportError, "cannot bind " + host + ":" + std::to_string(port));
    server_thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

bool Gateway::listen(const std::string& host, int port)
{
    return server_->listen(host, port);
}

void Gateway::stop()
{
    std::lock_guard stop_lock(stop_mutex_);
    if (stopped_)
        return;
    stopping_ = true;
    {
        std::lock_guard lock(mutex_);
        for (auto& [id, entry] : sessions_)
            entry->log->close();
    }
    server_->stop();
    if (server_thread_.joinable())
        server_thread_.join();
    pool_->wait_idle();
    pool_->stop();
    stopped_ = true;
}

void Gateway::wait_idle()
{
    pool_->wait_idle();
}

std::shared_ptr<Gateway::SessionEntry> Gateway::find_session(const std::string& id) const
{
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        throw GatewayError {404, "NotFound", "session " + id, {}};
    return it->second;
}

nlohmann::json Gateway::create_session(const nlohmann::json& body)
{
    if (!body.is_object() || !body.contains("workflow_id") || !body["workflow_id"].is_string())
        throw GatewayError {400, "MissingField", "workflow_id", {}};
    const auto wf_id = body["workflow_id"].get<std::string>();
    auto doc = runtime_->workflow(wf_id);
    if (!doc)
        throw GatewayError {404, "NotFound", "workflow " + wf_id, {}};
    const auto diags = runtime_->validate(*doc);
    if (has_errors(diags)) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& d : diags)
            list.push_back(nlohmann::json::parse(diagnostic_json(d)));
        throw GatewayError {422, "InvalidWorkflow", wf_id, {{"diagnostics", list}}};
    }
    auto entry = std::make_shared<SessionEntry>();
    entry->doc = doc;
    entry->session.workflow_id = wf_id;
    {
        std::lock_guard lock(mutex_);
        entry->session.id = "s" + std::to_string(next_session_++);
        sessions_[entry->session.id] = entry;
    }
    return {{"session_id", entry->session.id}, {"workflow_id", wf_id}, {"status", "open"}};
}

nlohmann::json Gateway::post_message(const std::string& session_id, const std::string& text,
                                     const std::vector<UploadPart>& files)
{
    auto entry = find_session(session_id);
    std::vector<ModalPayload> payloads;
    for (const auto& f : files) {
        if (f.content.size() > options_.max_upload)
            throw GatewayError {413, "PayloadTooLarge", f.filename, {}};
        const auto media = guess_media_type(f);
        const auto modality = modality_for_media_type(media);
        if (!modality || (*modality != Modality::Image && *modality != Modality::Audio))
            throw GatewayError {415, "UnsupportedMediaType", media, {}};
    }
    for (const auto& f : files) {
        const auto media = guess_media_type(f);
        payloads.push_back(ModalPayload::blob(*modality_for_media_type(media), runtime_->blobs().put(f.content, media)));
    }
    if (!text.empty())
        payloads.push_back(ModalPayload::text(text));
    if (payloads.empty())
        throw GatewayError {400, "MissingField", "text or file", {}};

    std::string turn_id;
    {
        std::lock_guard lock(entry->mutex);
        if (entry->session.status != SessionStatus::Open)
            throw GatewayError {409, "SessionClosed", session_id, {}};
        if (entry->busy)
            throw GatewayError {409, "Busy", "a turn is already running", {}};
        entry->busy = true;
        turn_id = session_id + "-t" + std::to_string(++entry->turns);
    }
    ++turns_started_;
    auto msg = make_message(Author::user(), std::move(payloads));
    pool_->submit([this, entry, msg = std::move(msg), turn_id]() mutable {
        run_turn(entry, std::move(msg), turn_id);
    });
    return {{"session_id", session_id}, {"turn_id", turn_id}};
}

void Gateway::run_turn(std::shared_ptr<SessionEntry> entry, ChatMessage user_msg, std::string turn_id)
{
    Session working;
    {
        std::lock_guard lock(entry->mutex);
        working = entry->session;
    }
    auto log = entry->log;
    TurnOptions opts;
    opts.turn_id = turn_id;
    // With expose_trace off, clients only see the terminal frame.
    if (entry->doc->expose_trace)
        opts.sink = [log](const std::string& tid, const TraceEvent& e) { log->append_trace(tid, e); };
    try {
        auto result = engine_.run_turn(working, std::move(user_msg), *entry->doc, std::move(opts));
        {
            std::lock_guard lock(mutex_);
            traces_[turn_id] = trace_json(result.trace);
        }
        nlohmann::json done;
        done["message"] = to_json(result.final_message);
        done["degraded"] = result.degraded;
        done["source"] = result.source ? nlohmann::json(to_string(*result.source)) : nlohmann::json();
        {
            std::lock_guard lock(entry->mutex);
            entry->session = std::move(working);
            entry->busy = false;
        }
        ++turns_completed_;
        if (result.degraded)
            ++turns_degraded_;
        log->append("done", turn_id, std::move(done));
    } catch (const Error& e) {
        {
            std::lock_guard lock(entry->mutex);
            entry->busy = false;
        }
        ++turns_failed_;
        log->append("error", turn_id, {{"error", to_string(e.code())}, {"detail", e.detail()}});
    } catch (const std::exception& e) {
        {
            std::lock_guard lock(entry->mutex);
            entry->busy = false;
        }
        ++turns_failed_;
        log->append("error", turn_id, {{"error", "InternalError"}, {"detail", e.what()}});
    }
}

nlohmann::json Gateway::close_session(const std::string& session_id)
{
    auto entry = find_session(session_id);
    std::lock_guard lock(entry->mutex);
    entry->session.status = SessionStatus::Closed;
    return {{"session_id", session_id}, {"status", "closed"}};
}

nlohmann::json Gateway::session_json(const std::string& session_id) const
{
    auto entry = find_session(session_id);
    std::lock_guard lock(entry->mutex);
    nlohmann::json j;
    j["session_id"] = entry->session.id;
    j["workflow_id"] = entry->session.workflow_id;
    j["status"] = to_string(entry->session.status);
    j["busy"] = entry->busy;
    j["messages"] = nlohmann::json::array();
    for (const auto& m : entry->session.messages)
        j["messages"].push_back(to_json(m));
    return j;
}

std::vector<EventFrame> Gateway::events(const std::string& session_id, std::uint64_t from_seq) const
{
    return find_session(session_id)->log->since(from_seq);
}

std::shared_ptr<SessionEventLog> Gateway::event_log(const std::string& session_id) const
{
    return find_session(session_id)->log;
}

nlohmann::json Gateway::ingest_document(const UploadPart& file, const std::string& index)
{
    if (file.content.size() > options_.max_upload)
        throw GatewayError {413, "PayloadTooLarge", file.filename, {}};
    auto media = guess_media_type(file);
    if (auto semi = media.find(';'); semi != std::string::npos)
        media.resize(semi);
    try {
        const auto name = index.empty() ? std::string(kDefaultIndex) : index;
        const auto r = runtime_->ingest(name, file.content, media, {{"filename", file.filename}});
        ++documents_ingested_;
        return {{"doc_id", r.doc_id}, {"chunks", r.chunks}, {"index", name}};
    } catch (const Error& e) {
        throw from_error(e);
    }
}

nlohmann::json Gateway::turn_trace(const std::string& turn_id) const
{
    std::lock_guard lock(mutex_);
    auto it = traces_.find(turn_id);
    if (it == traces_.end())
        throw GatewayError {404, "NotFound", "turn " + turn_id, {}};
    return it->second;
}

nlohmann::json Gateway::workflows_json() const
{
    nlohmann::json list = nlohmann::json::array();
    for (const auto& id : runtime_->workflow_ids()) {
        auto doc = runtime_->workflow(id);
        if (!doc)
            continue;
        const auto diags = runtime_->validate(*doc);
        list.push_back({{"id", doc->id}, {"name", doc->name}, {"team", team_members(*doc)},
                        {"valid", !has_errors(diags)}, {"diagnostics", diags.size()}});
    }
    return list;
}

nlohmann::json Gateway::add_workflow(const std::string& document_text)
{
    WorkflowDoc doc;
    try {
        doc = parse_workflow(document_text);
    } catch (const Error& e) {
        throw from_error(e);
    }
    const auto diags = runtime_->validate(doc);
    nlohmann::json list = nlohmann::json::array();
    for (const auto& d : diags)
        list.push_back(nlohmann::json::parse(diagnostic_json(d)));
    if (has_errors(diags))
        throw GatewayError {422, "InvalidWorkflow", doc.id, {{"diagnostics", list}}};
    const auto id = doc.id;
    runtime_->add_workflow(std::move(doc));
    return {{"id", id}, {"diagnostics", list}};
}

nlohmann::json Gateway::batch(const nlohmann::json& body)
{
    if (!body.is_object() || !body.contains("prompts") || !body["prompts"].is_array())
        throw GatewayError {400, "MissingField", "prompts", {}};
    const int priority = body.value("priority", kDefaultPriority);
    if (priority < kMinPriority || priority > kMaxPriority)
        throw GatewayError {400, "InvalidParams", "priority", {}};

    std::vector<std::pair<std::shared_ptr<SessionEntry>, std::string>> planned;
    for (const auto& p : body["prompts"]) {
        if (!p.is_string())
            throw GatewayError {400, "InvalidParams", "prompts must be strings", {}};
        const auto created = create_session(body);
        planned.emplace_back(find_session(created["session_id"].get<std::string>()), p.get<std::string>());
    }
    std::vector<WorkerPool::Job> jobs;
    nlohmann::json turns = nlohmann::json::array();
    for (auto& [entry, prompt] : planned) {
        std::string turn_id;
        {
            std::lock_guard lock(entry->mutex);
            entry->busy = true;
            turn_id = entry->session.id + "-t" + std::to_string(++entry->turns);
        }
        ++turns_started_;
        turns.push_back({{"session_id", entry->session.id}, {"turn_id", turn_id}});
        jobs.push_back([this, entry, msg = make_text_message(Author::user(), prompt), turn_id]() mutable {
            run_turn(entry, std::move(msg), turn_id);
        });
    }
    const auto parent = pool_->submit_batch(std::move(jobs), priority);
    return {{"batch_id", parent}, {"turns", turns}};
}

std::string Gateway::metrics_text() const
{
    std::ostringstream out;
    const auto q = queue_->metrics();
    std::size_t sessions = 0;
    {
        std::lock_guard lock(mutex_);
        sessions = sessions_.size();
    }
    out << "maestro_sessions " << sessions << "\n";
    out << "maestro_turns_started_total " << turns_started_.load() << "\n";
    out << "maestro_turns_completed_total " << turns_completed_.load() << "\n";
    out << "maestro_turns_failed_total " << turns_failed_.load() << "\n";
    out << "maestro_turns_degraded_total " << turns_degraded_.load() << "\n";
    out << "maestro_http_requests_total " << http_requests_.load() << "\n";
    out << "maestro_documents_ingested_total " << documents_ingested_.load() << "\n";
    out << "maestro_queue_enqueued_total " << q.enqueued << "\n";
    out << "maestro_queue_completed_total " << q.completed << "\n";
    out << "maestro_queue_failed_total " << q.failed << "\n";
    out << "maestro_queue_reassigned_total " << q.reassigned << "\n";
    out << "maestro_queue_depth " << q.depth << "\n";
    out << "maestro_queue_running " << q.running << "\n";
    out << "maestro_blobs " << runtime_->blobs().size() << "\n";
    out << "maestro_alerts_total " << runtime_->health().alerts_total() << "\n";
    for (const auto& [binding, n] : runtime_->health().failures_total())
        out << "maestro_backend_failures_total{binding=\"" << binding << "\"} " << n << "\n";
    return out.str();
}

void Gateway::install_routes()
{
    auto& srv = *server_;
    srv.new_task_queue = [n = options_.http_threads] { return new httplib::ThreadPool(n); };
    srv.set_payload_max_length(options_.max_upload * 2 + (1u << 20));

    srv.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        ++http_requests_;
        if (options_.token.empty() || req.path == "/healthz")
            return httplib::Server::HandlerResponse::Unhandled;
        if (req.get_header_value("Authorization") != "Bearer " + options_.token) {
            send_json(res, 401, {{"error", "AuthError"}, {"detail", "missing or invalid bearer token"}});
            return httplib::Server::HandlerResponse::Handled;
        }
        return httplib::Server::HandlerResponse::Unhandled;
    });

    // Wraps a handler so GatewayError and Error become JSON error responses.
    auto guarded = [](auto fn) {
        return [fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const GatewayError& e) {
                send_json(res, e.status, error_body(e));
            } catch (const Error& e) {
                send_json(res, status_for(e.code()), error_body(from_error(e)));
            } catch (const nlohmann::json::exception& e) {
                send_json(res, 400, {{"error", "SyntaxError"}, {"detail", e.what()}});
            }
        };
    };

    srv.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, {{"status", "ok"}});
    });

    srv.Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(metrics_text(), "text/plain; version=0.0.4");
    });

    srv.Get("/v1/workflows", guarded([this](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, workflows_json());
    }));

    srv.Post("/v1/workflows", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, 201, add_workflow(req.body));
    }));

    srv.Post("/v1/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, 201, create_session(nlohmann::json::parse(req.body)));
    }));

    srv.Get(R"(/v1/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, 200, session_json(req.matches[1]));
    }));

    srv.Post(R"(/v1/sessions/([^/]+)/close)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, 200, close_session(req.matches[1]));
    }));

    srv.Post(R"(/v1/sessions/([^/]+)/messages)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
                 std::string text;
                 std::vector<UploadPart> files;
                 if (req.is_multipart_form_data()) {
                     files = upload_parts(req, &text);
                 } else {
                     const auto body = nlohmann::json::parse(req.body);
                     text = body.value("text", "");
                 }
                 send_json(res, 202, post_message(req.matches[1], text, files));
             }));

    srv.Get(R"(/v1/sessions/([^/]+)/events)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto log = event_log(req.matches[1]);
        std::uint64_t from = 1;
        if (req.has_param("from_seq"))
            from = std::stoull(req.get_param_value("from_seq"));
        else if (req.has_header("Last-Event-ID"))
            from = std::stoull(req.get_header_value("Last-Event-ID")) + 1;
        const bool follow = req.get_param_value("follow") != "0";
        auto next = std::make_shared<std::uint64_t>(from == 0 ? 1 : from);
        auto last_write = std::make_shared<std::chrono::steady_clock::time_point>(std::chrono::steady_clock::now());
        const auto heartbeat = options_.heartbeat;
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider(
            "text/event-stream",
            [this, log, next, last_write, follow, heartbeat](std::size_t, httplib::DataSink& sink) {
                for (const auto& f : log->since(*next)) {
                    const auto chunk = sse_encode(f);
                    if (!sink.write(chunk.data(), chunk.size()))
                        return false;
                    *next = f.seq + 1;
                    *last_write = std::chrono::steady_clock::now();
                }
                if (!follow || stopping_ || log->closed()) {
                    sink.done();
                    return true;
                }
                const auto wait = std::min<Millis>(heartbeat, Millis {250});
                if (!log->wait_for(*next - 1, wait)) {
                    if (std::chrono::steady_clock::now() - *last_write >= heartbeat) {
                        static const std::string beat = ": heartbeat\n\n";
                        if (!sink.write(beat.data(), beat.size()))
                            return false;
                        *last_write = std::chrono::steady_clock::now();
                    }
                }
                return sink.is_writable();
            });
    }));

    srv.Post("/v1/rag/documents", guarded([this](const httplib::Request& req, httplib::Response& res) {
        if (!req.is_multipart_form_data())
            throw GatewayError {400, "MissingField", "multipart file", {}};
        const auto files = upload_parts(req, nullptr);
        if (files.empty())
            throw GatewayError {400, "MissingField", "file", {}};
        const std::string index = req.has_file("index") ? req.get_file_value("index").content : "";
        send_json(res, 201, ingest_document(files.front(), index));
    }));

    srv.Get(R"(/v1/blobs/([0-9a-f]{64}))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto ref = runtime_->blobs().find(req.matches[1].str());
        auto bytes = runtime_->blobs().get(req.matches[1].str());
        if (!ref || !bytes)
            throw GatewayError {404, "NotFound", "blob", {}};
        res.set_content(std::string(bytes->begin(), bytes->end()), ref->media_type);
    }));

    srv.Get(R"(/v1/turns/([^/]+)/trace)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, 200, turn_trace(req.matches[1]));
    }));

    srv.Get("/v1/state/export", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(runtime_->state().export_jsonl(), "application/x-ndjson");
    });

    srv.Post("/v1/batch", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, 202, batch(nlohmann::json::parse(req.body)));
    }));
}

} // namespace maestro
