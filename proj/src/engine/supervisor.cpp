// SPDX-License-Identifier: Apache-2.0
#include "maestro/engine/supervisor.hpp"

#include "maestro/core/serialize.hpp"
#include "maestro/error.hpp"

#include <algorithm>

namespace maestro {

std::string corrective_prompt(const std::vector<std::string>& team)
{
    PromptTemplate tpl("Respond with exactly one of: {team_members} or FINISH");
    return render_template(tpl, {{"team_members", join_team(team)}});
}

std::string tool_usage_hint(const std::vector<std::string>& tools)
{
    std::string names;
    for (const auto& t : tools)
        names += (names.empty() ? "" : ", ") + t;
    return "To use a tool, reply with a single line: TOOL <name> {\"query\": \"...\"}. Tools: " + names + ".";
}

namespace {

bool window_has(const std::vector<ChatMessage>& window, Modality m)
{
    return std::any_of(window.begin(), window.end(), [&](const ChatMessage& c) { return c.has_modality(m); });
}

std::optional<ModalPayload> newest_image(const std::vector<ChatMessage>& window)
{
    for (auto m = window.rbegin(); m != window.rend(); ++m)
        for (auto p = m->payloads.rbegin(); p != m->payloads.rend(); ++p)
            if (p->kind() == Modality::Image)
                return *p;
    return std::nullopt;
}

nlohmann::json message_body(const ChatMessage& m)
{
    nlohmann::json j;
    j["author"] = m.author.label();
    j["payloads"] = nlohmann::json::array();
    for (const auto& p : m.payloads)
        j["payloads"].push_back(to_json(p));
    j["degraded"] = m.degraded;
    if (m.source)
        j["source"] = to_string(*m.source);
    return j;
}

std::string render(const PromptTemplate& tpl, const Bindings& b)
{
    return render_template(tpl, restrict_bindings(tpl, b));
}

} // namespace

Engine::Engine(std::shared_ptr<Runtime> runtime) : runtime_(std::move(runtime))
{
    if (!runtime_)
        runtime_ = std::make_shared<Runtime>();
}

std::vector<BackendMessage> Engine::to_backend_messages(const std::vector<ChatMessage>& window)
{
    std::vector<BackendMessage> out;
    for (const auto& m : window) {
        std::string role;
        switch (m.author.role) {
        case Role::User: role = "user"; break;
        case Role::Supervisor:
        case Role::Worker: role = "assistant"; break;
        case Role::Tool: role = "tool"; break;
        case Role::System: role = "system"; break;
        }
        out.push_back({role, m.author.name, m.payloads});
    }
    return out;
}

std::vector<ChatMessage> Engine::recent(const std::vector<ChatMessage>& window) const
{
    const auto n = runtime_->options().window_size;
    if (n == 0 || window.size() <= n)
        return window;
    return {window.end() - static_cast<std::ptrdiff_t>(n), window.end()};
}

Bindings Engine::agent_bindings(const NodeSpec& agent, const WorkflowDoc& doc, const std::string& query) const
{
    Bindings b;
    for (const auto& [k, v] : doc.vars)
        b[k] = v;
    if (agent.config)
        for (const auto& [k, v] : *agent.config)
            b[k] = v;
    if (!b.count("company"))
        b["company"] = doc.name;
    b["team_members"] = join_team(team_members(doc));
    b["query"] = query;
    return b;
}

BackendResponse Engine::call_backend(const WorkflowDoc& doc, const std::string& binding, BackendRequest req,
                                     TraceRecorder& trace, SupervisorState* state)
{
    auto route = runtime_->backends().route(doc, binding);
    const auto kind = std::string(to_string(req.kind));

    InvokeContext ctx;
    ctx.on_event = [&](const BackendEvent& e) {
        trace.add(TraceEventType::BackendCall, e.binding,
                  {{"binding", e.binding},
                   {"phase", e.phase},
                   {"attempt", e.attempt},
                   {"status", e.status},
                   {"ok", e.ok},
                   {"error", e.error},
                   {"digest", e.digest}},
                  e.duration);
    };
    ResilienceHooks hooks;
    hooks.on_attempt = [&](const std::string& name, const AttemptRecord& rec) {
        trace.add(TraceEventType::BackendCall, name,
                  {{"binding", name},
                   {"phase", "attempt"},
                   {"kind", kind},
                   {"attempt", rec.attempt},
                   {"ok", rec.ok},
                   {"error", rec.error},
                   {"delay_ms", rec.delay_before.count()}},
                  rec.duration);
    };
    hooks.on_alert = [&](const Alert& a) {
        trace.add(TraceEventType::Alert, a.binding, {{"type", "alert"}, {"binding", a.binding}, {"count", a.count}});
    };

    auto resp = route_with_fallback(route, req, runtime_->clock(), &runtime_->health(), &runtime_->limiter(), ctx,
                                    hooks);
    if (resp.degraded) {
        trace.add(TraceEventType::Degraded, binding,
                  {{"binding", binding}, {"reason", "BackendFailure"}, {"text", resp.text.value_or("")}});
        if (state)
            state->degraded = true;
    }
    return resp;
}

ChatMessage Engine::preprocess_payloads(const ChatMessage& msg, const WorkflowDoc& doc, TraceRecorder& trace)
{
    if (!msg.has_modality(Modality::Audio))
        return msg;
    std::string transcriber;
    for (const auto& n : doc.nodes) {
        if (n.kind != NodeKind::Backend)
            continue;
        if (binding_from_node(n).kinds.count(RequestKind::Transcription)) {
            transcriber = n.name;
            break;
        }
    }
    if (transcriber.empty())
        throw Error(Errc::NoTranscriptionBackend, "workflow " + doc.id + " has no transcription binding");

    ChatMessage out = msg;
    for (auto& p : out.payloads) {
        if (p.kind() != Modality::Audio)
            continue;
        BackendRequest req;
        req.kind = RequestKind::Transcription;
        req.messages.push_back({"user", "", {p}});
        auto resp = call_backend(doc, transcriber, req, trace);
        p = ModalPayload::text(resp.text.value_or("")).with_attachment(p.blob_ref());
    }
    return out;
}

RouteDecision Engine::decide_next(SupervisorState& state, const WorkflowDoc& doc, TraceRecorder& trace)
{
    const auto* sup = doc.supervisor();
    if (!sup || !sup->profile)
        throw Error(Errc::InvalidWorkflow, "workflow " + doc.id + " has no supervisor");
    const auto& profile = *sup->profile;
    const auto team = team_members(doc);

    BackendRequest req;
    req.kind = window_has(state.window, Modality::Image) ? RequestKind::VisionCompletion : RequestKind::ChatCompletion;
    req.system_prompt = render(profile.system_template, agent_bindings(*sup, doc, state.query));
    req.messages = to_backend_messages(recent(state.window));

    bool degraded = false;
    auto ask = [&](const BackendRequest& r, int attempt) {
        ++state.supervisor_calls;
        const auto started = runtime_->clock().now();
        auto resp = call_backend(doc, profile.backend, r, trace, &state);
        const auto text = resp.text.value_or("");
        trace.add(TraceEventType::SupervisorCall, sup->name,
                  {{"attempt", attempt}, {"reply", text}, {"degraded", resp.degraded}},
                  runtime_->clock().now() - started);
        degraded = resp.degraded;
        return text;
    };

    auto reply = ask(req, 1);
    RouteDecision decision;
    if (degraded) {
        decision = RouteDecision::done();
    } else {
        try {
            decision = parse_route_decision(reply, team);
        } catch (const Error& e) {
            if (e.code() != Errc::RouteParseError)
                throw;
            auto retry = req;
            retry.messages.push_back({"user", "", {ModalPayload::text(corrective_prompt(team))}});
            reply = ask(retry, 2);
            decision = degraded ? RouteDecision::done() : parse_route_decision(reply, team);
        }
    }
    state.last_supervisor_reply = reply;

    nlohmann::json body {{"decision", decision.finish ? "FINISH" : "NextWorker"}};
    if (!decision.finish)
        body["worker"] = decision.worker;
    trace.add(TraceEventType::Decision, decision.label(), std::move(body));
    return decision;
}

ToolOutput Engine::invoke_tool(const std::string& tool, const nlohmann::json& args, const WorkflowDoc& doc,
                               TraceRecorder& trace, SupervisorState& state, int depth)
{
    const auto* node = doc.find(tool);
    if (!node || node->kind != NodeKind::Tool)
        throw Error(Errc::ToolFailure, tool + ": no such tool node");

    int subflows = 0;
    ToolEnv env {*runtime_, doc, {}, {}, {}};
    env.call_backend = [&](const std::string& binding, const BackendRequest& req) {
        return call_backend(doc, binding, req, trace, &state);
    };
    env.call_tool = [&](const std::string& name, const nlohmann::json& a) {
        return invoke_tool(name, a, doc, trace, state, depth);
    };
    env.run_subflow = [&](const std::string& workflow_id, const std::string& query) {
        if (depth + 1 > kMaxSubflowDepth)
            throw Error(Errc::ToolFailure, tool + ": subflow nesting too deep");
        auto sub = runtime_->workflow(workflow_id);
        if (!sub)
            throw Error(Errc::ToolFailure, tool + ": unknown workflow " + workflow_id);
        Session session;
        session.id = state.turn_id + "/" + tool + "/" + std::to_string(++subflows);
        session.workflow_id = workflow_id;
        TurnOptions o;
        o.turn_id = session.id + "-t1";
        o.depth = depth + 1;
        auto r = run_turn(session, make_text_message(Author::user(), query), *sub, o);
        return SubflowAnswer {r.final_message.text(), r.source, r.final_message.payloads, r.turn_id};
    };

    const auto started = runtime_->clock().now();
    try {
        auto out = run_tool(*node, args, env);
        trace.add(TraceEventType::ToolCall, tool,
                  {{"tool", tool}, {"args", args}, {"result", out.result}, {"details", out.details}},
                  runtime_->clock().now() - started);
        return out;
    } catch (const Error& e) {
        trace.add(TraceEventType::ToolCall, tool, {{"tool", tool}, {"args", args}, {"error", e.what()}},
                  runtime_->clock().now() - started);
        throw;
    }
}

ChatMessage Engine::execute_worker(const std::string& name, SupervisorState& state, const WorkflowDoc& doc,
                                   TraceRecorder& trace, int depth)
{
    const auto* node = doc.find(name);
    if (!node || node->kind != NodeKind::Worker || !node->profile)
        throw Error(Errc::InvalidWorkflow, name + " is not a worker");
    const auto& profile = *node->profile;
    const auto bindings = agent_bindings(*node, doc, state.query);
    const auto started = runtime_->clock().now();

    ChatMessage out;
    out.author = Author::worker(name);
    out.session_id = state.turn_id;
    int rounds = 0;

    std::optional<RequestKind> requested;
    if (profile.request_kind) {
        requested = request_kind_from_string(*profile.request_kind);
        if (!requested)
            throw Error(Errc::InvalidWorkflow, name + ": unknown request_kind " + *profile.request_kind);
    }

    if (requested && produces_blob(*requested)) {
        const auto tpl = profile.query_template.value_or(PromptTemplate("{query}"));
        std::vector<ModalPayload> inputs {ModalPayload::text(render(tpl, bindings))};
        if (auto img = newest_image(state.window))
            inputs.push_back(*img);
        BackendRequest req;
        req.kind = *requested;
        if (!profile.system_template.empty())
            req.system_prompt = render(profile.system_template, bindings);
        req.messages.push_back({"user", "", std::move(inputs)});
        auto resp = call_backend(doc, profile.backend, req, trace, &state);
        if (resp.blob) {
            const auto modality = modality_for_media_type(resp.blob->media_type)
                                      .value_or(*requested == RequestKind::VideoGeneration ? Modality::Video
                                                                                           : Modality::Image);
            out.payloads.push_back(ModalPayload::blob(modality, *resp.blob));
        } else {
            out.payloads.push_back(ModalPayload::text(resp.text.value_or("")));
        }
        out.degraded = resp.degraded;
    } else {
        std::string system = render(profile.system_template, bindings);
        if (!profile.tools.empty())
            system += "\n\n" + tool_usage_hint(profile.tools);
        auto scratch = state.window;
        std::vector<ModalPayload> attachments;
        std::string reply;
        while (true) {
            BackendRequest req;
            req.kind = requested ? *requested
                                 : (window_has(scratch, Modality::Image) ? RequestKind::VisionCompletion
                                                                         : RequestKind::ChatCompletion);
            req.system_prompt = system;
            req.messages = to_backend_messages(recent(scratch));
            auto resp = call_backend(doc, profile.backend, req, trace, &state);
            reply = resp.text.value_or("");
            out.degraded = out.degraded || resp.degraded;
            if (resp.degraded)
                break;
            auto directive = parse_tool_directive(reply);
            if (!directive || rounds >= kMaxToolRounds)
                break;
            if (std::find(profile.tools.begin(), profile.tools.end(), directive->name) == profile.tools.end())
                throw Error(Errc::ToolFailure, directive->name + ": not available to " + name);
            auto result = invoke_tool(directive->name, directive->args, doc, trace, state, depth);
            ++rounds;
            if (result.source) {
                out.source = result.source;
                state.source = result.source;
            }
            attachments.insert(attachments.end(), result.attachments.begin(), result.attachments.end());
            // Tool exchanges stay private to this worker call.
            scratch.push_back(make_text_message(Author::worker(name), reply));
            scratch.push_back(make_text_message(Author::tool(directive->name), tool_result_line(result.result)));
        }
        out.payloads.push_back(ModalPayload::text(reply));
        out.payloads.insert(out.payloads.end(), attachments.begin(), attachments.end());
    }

    ++state.hop_count;
    const int k = ++state.outputs_per_worker[name];
    const auto key = "turn/" + state.turn_id + "/worker/" + name + "/" + std::to_string(k);
    const auto& first = out.payloads.front();
    runtime_->state().put(doc.shared_memory, key,
                          first.is_text() ? StoredValue(out.text()) : StoredValue(first.blob_ref()), name);

    state.window.push_back(out);
    state.last_worker = name;
    state.last_output = out;
    if (out.degraded)
        state.degraded = true;

    trace.add(TraceEventType::WorkerCall, name,
              {{"worker", name}, {"message", message_body(out)}, {"tool_rounds", rounds}},
              runtime_->clock().now() - started);
    return out;
}

TurnResult Engine::run_turn(Session& session, ChatMessage user_msg, const WorkflowDoc& doc, TurnOptions opts)
{
    if (session.status != SessionStatus::Open)
        throw Error(Errc::SessionClosed, session.id);
    if (!doc.supervisor() || !doc.supervisor()->profile)
        throw Error(Errc::InvalidWorkflow, "workflow " + doc.id + " has no supervisor");

    std::size_t user_turns = 1;
    for (const auto& m : session.messages)
        user_turns += m.author.role == Role::User ? 1 : 0;
    const auto turn_id = opts.turn_id.empty() ? session.id + "-t" + std::to_string(user_turns) : opts.turn_id;
    TraceRecorder trace(turn_id, opts.sink);

    std::optional<ChatMessage> previous;
    for (auto m = session.messages.rbegin(); m != session.messages.rend(); ++m) {
        if (m->author.role == Role::Supervisor) {
            previous = *m;
            break;
        }
    }

    user_msg.author = Author::user();
    user_msg.session_id = session.id;
    auto processed = preprocess_payloads(user_msg, doc, trace);
    const auto& stored = append_in_place(session, std::move(processed));

    SupervisorState state;
    state.turn_id = turn_id;
    state.query = stored.text();
    if (previous)
        state.window.push_back(*previous);
    state.window.push_back(stored);

    while (true) {
        if (state.hop_count >= doc.max_hops) {
            state.degraded = true;
            trace.add(TraceEventType::Degraded, doc.supervisor()->name,
                      {{"reason", "HopLimitExceeded"}, {"hops", state.hop_count}});
            break;
        }
        auto decision = decide_next(state, doc, trace);
        if (decision.finish)
            break;
        execute_worker(decision.worker, state, doc, trace, opts.depth);
    }

    ChatMessage final_msg;
    final_msg.author = Author::supervisor();
    if (state.last_output)
        final_msg.payloads = state.last_output->payloads;
    else
        final_msg.payloads.push_back(ModalPayload::text(state.last_supervisor_reply));
    final_msg.degraded = state.degraded;
    final_msg.source = state.source;
    final_msg.session_id = session.id;

    TurnResult result;
    result.turn_id = turn_id;
    result.final_message = append_in_place(session, std::move(final_msg));
    result.trace = trace.snapshot();
    result.degraded = state.degraded;
    result.source = state.source;
    return result;
}

} // namespace maestro
