// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/backend/backend.hpp"
#include "maestro/backend/http_transport.hpp"
#include "maestro/error.hpp"
#include "maestro/workflow/workflow.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <algorithm>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace maestro::test {

inline std::string data_dir()
{
    return MAESTRO_TEST_DATA_DIR;
}

inline std::string data_path(const std::string& rel)
{
    return data_dir() + "/" + rel;
}

inline std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::NotFound, path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json load_json(const std::string& rel)
{
    return nlohmann::json::parse(slurp(data_path(rel)));
}

/// HttpTransport that records every request and answers from a handler.
class FakeTransport final : public HttpTransport {
public:
    using Handler = std::function<HttpResponse(const HttpRequest&)>;

    explicit FakeTransport(Handler handler) : handler_(std::move(handler)) {}

    HttpResponse send(const HttpRequest& req, Millis timeout) override
    {
        {
            std::lock_guard lock(mutex_);
            requests_.push_back(req);
            timeouts_.push_back(timeout);
        }
        return handler_(req);
    }

    std::vector<HttpRequest> requests() const
    {
        std::lock_guard lock(mutex_);
        return requests_;
    }
    std::vector<Millis> timeouts() const
    {
        std::lock_guard lock(mutex_);
        return timeouts_;
    }

private:
    Handler handler_;
    mutable std::mutex mutex_;
    std::vector<HttpRequest> requests_;
    std::vector<Millis> timeouts_;
};

/// Backend that plays back a script: an Errc entry throws, a string entry answers.
class ScriptedBackend final : public Backend {
public:
    struct Step {
        std::optional<Errc> error;
        std::string text;
        int status = 0;
    };

    ScriptedBackend(std::string name, std::vector<Step> steps, RetryPolicy retry = {})
        : Backend(make_binding(std::move(name), retry)), steps_(std::move(steps))
    {
    }

    bool supports(RequestKind) const override { return true; }

    BackendResponse invoke(const BackendRequest& req, const InvokeContext&) override
    {
        std::lock_guard lock(mutex_);
        const auto& step = steps_[std::min(calls_, steps_.size() - 1)];
        ++calls_;
        if (step.error)
            throw Error(*step.error, binding_.name + " scripted failure", step.status);
        BackendResponse r;
        r.kind = req.kind;
        r.text = step.text;
        r.served_by = binding_.name;
        return r;
    }

    std::size_t calls() const
    {
        std::lock_guard lock(mutex_);
        return calls_;
    }

    static Step fail(Errc e, int status = 0) { return {e, {}, status}; }
    static Step ok(std::string text) { return {std::nullopt, std::move(text), 0}; }

private:
    static BackendBinding make_binding(std::string name, RetryPolicy retry)
    {
        BackendBinding b;
        b.name = std::move(name);
        b.fixture_set = "scripted";
        b.retry = retry;
        return b;
    }

    std::vector<Step> steps_;
    mutable std::mutex mutex_;
    std::size_t calls_ = 0;
};

inline BackendRequest chat_request(const std::string& text)
{
    BackendRequest r;
    r.kind = RequestKind::ChatCompletion;
    r.messages.push_back({"user", "", {ModalPayload::text(text)}});
    return r;
}

} // namespace maestro::test
