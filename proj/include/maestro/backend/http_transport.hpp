// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/clock.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace maestro {

struct HttpRequest {
    std::string method = "GET";
    std::string url; // absolute, http:// or https://
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    std::string content_type;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers; // lowercase names
};

/// Blocking HTTP round-trip. Throws TransportError on connection failures and
/// Timeout when the deadline passes.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse send(const HttpRequest& req, Millis timeout) = 0;
};

/// cpp-httplib backed transport (linked from maestro_http).
std::shared_ptr<HttpTransport> make_http_transport();

} // namespace maestro
