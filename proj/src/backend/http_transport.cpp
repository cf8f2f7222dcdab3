// SPDX-License-Identifier: Apache-2.0
#include "maestro/backend/http_transport.hpp"

#include "maestro/error.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

namespace maestro {
namespace {

std::pair<std::string, std::string> split_url(const std::string& url)
{
    const auto scheme = url.find("://");
    if (scheme == std::string::npos)
        throw Error(Errc::TransportError, "url without scheme");
    const auto path = url.find('/', scheme + 3);
    if (path == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path), url.substr(path)};
}

class HttplibTransport final : public HttpTransport {
public:
    HttpResponse send(const HttpRequest& req, Millis timeout) override
    {
        auto [origin, path] = split_url(req.url);
        httplib::Client client(origin);
        const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout).count();
        client.set_connection_timeout(std::max<long long>(1, secs), 0);
        client.set_read_timeout(std::max<long long>(1, secs), 0);
        client.set_write_timeout(std::max<long long>(1, secs), 0);
        client.set_follow_location(true);

        httplib::Headers headers;
        for (const auto& [k, v] : req.headers)
            headers.emplace(k, v);

        httplib::Result res;
        if (req.method == "POST")
            res = client.Post(path, headers, req.body, req.content_type.empty() ? "application/json" : req.content_type);
        else
            res = client.Get(path, headers);

        if (!res) {
            if (res.error() == httplib::Error::Read || res.error() == httplib::Error::ConnectionTimeout)
                throw Error(Errc::Timeout, origin + " did not answer in time");
            throw Error(Errc::TransportError, origin + ": " + httplib::to_string(res.error()));
        }
        HttpResponse out;
        out.status = res->status;
        out.body = res->body;
        for (const auto& [k, v] : res->headers) {
            std::string lower = k;
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            out.headers[lower] = v;
        }
        return out;
    }
};

} // namespace

std::shared_ptr<HttpTransport> make_http_transport()
{
    return std::make_shared<HttplibTransport>();
}

} // namespace maestro
