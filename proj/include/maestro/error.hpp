// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maestro {

enum class Errc {
    MissingVariable,
    UnknownVariable,
    SessionClosed,
    SyntaxError,
    MissingField,
    DuplicateNodeName,
    InvalidWorkflow,
    RouteParseError,
    NoTranscriptionBackend,
    ToolFailure,
    AlreadyRunning,
    NotRunning,
    UnknownTask,
    NoSuchVersion,
    SubscriberLagged,
    InvalidParams,
    EmptyText,
    DimMismatch,
    NoWebTool,
    UnsupportedMediaType,
    DecodeError,
    BackendFailure,
    FixtureMiss,
    FixtureParseError,
    UnknownBinding,
    InvalidRequest,
    NotFound,
    Busy,
    AuthError,
    ProviderError,
    Timeout,
    TransportError,
    HopLimitExceeded,
    Conflict,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail, int status = 0)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail),
          status_(status) {}

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    /// Provider HTTP status for ProviderError, else 0.
    int status() const noexcept { return status_; }

private:
    Errc code_;
    std::string detail_;
    int status_ = 0;
};

} // namespace maestro
