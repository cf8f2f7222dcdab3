// SPDX-License-Identifier: Apache-2.0
#include "maestro/error.hpp"

namespace maestro {

std::string_view to_string(Errc code)
{
    switch (code) {
    case Errc::MissingVariable: return "MissingVariable";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::SessionClosed: return "SessionClosed";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::MissingField: return "MissingField";
    case Errc::DuplicateNodeName: return "DuplicateNodeName";
    case Errc::InvalidWorkflow: return "InvalidWorkflow";
    case Errc::RouteParseError: return "RouteParseError";
    case Errc::NoTranscriptionBackend: return "NoTranscriptionBackend";
    case Errc::ToolFailure: return "ToolFailure";
    case Errc::AlreadyRunning: return "AlreadyRunning";
    case Errc::NotRunning: return "NotRunning";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::NoSuchVersion: return "NoSuchVersion";
    case Errc::SubscriberLagged: return "SubscriberLagged";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::EmptyText: return "EmptyText";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::NoWebTool: return "NoWebTool";
    case Errc::UnsupportedMediaType: return "UnsupportedMediaType";
    case Errc::DecodeError: return "DecodeError";
    case Errc::BackendFailure: return "BackendFailure";
    case Errc::FixtureMiss: return "FixtureMiss";
    case Errc::FixtureParseError: return "FixtureParseError";
    case Errc::UnknownBinding: return "UnknownBinding";
    case Errc::InvalidRequest: return "InvalidRequest";
    case Errc::NotFound: return "NotFound";
    case Errc::Busy: return "Busy";
    case Errc::AuthError: return "AuthError";
    case Errc::ProviderError: return "ProviderError";
    case Errc::Timeout: return "Timeout";
    case Errc::TransportError: return "TransportError";
    case Errc::HopLimitExceeded: return "HopLimitExceeded";
    case Errc::Conflict: return "Conflict";
    }
    return "Unknown";
}

} // namespace maestro
