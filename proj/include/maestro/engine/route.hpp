// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maestro {

struct RouteDecision {
    bool finish = false;
    std::string worker; // set unless finish

    static RouteDecision next(std::string name) { return {false, std::move(name)}; }
    static RouteDecision done() { return {true, {}}; }

    std::string label() const { return finish ? "FINISH" : worker; }
    bool operator==(const RouteDecision&) const = default;
};

/// Trims whitespace and surrounding quotes, compares case-insensitively:
/// "finish" -> Finish, a team name -> that worker, otherwise a unique team
/// name found as a substring. Throws RouteParseError.
RouteDecision parse_route_decision(std::string_view raw, const std::vector<std::string>& team);

} // namespace maestro
