// SPDX-License-Identifier: Apache-2.0
#include "maestro/engine/route.hpp"

#include "maestro/error.hpp"

namespace maestro {
namespace {

std::string_view trim(std::string_view s)
{
    const auto* ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

bool is_quote(char c)
{
    return c == '"' || c == '\'' || c == '`';
}

std::string lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    return out;
}

} // namespace

RouteDecision parse_route_decision(std::string_view raw, const std::vector<std::string>& team)
{
    auto s = trim(raw);
    while (s.size() >= 2 && is_quote(s.front()) && s.back() == s.front())
        s = trim(s.substr(1, s.size() - 2));

    const auto folded = lower(s);
    if (folded == "finish")
        return RouteDecision::done();
    for (const auto& name : team)
        if (lower(name) == folded)
            return RouteDecision::next(name);

    const std::string* found = nullptr;
    int matches = 0;
    for (const auto& name : team) {
        if (!name.empty() && folded.find(lower(name)) != std::string::npos) {
            found = &name;
            ++matches;
        }
    }
    if (matches == 1)
        return RouteDecision::next(*found);
    throw Error(Errc::RouteParseError, std::string(raw));
}

} // namespace maestro
