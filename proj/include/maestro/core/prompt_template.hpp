// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace maestro {

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Text with single-brace {name} placeholders, name = [A-Za-z_][A-Za-z0-9_]*.
/// Any other brace is literal text.
class PromptTemplate {
public:
    PromptTemplate() = default;
    explicit PromptTemplate(std::string text);

    const std::string& text() const noexcept { return text_; }
    const std::set<std::string, std::less<>>& declared_vars() const noexcept { return vars_; }
    bool empty() const noexcept { return text_.empty(); }

    bool operator==(const PromptTemplate& o) const { return text_ == o.text_; }

private:
    friend std::string render_template(const PromptTemplate&, const Bindings&, bool);

    struct Segment {
        bool placeholder = false;
        std::string value; // literal text or variable name
    };

    std::string text_;
    std::set<std::string, std::less<>> vars_;
    std::vector<Segment> segments_;
};

/// Substitutes every placeholder in one pass; substituted text is never re-expanded.
/// Throws MissingVariable for unbound placeholders and, when strict, UnknownVariable
/// for bindings the template does not declare.
std::string render_template(const PromptTemplate& tpl, const Bindings& bindings, bool strict = true);

/// Keeps only the bindings the template declares.
Bindings restrict_bindings(const PromptTemplate& tpl, const Bindings& bindings);

} // namespace maestro
