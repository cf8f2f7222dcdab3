// SPDX-License-Identifier: Apache-2.0
#include "maestro/core/prompt_template.hpp"

#include "maestro/error.hpp"

namespace maestro {

namespace {

bool ident_start(char c)
{
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool ident_char(char c)
{
    return ident_start(c) || (c >= '0' && c <= '9');
}

} // namespace

PromptTemplate::PromptTemplate(std::string text) : text_(std::move(text))
{
    std::string literal;
    std::size_t i = 0;
    while (i < text_.size()) {
        if (text_[i] == '{' && i + 1 < text_.size() && ident_start(text_[i + 1])) {
            std::size_t j = i + 2;
            while (j < text_.size() && ident_char(text_[j]))
                ++j;
            if (j < text_.size() && text_[j] == '}') {
                if (!literal.empty())
                    segments_.push_back({false, std::move(literal)});
                literal.clear();
                auto name = text_.substr(i + 1, j - i - 1);
                vars_.insert(name);
                segments_.push_back({true, std::move(name)});
                i = j + 1;
                continue;
            }
        }
        literal.push_back(text_[i]);
        ++i;
    }
    if (!literal.empty())
        segments_.push_back({false, std::move(literal)});
}

std::string render_template(const PromptTemplate& tpl, const Bindings& bindings, bool strict)
{
    for (const auto& var : tpl.vars_) {
        if (!bindings.contains(var))
            throw Error(Errc::MissingVariable, var);
    }
    if (strict) {
        for (const auto& [name, _] : bindings) {
            if (!tpl.vars_.contains(name))
                throw Error(Errc::UnknownVariable, name);
        }
    }

    std::string out;
    out.reserve(tpl.text_.size());
    for (const auto& seg : tpl.segments_)
        out += seg.placeholder ? bindings.find(seg.value)->second : seg.value;
    return out;
}

Bindings restrict_bindings(const PromptTemplate& tpl, const Bindings& bindings)
{
    Bindings out;
    for (const auto& var : tpl.declared_vars()) {
        if (auto it = bindings.find(var); it != bindings.end())
            out.emplace(it->first, it->second);
    }
    return out;
}

} // namespace maestro
