// SPDX-License-Identifier: Apache-2.0
#include "maestro/rag/splitter.hpp"

#include "maestro/core/digest.hpp"
#include "maestro/error.hpp"

#include <array>
#include <deque>

namespace maestro {
namespace {

struct Span {
    std::size_t begin = 0;
    std::size_t len = 0;
};

const std::array<std::u32string_view, 4> kSeparators {U"\n\n", U"\n", U" ", U""};

class Splitter {
public:
    Splitter(const std::u32string& text, std::size_t chunk_size, std::size_t overlap)
        : text_(text), chunk_size_(chunk_size), overlap_(overlap) {}

    std::vector<Span> run()
    {
        std::vector<Span> out;
        if (!text_.empty())
            split({0, text_.size()}, 0, out);
        return out;
    }

private:
    std::u32string_view view(Span s) const { return std::u32string_view(text_).substr(s.begin, s.len); }

    // Pieces end right after each separator occurrence.
    std::vector<Span> pieces(Span s, std::u32string_view sep) const
    {
        std::vector<Span> out;
        if (sep.empty()) {
            for (std::size_t i = 0; i < s.len; ++i)
                out.push_back({s.begin + i, 1});
            return out;
        }
        const auto v = view(s);
        std::size_t start = 0;
        while (start < v.size()) {
            auto pos = v.find(sep, start);
            std::size_t end = pos == std::u32string_view::npos ? v.size() : pos + sep.size();
            out.push_back({s.begin + start, end - start});
            start = end;
        }
        return out;
    }

    void split(Span s, std::size_t level, std::vector<Span>& out) const
    {
        std::size_t chosen = kSeparators.size() - 1;
        for (std::size_t i = level; i < kSeparators.size(); ++i) {
            if (kSeparators[i].empty() || view(s).find(kSeparators[i]) != std::u32string_view::npos) {
                chosen = i;
                break;
            }
        }
        std::vector<Span> good;
        for (const auto& p : pieces(s, kSeparators[chosen])) {
            if (p.len <= chunk_size_) {
                good.push_back(p);
                continue;
            }
            merge(good, out);
            good.clear();
            split(p, chosen + 1, out);
        }
        merge(good, out);
    }

    void merge(const std::vector<Span>& pieces, std::vector<Span>& out) const
    {
        std::deque<Span> current;
        std::size_t total = 0;
        for (const auto& p : pieces) {
            if (total + p.len > chunk_size_ && !current.empty()) {
                out.push_back(join(current));
                while (total > overlap_ || (total + p.len > chunk_size_ && total > 0)) {
                    total -= current.front().len;
                    current.pop_front();
                }
            }
            current.push_back(p);
            total += p.len;
        }
        if (!current.empty())
            out.push_back(join(current));
    }

    static Span join(const std::deque<Span>& parts)
    {
        return {parts.front().begin, parts.back().begin + parts.back().len - parts.front().begin};
    }

    const std::u32string& text_;
    std::size_t chunk_size_;
    std::size_t overlap_;
};

} // namespace

std::vector<DocumentChunk> split_recursive(std::string_view text, std::size_t chunk_size, std::size_t overlap)
{
    if (chunk_size < 1 || overlap >= chunk_size)
        throw Error(Errc::InvalidParams, "need chunk_size >= 1 and overlap < chunk_size");
    const auto u32 = utf8_to_u32(text);
    std::vector<DocumentChunk> chunks;
    for (const auto& span : Splitter(u32, chunk_size, overlap).run()) {
        DocumentChunk c;
        c.chunk_index = chunks.size();
        c.char_offset = span.begin;
        c.text = u32_to_utf8(std::u32string_view(u32).substr(span.begin, span.len));
        chunks.push_back(std::move(c));
    }
    return chunks;
}

} // namespace maestro
