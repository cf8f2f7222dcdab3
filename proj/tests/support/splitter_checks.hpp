// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/digest.hpp"
#include "maestro/rag/splitter.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace maestro::test {

// Checks the structural properties every split must have; returns a failure message or "".
inline std::string check_properties(const std::string& text, std::size_t size, std::size_t overlap,
                             const std::vector<DocumentChunk>& chunks)
{
    const auto u = utf8_to_u32(text);
    if (u.empty())
        return chunks.empty() ? "" : "chunks from empty text";
    if (chunks.empty())
        return "no chunks";
    std::size_t covered = 0;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        const auto& c = chunks[i];
        const auto cu = utf8_to_u32(c.text);
        if (c.chunk_index != i)
            return "chunk_index " + std::to_string(c.chunk_index) + " at " + std::to_string(i);
        if (cu.empty())
            return "empty chunk at " + std::to_string(i);
        if (cu.size() > size)
            return "chunk " + std::to_string(i) + " has " + std::to_string(cu.size()) + " > " + std::to_string(size);
        if (u.compare(c.char_offset, cu.size(), cu) != 0)
            return "chunk " + std::to_string(i) + " is not the input span at its offset";
        if (i > 0 && c.char_offset <= chunks[i - 1].char_offset)
            return "offset not increasing at " + std::to_string(i);
        if (c.char_offset > covered)
            return "gap before chunk " + std::to_string(i);
        covered = std::max(covered, c.char_offset + cu.size());
    }
    if (chunks.front().char_offset != 0)
        return "first chunk does not start at 0";
    if (covered != u.size())
        return "tail not covered";
    (void)overlap;
    return "";
}

inline std::string random_text(std::mt19937_64& rng, std::size_t max_len)
{
    static const std::vector<std::string> alphabet = {
        "a", "b", "c", "d", "e", "f", "g", "h", "i", "o", "u", "s", "t", "A", "Z", "0", "7", ".", ",",
        " ", " ", " ", " ", " ", "\n", "\n", "\n\n", "\xc3\xa9", "\xe2\x82\xac", "\xf0\x9f\x99\x82"};
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    const auto target = len_dist(rng);
    std::string out;
    std::size_t cps = 0;
    while (cps < target) {
        const auto& s = alphabet[pick(rng)];
        cps += utf8_to_u32(s).size();
        if (cps > target)
            break;
        out += s;
    }
    return out;
}

} // namespace maestro::test
