// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/workflow/workflow.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maestro {

using EmbeddingVector = std::vector<double>;

struct DocumentChunk {
    std::string doc_id;
    std::size_t chunk_index = 0;
    std::string text;
    std::size_t char_offset = 0; // in code points
    std::optional<EmbeddingVector> embedding;
    Config metadata;
};

inline constexpr std::size_t kDefaultChunkSize = 1000;
inline constexpr std::size_t kDefaultChunkOverlap = 200;

/// Recursive character splitter over the separators "\n\n", "\n", " ", "".
/// Lengths are counted in code points. Separators stay attached to the end of
/// the piece they follow, so chunks are exact spans of the input and nothing
/// is stripped. Throws InvalidParams unless chunk_size >= 1 and overlap < chunk_size.
std::vector<DocumentChunk> split_recursive(std::string_view text, std::size_t chunk_size = kDefaultChunkSize,
                                           std::size_t overlap = kDefaultChunkOverlap);

} // namespace maestro
