// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/rag/splitter.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace maestro {

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::size_t dim() const = 0;
    virtual std::string name() const = 0;
    /// Throws EmptyText when the text is blank.
    virtual EmbeddingVector embed(std::string_view text) const = 0;
};

/// Counts of a..z (case-folded), L2-normalized. No letters gives the zero vector.
class LetterFrequencyEmbedder final : public Embedder {
public:
    std::size_t dim() const override { return 26; }
    std::string name() const override { return "mock-letter-frequency"; }
    EmbeddingVector embed(std::string_view text) const override;
};

std::shared_ptr<Embedder> make_embedder(std::string_view name);

/// Cosine similarity; 0 when either operand is the zero vector. Throws DimMismatch.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

} // namespace maestro
