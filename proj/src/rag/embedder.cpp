// SPDX-License-Identifier: Apache-2.0
#include "maestro/rag/embedder.hpp"

#include "maestro/error.hpp"

#include <cmath>

namespace maestro {

EmbeddingVector LetterFrequencyEmbedder::embed(std::string_view text) const
{
    if (text.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos)
        throw Error(Errc::EmptyText, "nothing to embed");
    EmbeddingVector v(26, 0.0);
    for (unsigned char c : text) {
        if (c >= 'A' && c <= 'Z')
            c = static_cast<unsigned char>(c - 'A' + 'a');
        if (c >= 'a' && c <= 'z')
            v[c - 'a'] += 1.0;
    }
    double norm = 0.0;
    for (double x : v)
        norm += x * x;
    if (norm == 0.0)
        return v;
    norm = std::sqrt(norm);
    for (double& x : v)
        x /= norm;
    return v;
}

std::shared_ptr<Embedder> make_embedder(std::string_view name)
{
    if (name.empty() || name == "mock" || name == "mock-letter-frequency")
        return std::make_shared<LetterFrequencyEmbedder>();
    throw Error(Errc::UnknownBinding, "embedder " + std::string(name));
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b)
{
    if (a.size() != b.size())
        throw Error(Errc::DimMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace maestro
