// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/core/digest.hpp"
#include "maestro/core/message.hpp"
#include "maestro/rag/embedder.hpp"
#include "maestro/rag/vector_index.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace maestro {

struct RagConfig {
    std::size_t chunk_size = kDefaultChunkSize;
    std::size_t overlap = kDefaultChunkOverlap;
    std::size_t top_k = 4;
    std::size_t max_k = 8;
    double threshold = 0.35; // cosine gate
};

struct IngestResult {
    std::string doc_id; // SHA-256 of the source bytes
    std::size_t chunks = 0;
};

struct Retrieval {
    std::vector<SearchHit> hits; // reranked
    double top_score = -1.0;     // best cosine; -1 when nothing was retrieved
    std::size_t k_used = 0;
};

struct RagAnswer {
    std::string text;
    AnswerSource source = AnswerSource::Web;
    std::vector<SearchHit> hits; // supporting hits when source is Rag
    std::string citation;        // web tool name when source is Web
    double top_score = -1.0;
};

/// Generation stage: answer the query from the given hits.
using RagGenerator = std::function<std::string(std::string_view query, const std::vector<SearchHit>& hits)>;

struct WebSearchTool {
    std::string name;
    std::function<std::string(std::string_view query)> search;
};

class RagPipeline {
public:
    RagPipeline(std::shared_ptr<Embedder> embedder, RagConfig config = {});

    /// text/plain and text/markdown only. Re-ingesting identical bytes replaces the same doc_id.
    IngestResult ingest_document(std::string_view source_bytes, std::string_view media_type, Config metadata = {});

    /// Embed, search top-k (doubling k once when fewer than two hits clear tau/2), rerank.
    Retrieval retrieve(std::string_view query) const;
    Retrieval retrieve(std::string_view query, double threshold, std::size_t top_k) const;

    bool passes_gate(const Retrieval& r) const { return r.top_score >= config_.threshold; }

    /// Generates from hits when the gate passes, else calls the web tool exactly once.
    RagAnswer answer_with_fallback(std::string_view query, const RagGenerator& generate,
                                   const std::optional<WebSearchTool>& web) const;

    const RagConfig& config() const { return config_; }
    const VectorIndex& index() const { return index_; }
    const Embedder& embedder() const { return *embedder_; }

private:
    std::shared_ptr<Embedder> embedder_;
    RagConfig config_;
    VectorIndex index_;
};

/// Formats hits for a generation prompt, one "[rank] text" block per hit.
std::string format_hits(const std::vector<SearchHit>& hits);

} // namespace maestro
