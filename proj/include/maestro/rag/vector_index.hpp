// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/rag/splitter.hpp"

#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

namespace maestro {

struct SearchHit {
    std::shared_ptr<const DocumentChunk> chunk;
    double score = 0.0;        // cosine(query, chunk)
    double rerank_score = 0.0; // equals score until reranked
    std::size_t rank = 0;      // 1-based
};

/// Exhaustive-scan in-memory index. Every chunk must carry an embedding of dim().
class VectorIndex {
public:
    explicit VectorIndex(std::size_t dim);

    std::size_t dim() const { return dim_; }

    /// Replaces all chunks of doc_id.
    void upsert_document(const std::string& doc_id, std::vector<DocumentChunk> chunks);
    bool has_document(const std::string& doc_id) const;

    /// k highest cosines, ties by insertion order. Throws InvalidParams (k < 1), DimMismatch.
    std::vector<SearchHit> search_top_k(const EmbeddingVector& query, std::size_t k) const;

    std::size_t size() const;
    std::size_t document_count() const;

    /// Line-delimited JSON {doc_id, chunk_index, char_offset, text, embedding}.
    std::string export_jsonl() const;

private:
    std::size_t dim_;
    mutable std::shared_mutex mutex_;
    std::vector<std::shared_ptr<const DocumentChunk>> chunks_; // insertion order
};

/// 0.7 * cosine + 0.3 * fraction of whitespace-separated query terms (case-folded)
/// found in the chunk text. Stable sort, ranks rewritten 1..n.
std::vector<SearchHit> rerank(std::vector<SearchHit> hits, std::string_view query_text);

double term_overlap(std::string_view query_text, std::string_view chunk_text);

} // namespace maestro
