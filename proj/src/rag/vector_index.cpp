// SPDX-License-Identifier: Apache-2.0
#include "maestro/rag/vector_index.hpp"

#include "maestro/error.hpp"
#include "maestro/rag/embedder.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

namespace maestro {

VectorIndex::VectorIndex(std::size_t dim) : dim_(dim)
{
    if (dim == 0)
        throw Error(Errc::InvalidParams, "index dim must be positive");
}

void VectorIndex::upsert_document(const std::string& doc_id, std::vector<DocumentChunk> chunks)
{
    for (const auto& c : chunks) {
        if (!c.embedding)
            throw Error(Errc::InvalidParams, "chunk without embedding");
        if (c.embedding->size() != dim_)
            throw Error(Errc::DimMismatch, "chunk dim " + std::to_string(c.embedding->size()));
    }
    std::unique_lock lock(mutex_);
    std::erase_if(chunks_, [&](const auto& c) { return c->doc_id == doc_id; });
    for (auto& c : chunks) {
        c.doc_id = doc_id;
        chunks_.push_back(std::make_shared<const DocumentChunk>(std::move(c)));
    }
}

bool VectorIndex::has_document(const std::string& doc_id) const
{
    std::shared_lock lock(mutex_);
    return std::any_of(chunks_.begin(), chunks_.end(), [&](const auto& c) { return c->doc_id == doc_id; });
}

std::vector<SearchHit> VectorIndex::search_top_k(const EmbeddingVector& query, std::size_t k) const
{
    if (k < 1)
        throw Error(Errc::InvalidParams, "k must be >= 1");
    if (query.size() != dim_)
        throw Error(Errc::DimMismatch, "query dim " + std::to_string(query.size()));

    std::shared_lock lock(mutex_);
    std::vector<double> scores(chunks_.size());
    for (std::size_t i = 0; i < chunks_.size(); ++i)
        scores[i] = cosine(query, *chunks_[i]->embedding);

    std::vector<std::size_t> order(chunks_.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t n = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b])
                              return scores[a] > scores[b];
                          return a < b;
                      });

    std::vector<SearchHit> hits;
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = order[i];
        hits.push_back({chunks_[idx], scores[idx], scores[idx], i + 1});
    }
    return hits;
}

std::size_t VectorIndex::size() const
{
    std::shared_lock lock(mutex_);
    return chunks_.size();
}

std::size_t VectorIndex::document_count() const
{
    std::shared_lock lock(mutex_);
    std::vector<std::string> ids;
    for (const auto& c : chunks_)
        if (std::find(ids.begin(), ids.end(), c->doc_id) == ids.end())
            ids.push_back(c->doc_id);
    return ids.size();
}

std::string VectorIndex::export_jsonl() const
{
    std::shared_lock lock(mutex_);
    std::ostringstream out;
    for (const auto& c : chunks_) {
        nlohmann::ordered_json j;
        j["doc_id"] = c->doc_id;
        j["chunk_index"] = c->chunk_index;
        j["char_offset"] = c->char_offset;
        j["text"] = c->text;
        j["embedding"] = *c->embedding;
        out << j.dump() << '\n';
    }
    return out.str();
}

namespace {

std::string fold(std::string_view s)
{
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    return out;
}

} // namespace

double term_overlap(std::string_view query_text, std::string_view chunk_text)
{
    std::istringstream in(fold(query_text));
    const auto haystack = fold(chunk_text);
    std::size_t terms = 0, found = 0;
    for (std::string term; in >> term;) {
        ++terms;
        if (haystack.find(term) != std::string::npos)
            ++found;
    }
    return terms == 0 ? 0.0 : static_cast<double>(found) / static_cast<double>(terms);
}

std::vector<SearchHit> rerank(std::vector<SearchHit> hits, std::string_view query_text)
{
    for (auto& h : hits)
        h.rerank_score = 0.7 * h.score + 0.3 * term_overlap(query_text, h.chunk->text);
    std::stable_sort(hits.begin(), hits.end(),
                     [](const SearchHit& a, const SearchHit& b) { return a.rerank_score > b.rerank_score; });
    for (std::size_t i = 0; i < hits.size(); ++i)
        hits[i].rank = i + 1;
    return hits;
}

} // namespace maestro
