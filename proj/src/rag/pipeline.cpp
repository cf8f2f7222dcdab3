// SPDX-License-Identifier: Apache-2.0
#include "maestro/rag/pipeline.hpp"

#include "maestro/error.hpp"

#include <algorithm>

namespace maestro {

RagPipeline::RagPipeline(std::shared_ptr<Embedder> embedder, RagConfig config)
    : embedder_(embedder ? std::move(embedder) : std::make_shared<LetterFrequencyEmbedder>()),
      config_(config),
      index_(embedder_->dim())
{
    if (config_.chunk_size < 1 || config_.overlap >= config_.chunk_size || config_.top_k < 1)
        throw Error(Errc::InvalidParams, "bad rag config");
}

IngestResult RagPipeline::ingest_document(std::string_view source_bytes, std::string_view media_type,
                                          Config metadata)
{
    const auto base = media_type.substr(0, media_type.find(';'));
    if (base != "text/plain" && base != "text/markdown")
        throw Error(Errc::UnsupportedMediaType, std::string(media_type));
    if (!is_valid_utf8(source_bytes))
        throw Error(Errc::DecodeError, "document is not valid UTF-8");

    IngestResult result;
    result.doc_id = sha256_hex(source_bytes);
    auto chunks = split_recursive(source_bytes, config_.chunk_size, config_.overlap);
    std::vector<DocumentChunk> kept;
    for (auto& c : chunks) {
        // Whitespace-only spans cannot be embedded; they carry no content to retrieve.
        if (c.text.find_first_not_of(" \t\r\n\f\v") == std::string::npos)
            continue;
        c.embedding = embedder_->embed(c.text);
        c.metadata = metadata;
        c.chunk_index = kept.size();
        kept.push_back(std::move(c));
    }
    result.chunks = kept.size();
    index_.upsert_document(result.doc_id, std::move(kept));
    return result;
}

Retrieval RagPipeline::retrieve(std::string_view query) const
{
    return retrieve(query, config_.threshold, config_.top_k);
}

Retrieval RagPipeline::retrieve(std::string_view query, double threshold, std::size_t top_k) const
{
    Retrieval r;
    const auto q = embedder_->embed(query);
    std::size_t k = top_k;
    auto hits = index_.search_top_k(q, k);
    const auto strong = std::count_if(hits.begin(), hits.end(),
                                      [&](const SearchHit& h) { return h.score > threshold / 2; });
    if (strong < 2 && k < config_.max_k) {
        k = std::min(k * 2, config_.max_k);
        hits = index_.search_top_k(q, k);
    }
    r.k_used = k;
    for (const auto& h : hits)
        r.top_score = std::max(r.top_score, h.score);
    r.hits = rerank(std::move(hits), query);
    return r;
}

RagAnswer RagPipeline::answer_with_fallback(std::string_view query, const RagGenerator& generate,
                                            const std::optional<WebSearchTool>& web) const
{
    auto r = retrieve(query);
    RagAnswer answer;
    answer.top_score = r.top_score;
    if (passes_gate(r)) {
        answer.source = AnswerSource::Rag;
        answer.text = generate(query, r.hits);
        answer.hits = std::move(r.hits);
        return answer;
    }
    if (!web || !web->search)
        throw Error(Errc::NoWebTool, "relevance gate failed and no web search tool is registered");
    answer.source = AnswerSource::Web;
    answer.citation = web->name;
    answer.text = web->search(query);
    return answer;
}

std::string format_hits(const std::vector<SearchHit>& hits)
{
    std::string out;
    for (const auto& h : hits) {
        if (!out.empty())
            out += "\n\n";
        out += "[" + std::to_string(h.rank) + "] " + h.chunk->text;
    }
    return out;
}

} // namespace maestro
