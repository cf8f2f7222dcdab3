// SPDX-License-Identifier: Apache-2.0
#include "maestro/error.hpp"
#include "maestro/rag/embedder.hpp"
#include "maestro/rag/pipeline.hpp"
#include "maestro/rag/vector_index.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace maestro;
using maestro::test::data_path;
using maestro::test::slurp;

namespace {

double oracle_cosine(const std::vector<double>& a, const std::vector<double>& b)
{
    long double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<long double>(a[i]) * b[i];
        na += static_cast<long double>(a[i]) * a[i];
        nb += static_cast<long double>(b[i]) * b[i];
    }
    if (na == 0 || nb == 0)
        return 0.0;
    return static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

RagConfig dress_store_config()
{
    RagConfig c;
    c.chunk_size = 120;
    c.overlap = 20;
    c.top_k = 4;
    return c;
}

} // namespace

TEST(Embedder, HandCheckedVector)
{
    LetterFrequencyEmbedder e;
    auto v = e.embed("abab");
    ASSERT_EQ(v.size(), 26u);
    EXPECT_NEAR(v[0], 0.70710678, 1e-6);
    EXPECT_NEAR(v[1], 0.70710678, 1e-6);
    for (std::size_t i = 2; i < v.size(); ++i)
        EXPECT_EQ(v[i], 0.0);
    EXPECT_EQ(e.embed("ABab"), v);
}

TEST(Embedder, BlankTextAndZeroVector)
{
    LetterFrequencyEmbedder e;
    EXPECT_THROW(e.embed("   \n"), Error);
    auto digits = e.embed("12345");
    EXPECT_EQ(cosine(digits, e.embed("abc")), 0.0);
    EXPECT_THROW(cosine({1.0}, {1.0, 2.0}), Error);
}

TEST(VectorIndex, MatchesExhaustiveScanOracle)
{
    constexpr std::size_t kDim = 26;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_vec = [&] {
        std::vector<double> v(kDim);
        for (auto& x : v)
            x = gauss(rng);
        return v;
    };

    VectorIndex index(kDim);
    std::vector<std::vector<double>> all;
    for (int d = 0; d < 100; ++d) {
        std::vector<DocumentChunk> chunks;
        for (int c = 0; c < 100; ++c) {
            DocumentChunk ch;
            ch.doc_id = "doc" + std::to_string(d);
            ch.chunk_index = c;
            ch.text = ch.doc_id + "/" + std::to_string(c);
            ch.embedding = random_vec();
            all.push_back(*ch.embedding);
            chunks.push_back(std::move(ch));
        }
        index.upsert_document("doc" + std::to_string(d), std::move(chunks));
    }
    ASSERT_EQ(index.size(), 10'000u);

    std::uniform_int_distribution<std::size_t> k_dist(1, 20);
    for (int q = 0; q < 100; ++q) {
        const auto query = random_vec();
        const auto k = k_dist(rng);
        std::vector<std::size_t> order(all.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> scores(all.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            scores[i] = oracle_cosine(query, all[i]);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

        auto hits = index.search_top_k(query, k);
        ASSERT_EQ(hits.size(), k);
        for (std::size_t i = 0; i < k; ++i) {
            const auto want = order[i];
            const auto want_text = "doc" + std::to_string(want / 100) + "/" + std::to_string(want % 100);
            EXPECT_EQ(hits[i].chunk->text, want_text) << "query " << q << " rank " << i;
            EXPECT_NEAR(hits[i].score, scores[want], 1e-9);
            EXPECT_EQ(hits[i].rank, i + 1);
        }
    }
}

TEST(VectorIndex, ErrorsAndReplacement)
{
    VectorIndex index(3);
    DocumentChunk c;
    c.doc_id = "d";
    c.text = "x";
    c.embedding = std::vector<double> {1, 0, 0};
    index.upsert_document("d", {c, c});
    EXPECT_EQ(index.size(), 2u);
    index.upsert_document("d", {c});
    EXPECT_EQ(index.size(), 1u);
    EXPECT_EQ(index.document_count(), 1u);
    EXPECT_THROW(index.search_top_k({1, 0, 0}, 0), Error);
    EXPECT_THROW(index.search_top_k({1, 0}, 1), Error);
    EXPECT_EQ(index.search_top_k({1, 0, 0}, 10).size(), 1u);
}

TEST(Rerank, BlendsCosineAndTermOverlap)
{
    auto chunk = [](std::string text) {
        auto c = std::make_shared<DocumentChunk>();
        c->text = std::move(text);
        return c;
    };
    std::vector<SearchHit> hits(3);
    hits[0] = {chunk("nothing relevant"), 0.90, 0.90, 1};
    hits[1] = {chunk("Men's dress code: shirts"), 0.80, 0.80, 2};
    hits[2] = {chunk("dress"), 0.85, 0.85, 3};
    auto out = rerank(hits, "men's dress code");
    // 0.7 * cosine + 0.3 * found/terms, computed by hand.
    EXPECT_EQ(out[0].chunk->text, "Men's dress code: shirts");
    EXPECT_NEAR(out[0].rerank_score, 0.7 * 0.80 + 0.3 * 1.0, 1e-12);
    EXPECT_EQ(out[1].chunk->text, "dress");
    EXPECT_NEAR(out[1].rerank_score, 0.7 * 0.85 + 0.3 / 3.0, 1e-12);
    EXPECT_NEAR(out[2].rerank_score, 0.7 * 0.90, 1e-12);
    EXPECT_EQ(out[2].rank, 3u);
    EXPECT_DOUBLE_EQ(term_overlap("", "abc"), 0.0);
}

TEST(RagPipeline, IngestIsIdempotent)
{
    RagPipeline p(std::make_shared<LetterFrequencyEmbedder>(), dress_store_config());
    const auto doc = slurp(data_path("docs/dress_code.txt"));
    auto a = p.ingest_document(doc, "text/plain");
    auto b = p.ingest_document(doc, "text/plain");
    EXPECT_EQ(a.doc_id, b.doc_id);
    EXPECT_EQ(a.doc_id, sha256_hex(std::string_view(doc)));
    EXPECT_EQ(a.chunks, b.chunks);
    EXPECT_EQ(p.index().size(), a.chunks);
    EXPECT_EQ(p.index().document_count(), 1u);
}

TEST(RagPipeline, RejectsUnsupportedAndUndecodable)
{
    RagPipeline p(std::make_shared<LetterFrequencyEmbedder>());
    try {
        p.ingest_document("%PDF-1.7", "application/pdf");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnsupportedMediaType);
    }
    try {
        p.ingest_document("bad \xff\xfe bytes", "text/plain");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DecodeError);
    }
    EXPECT_NO_THROW(p.ingest_document("# title\n\nbody", "text/markdown; charset=utf-8"));
}

TEST(RagPipeline, GateSeparatesDressAndPopulationQueries)
{
    auto config = dress_store_config();
    config.threshold = 0.85;
    RagPipeline p(std::make_shared<LetterFrequencyEmbedder>(), config);
    p.ingest_document(slurp(data_path("docs/dress_code.txt")), "text/plain");
    auto dress = p.retrieve("What is the men's dress code?");
    auto population = p.retrieve("What is the population of South Korea in 2024?");
    EXPECT_GE(dress.top_score, 0.85);
    EXPECT_TRUE(p.passes_gate(dress));
    EXPECT_LT(population.top_score, 0.85);
    EXPECT_FALSE(p.passes_gate(population));
}

TEST(RagPipeline, DynamicKDoublesOnceOnWeakHits)
{
    RagConfig config;
    config.chunk_size = 20;
    config.overlap = 0;
    config.top_k = 2;
    config.max_k = 8;
    config.threshold = 1.9; // tau/2 = 0.95: nearly nothing is strong
    RagPipeline p(std::make_shared<LetterFrequencyEmbedder>(), config);
    p.ingest_document("alpha beta gamma delta epsilon zeta eta theta iota kappa lambda mu", "text/plain");
    auto weak = p.retrieve("zzz qqq");
    EXPECT_EQ(weak.k_used, 4u);
    EXPECT_EQ(weak.hits.size(), std::min<std::size_t>(4, p.index().size()));

    config.threshold = 0.0;
    RagPipeline q(std::make_shared<LetterFrequencyEmbedder>(), config);
    q.ingest_document("alpha beta gamma delta epsilon zeta eta theta iota kappa lambda mu", "text/plain");
    EXPECT_EQ(q.retrieve("alpha").k_used, 2u);
}

TEST(RagPipeline, FallbackCallsWebExactlyOnce)
{
    auto config = dress_store_config();
    config.threshold = 0.85;
    RagPipeline p(std::make_shared<LetterFrequencyEmbedder>(), config);
    p.ingest_document(slurp(data_path("docs/dress_code.txt")), "text/plain");

    int web_calls = 0, gen_calls = 0;
    WebSearchTool web {"google-custom-search", [&](std::string_view) {
                           ++web_calls;
                           return std::string("about 51.75 million");
                       }};
    RagGenerator gen = [&](std::string_view, const std::vector<SearchHit>& hits) {
        ++gen_calls;
        return format_hits(hits);
    };

    auto rag = p.answer_with_fallback("What is the men's dress code?", gen, web);
    EXPECT_EQ(rag.source, AnswerSource::Rag);
    EXPECT_FALSE(rag.hits.empty());
    EXPECT_EQ(web_calls, 0);

    auto webbed = p.answer_with_fallback("What is the population of South Korea in 2024?", gen, web);
    EXPECT_EQ(webbed.source, AnswerSource::Web);
    EXPECT_EQ(webbed.citation, "google-custom-search");
    EXPECT_EQ(web_calls, 1);
    EXPECT_EQ(gen_calls, 1);

    try {
        p.answer_with_fallback("What is the population of South Korea in 2024?", gen, std::nullopt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NoWebTool);
    }
}
