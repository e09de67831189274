#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "repoctx/similarity.hpp"
#include "test_support.hpp"

using namespace repoctx;

namespace {

// Brute-force oracle recomputed from scratch: Jaccard of the query token
// set against every stored snippet via a full linear scan, no inverted
// index involved.
std::set<std::string> set_of(const TokenSet& t) { return {t.tokens.begin(), t.tokens.end()}; }

double oracle_jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& t : a) inter += b.count(t);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

struct OracleHit {
    Snippet snippet;
    double score = 0.0;
};

std::vector<OracleHit> oracle(const SnippetIndex& index, const CompletionRequest& request,
                              const SimilarityConfig& cfg) {
    auto query = set_of(query_features(request, cfg));
    if (query.empty()) return {};
    std::vector<OracleHit> scored;
    index.for_each_snippet([&](SnippetId, const Snippet& snip, const TokenSet& tokens) {
        double score = oracle_jaccard(query, set_of(tokens));
        if (score < cfg.jaccard_threshold) return;
        if (snip.path == request.path &&
            snip.start_line <= request.cursor.line + cfg.window_lines &&
            request.cursor.line - cfg.window_lines <= snip.end_line)
            return;
        scored.push_back({snip, score});
    });
    std::sort(scored.begin(), scored.end(), [](const OracleHit& a, const OracleHit& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.snippet.path != b.snippet.path) return a.snippet.path < b.snippet.path;
        return a.snippet.start_line < b.snippet.start_line;
    });
    std::vector<OracleHit> out;
    for (const auto& hit : scored) {
        if (static_cast<int>(out.size()) == cfg.top_k) break;
        bool overlaps = std::any_of(out.begin(), out.end(), [&](const OracleHit& a) {
            return a.snippet.path == hit.snippet.path &&
                   a.snippet.start_line <= hit.snippet.end_line &&
                   hit.snippet.start_line <= a.snippet.end_line;
        });
        if (!overlaps) out.push_back(hit);
    }
    return out;
}

void build_index(SnippetIndex& index, const RepoSnapshot& snapshot) {
    index.build_full(snapshot, sort_candidate_files(snapshot, ""));
}

}  // namespace

TEST_CASE("query features tokenize only the tail of the prefix") {
    CompletionRequest request;
    request.language = LanguageId::Go;
    request.prefix = "zebraToken\n";
    for (int i = 0; i < 40; ++i) request.prefix += "fillerLine\n";
    request.prefix += "getUserCreditInfo(";
    SimilarityConfig cfg;
    auto features = set_of(query_features(request, cfg));
    CHECK(features.count("credit") == 1);
    CHECK(features.count("filler") == 1);
    CHECK(features.count("zebra") == 0);  // beyond the 30-line window
}

TEST_CASE("a near-duplicate function is found") {
    RepoSnapshot snapshot("/mem");
    snapshot.apply_file_change("user.go",
                               "func getUserBasicInfo(id int) User {\n"
                               "    record := loadUser(id)\n"
                               "    return record.Basic()\n"
                               "}\n");
    snapshot.apply_file_change("other.go", "func unrelatedThing() {}\n");
    SnippetIndex index;
    build_index(index, snapshot);
    CompletionRequest request;
    request.path = "credit.go";
    request.language = LanguageId::Go;
    request.prefix = "func getUserCreditInfo(id int) Credit {\n    record := loadUser(id)\n";
    request.cursor.line = 3;
    auto out = query_similar(index, request, SimilarityConfig{});
    REQUIRE_FALSE(out.empty());
    CHECK(out[0].source_path == "user.go");
    CHECK(out[0].kind == ContextKind::Similar);
    CHECK(out[0].score > 0.1);
}

TEST_CASE("the cursor region of the request file is never returned") {
    RepoSnapshot snapshot("/mem");
    std::string content;
    for (int i = 0; i < 40; ++i) content += "alpha beta gamma\n";
    snapshot.apply_file_change("self.go", content);
    SnippetIndex index;
    build_index(index, snapshot);
    CompletionRequest request;
    request.path = "self.go";
    request.language = LanguageId::Go;
    request.prefix = "alpha beta gamma\n";
    request.cursor.line = 20;
    SimilarityConfig cfg;
    for (const auto& ctx : query_similar(index, request, cfg)) {
        bool in_exclusion = ctx.source_path == "self.go" &&
                            ctx.source_start_line <= request.cursor.line + cfg.window_lines &&
                            request.cursor.line - cfg.window_lines <= ctx.source_end_line;
        CHECK_FALSE(in_exclusion);
    }
}

TEST_CASE("empty prefix or empty index yields nothing") {
    RepoSnapshot snapshot("/mem");
    snapshot.apply_file_change("a.go", "alpha\n");
    SnippetIndex index;
    build_index(index, snapshot);
    CompletionRequest request;
    request.path = "b.go";
    request.language = LanguageId::Go;
    CHECK(query_similar(index, request, SimilarityConfig{}).empty());
    request.prefix = "alpha\n";
    CHECK_FALSE(query_similar(index, request, SimilarityConfig{}).empty());
    SnippetIndex empty;
    CHECK(query_similar(empty, request, SimilarityConfig{}).empty());
}

TEST_CASE("threshold filters weak matches") {
    RepoSnapshot snapshot("/mem");
    snapshot.apply_file_change("weak.go", "one two three four five six seven eight nine ten\n");
    SnippetIndex index;
    build_index(index, snapshot);
    CompletionRequest request;
    request.path = "q.go";
    request.language = LanguageId::Go;
    request.prefix = "one zz1 zz2 zz3 zz4 zz5 zz6 zz7 zz8 zz9\n";  // jaccard 1/19
    SimilarityConfig cfg;
    CHECK(query_similar(index, request, cfg).empty());
    cfg.jaccard_threshold = 0.05;
    CHECK_FALSE(query_similar(index, request, cfg).empty());
}

TEST_CASE("retrieval matches the linear-scan oracle on random corpora") {
    std::mt19937_64 rng(4242);
    for (int round = 0; round < 60; ++round) {
        RepoSnapshot snapshot = testing::random_snapshot(rng, 15, 60);
        SnippetIndex index;
    build_index(index, snapshot);
        std::vector<std::string> paths;
        for (const auto& [p, r] : snapshot.files()) paths.push_back(p);

        SimilarityConfig cfg;
        cfg.top_k = 1 + static_cast<int>(rng() % 4);
        cfg.jaccard_threshold = (rng() % 2) ? 0.1 : 0.3;

        CompletionRequest request;
        request.path = paths[rng() % paths.size()];
        request.language = LanguageId::Go;
        int prefix_lines = 1 + static_cast<int>(rng() % 10);
        for (int i = 0; i < prefix_lines; ++i) request.prefix += testing::random_line(rng);
        request.cursor.line = prefix_lines;

        auto actual = query_similar(index, request, cfg);
        auto expected = oracle(index, request, cfg);
        REQUIRE(actual.size() == expected.size());
        for (std::size_t i = 0; i < actual.size(); ++i) {
            CHECK(actual[i].source_path == expected[i].snippet.path);
            CHECK(actual[i].source_start_line == expected[i].snippet.start_line);
            CHECK(actual[i].source_end_line == expected[i].snippet.end_line);
            CHECK(actual[i].score == doctest::Approx(expected[i].score));
            CHECK(actual[i].score >= cfg.jaccard_threshold);
        }
        for (std::size_t i = 1; i < actual.size(); ++i)
            CHECK(actual[i - 1].score >= actual[i].score);
    }
}
