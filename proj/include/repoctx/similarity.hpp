#pragma once

#include <vector>

#include "repoctx/context.hpp"
#include "repoctx/index_cache.hpp"
#include "repoctx/tokenize.hpp"
#include "repoctx/workspace.hpp"

namespace repoctx {

struct SimilarityConfig {
    TokenStrategy strategy = TokenStrategy::Cut;
    int window_lines = 30;
    int window_stride = 15;
    int top_k = 2;
    double jaccard_threshold = 0.1;
    int query_context_lines = 30;

    // window 60 / top 4 profile for 8k-token prompts
    static SimilarityConfig extended_8k();
};

// Token features of the code near the cursor: the last
// `query_context_lines` lines of the prefix.
TokenSet query_features(const CompletionRequest& request, const SimilarityConfig& cfg);

// Jaccard-ranked snippets from the inverted index: threshold-filtered,
// cursor-region self-matches excluded, overlapping same-file snippets
// deduplicated keeping the higher score, top_k returned.
std::vector<RetrievedContext> query_similar(const SnippetIndex& index,
                                            const CompletionRequest& request,
                                            const SimilarityConfig& cfg);

}  // namespace repoctx
