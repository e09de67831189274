#include "repoctx/similarity.hpp"

#include <algorithm>

#include "repoctx/fusion.hpp"

namespace repoctx {

SimilarityConfig SimilarityConfig::extended_8k() {
    SimilarityConfig cfg;
    cfg.window_lines = 60;
    cfg.window_stride = 30;
    cfg.top_k = 4;
    cfg.query_context_lines = 60;
    return cfg;
}

TokenSet query_features(const CompletionRequest& request, const SimilarityConfig& cfg) {
    auto lines = split_lines(request.prefix);
    std::size_t take = std::min<std::size_t>(lines.size(),
                                             static_cast<std::size_t>(cfg.query_context_lines));
    std::string text;
    for (std::size_t i = lines.size() - take; i < lines.size(); ++i) {
        text += lines[i];
        text += '\n';
    }
    return tokenize(text, cfg.strategy, request.language);
}

std::vector<RetrievedContext> query_similar(const SnippetIndex& index,
                                            const CompletionRequest& request,
                                            const SimilarityConfig& cfg) {
    TokenSet query = query_features(request, cfg);
    if (query.empty()) return {};

    // score everything with light records first; snippet bodies are copied
    // only for the winners in a second pass
    struct Cand {
        SnippetId id;
        double score;
        std::string path;
        int start;
        int end;
    };
    std::vector<Cand> scored;
    int exclude_lo = request.cursor.line - cfg.window_lines;
    int exclude_hi = request.cursor.line + cfg.window_lines;
    index.for_each_candidate(query, [&](SnippetId id, const Snippet& snip,
                                        const TokenSet& tokens) {
        double score = jaccard(query, tokens);
        if (score < cfg.jaccard_threshold) return;
        // never hand back the hole itself
        if (snip.path == request.path && snip.start_line <= exclude_hi &&
            exclude_lo <= snip.end_line)
            return;
        scored.push_back({id, score, snip.path, snip.start_line, snip.end_line});
    });

    std::sort(scored.begin(), scored.end(), [](const Cand& a, const Cand& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.path != b.path) return a.path < b.path;
        return a.start < b.start;
    });

    std::vector<RetrievedContext> out;
    std::vector<const Cand*> accepted;
    for (const auto& cand : scored) {
        if (static_cast<int>(out.size()) == cfg.top_k) break;
        bool overlaps = std::any_of(accepted.begin(), accepted.end(), [&](const Cand* a) {
            return a->path == cand.path && a->start <= cand.end && cand.start <= a->end;
        });
        if (overlaps) continue;
        accepted.push_back(&cand);
        RetrievedContext ctx;
        ctx.kind = ContextKind::Similar;
        ctx.score = cand.score;
        ctx.source_path = cand.path;
        ctx.source_start_line = cand.start;
        ctx.source_end_line = cand.end;
        out.push_back(std::move(ctx));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        index.with_snippet(accepted[i]->id, [&](const Snippet& snip, const TokenSet&) {
            out[i].content = snip.content;
            out[i].token_estimate = count_tokens(out[i].content);
        });
    }
    return out;
}

}  // namespace repoctx
