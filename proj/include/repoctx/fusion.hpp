#pragma once

#include <map>
#include <string>
#include <vector>

#include "repoctx/context.hpp"
#include "repoctx/workspace.hpp"

namespace repoctx {

// Deterministic whitespace-and-punctuation token count: each identifier or
// number run is one token, each other non-space character is one token.
std::size_t count_tokens(const std::string& text);

struct TokenBudgets {
    std::size_t max_input_tokens = 4000;
    std::size_t max_symbol_tokens = 800;
    std::size_t max_similar_tokens = 1200;
    std::size_t max_behavior_tokens = 800;
    std::size_t reserved_for_file = 1200;

    std::size_t cap_for(ContextKind kind) const;
    bool valid() const;

    static TokenBudgets default_4k();
    static TokenBudgets extended_8k();  // every cap doubled
};

struct FimTemplate {
    std::string prefix_marker = "<fim_prefix>";
    std::string suffix_marker = "<fim_suffix>";
    std::string middle_marker = "<fim_middle>";
    // "psm": prefix, suffix, middle; "spm": suffix, prefix, middle.
    std::string style = "psm";
};

struct FimSegment {
    std::string label;
    std::string text;
};

struct FimPrompt {
    std::string text;
    std::vector<FimSegment> segments;
    bool truncated = false;
    bool contexts_dropped = false;
};

// Fixed kind order symbol → similar → behavior; within a kind, items are
// admitted in rank order until the kind cap or the overall context budget
// would be exceeded. No re-ranking across kinds.
std::vector<RetrievedContext> fuse(const std::vector<RetrievedContext>& symbol_ctx,
                                   const std::vector<RetrievedContext>& similar_ctx,
                                   const std::vector<RetrievedContext>& behavior_ctx,
                                   const TokenBudgets& budgets);

// Renders contexts as comment blocks ahead of the file prefix, then lays
// out the fill-in-the-middle markers. Truncation keeps the prefix tail and
// the suffix head; if prefix+suffix alone blow the budget the contexts are
// dropped entirely.
FimPrompt render_fim(const CompletionRequest& request,
                     const std::vector<RetrievedContext>& fused, const TokenBudgets& budgets,
                     const FimTemplate& tmpl = {});

}  // namespace repoctx
