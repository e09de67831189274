#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "repoctx/workspace.hpp"

namespace repoctx {

enum class TokenStrategy { Origin, Cut };

// Deduplicated tokens kept sorted so set operations are linear merges.
struct TokenSet {
    std::vector<std::string> tokens;
    TokenStrategy strategy = TokenStrategy::Cut;

    bool empty() const { return tokens.empty(); }
    std::size_t size() const { return tokens.size(); }
    bool contains(const std::string& t) const {
        return std::binary_search(tokens.begin(), tokens.end(), t);
    }
    void insert(std::string t) {
        auto it = std::lower_bound(tokens.begin(), tokens.end(), t);
        if (it == tokens.end() || *it != t) tokens.insert(it, std::move(t));
    }
};

// Identifier-like tokens ([A-Za-z_][A-Za-z0-9_]*), lowercased, deduplicated.
TokenSet tokenize_origin(const std::string& text);

// Origin tokens split on '_' and camel-case boundaries, then filtered
// against the language's keywords and an English stop-word list.
TokenSet tokenize_cut(const std::string& text, LanguageId lang = LanguageId::Unknown);

TokenSet tokenize(const std::string& text, TokenStrategy strategy,
                  LanguageId lang = LanguageId::Unknown);

// Sub-token split of one identifier on underscores and case transitions,
// lowercased; no stop-word filtering.
std::vector<std::string> split_identifier(const std::string& ident);

bool is_stop_word(const std::string& token, LanguageId lang);

// |a ∩ b| / |a ∪ b|; 0 when both sets are empty.
double jaccard(const TokenSet& a, const TokenSet& b);

}  // namespace repoctx
