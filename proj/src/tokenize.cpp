#include "repoctx/tokenize.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace repoctx {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Static copy of a common English stop-word list, kept hermetic.
const std::unordered_set<std::string>& english_stop_words() {
    static const std::unordered_set<std::string> words = {
        "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your",
        "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she",
        "her", "hers", "herself", "it", "its", "itself", "they", "them", "their",
        "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
        "these", "those", "am", "is", "are", "was", "were", "be", "been", "being",
        "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an",
        "the", "and", "but", "if", "or", "because", "as", "until", "while", "of",
        "at", "by", "for", "with", "about", "against", "between", "into",
        "through", "during", "before", "after", "above", "below", "to", "from",
        "up", "down", "in", "out", "on", "off", "over", "under", "again",
        "further", "then", "once", "here", "there", "when", "where", "why", "how",
        "all", "any", "both", "each", "few", "more", "most", "other", "some",
        "such", "no", "nor", "not", "only", "own", "same", "so", "than", "too",
        "very", "s", "t", "can", "will", "just", "don", "should", "now",
    };
    return words;
}

const std::unordered_set<std::string>& go_keywords() {
    static const std::unordered_set<std::string> words = {
        "break", "case", "chan", "const", "continue", "default", "defer", "else",
        "fallthrough", "for", "func", "go", "goto", "if", "import", "interface",
        "map", "package", "range", "return", "select", "struct", "switch", "type",
        "var", "nil", "true", "false",
    };
    return words;
}

const std::unordered_set<std::string>& python_keywords() {
    static const std::unordered_set<std::string> words = {
        "false", "none", "true", "and", "as", "assert", "async", "await", "break",
        "class", "continue", "def", "del", "elif", "else", "except", "finally",
        "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
        "not", "or", "pass", "raise", "return", "try", "while", "with", "yield",
    };
    return words;
}

const std::unordered_set<std::string>& typescript_keywords() {
    static const std::unordered_set<std::string> words = {
        "break", "case", "catch", "class", "const", "continue", "debugger",
        "default", "delete", "do", "else", "enum", "export", "extends", "false",
        "finally", "for", "function", "if", "import", "in", "instanceof", "new",
        "null", "return", "super", "switch", "this", "throw", "true", "try",
        "typeof", "var", "void", "while", "with", "as", "implements", "interface",
        "let", "package", "private", "protected", "public", "static", "yield",
        "any", "boolean", "number", "string", "symbol", "type", "from", "of",
        "async", "await", "undefined",
    };
    return words;
}

}  // namespace

bool is_stop_word(const std::string& token, LanguageId lang) {
    if (english_stop_words().count(token)) return true;
    switch (lang) {
        case LanguageId::Go: return go_keywords().count(token) > 0;
        case LanguageId::Python: return python_keywords().count(token) > 0;
        case LanguageId::TypeScript: return typescript_keywords().count(token) > 0;
        case LanguageId::Unknown:
            // No language info: filter against every supported keyword set.
            return go_keywords().count(token) > 0 || python_keywords().count(token) > 0 ||
                   typescript_keywords().count(token) > 0;
    }
    return false;
}

TokenSet tokenize_origin(const std::string& text) {
    TokenSet out;
    out.strategy = TokenStrategy::Origin;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!ident_start(text[i])) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < text.size() && ident_char(text[i])) ++i;
        out.tokens.push_back(lower(text.substr(begin, i - begin)));
    }
    std::sort(out.tokens.begin(), out.tokens.end());
    out.tokens.erase(std::unique(out.tokens.begin(), out.tokens.end()), out.tokens.end());
    return out;
}

std::vector<std::string> split_identifier(const std::string& ident) {
    std::vector<std::string> parts;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) parts.push_back(lower(current));
        current.clear();
    };
    for (std::size_t i = 0; i < ident.size(); ++i) {
        char c = ident[i];
        if (c == '_') {
            flush();
            continue;
        }
        bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
        if (upper && !current.empty()) {
            char prev = current.back();
            bool prev_upper = std::isupper(static_cast<unsigned char>(prev)) != 0;
            bool next_lower = i + 1 < ident.size() &&
                              std::islower(static_cast<unsigned char>(ident[i + 1]));
            // split at lower→Upper, and before the last upper of an
            // acronym run (HTTPServer → http, server)
            if (!prev_upper || next_lower) flush();
        }
        current += c;
    }
    flush();
    return parts;
}

TokenSet tokenize_cut(const std::string& text, LanguageId lang) {
    TokenSet out;
    out.strategy = TokenStrategy::Cut;
    std::size_t i = 0;
    // re-scan raw identifiers so camel case is still visible (origin tokens
    // are already lowercased)
    while (i < text.size()) {
        if (!ident_start(text[i])) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < text.size() && ident_char(text[i])) ++i;
        for (const auto& part : split_identifier(text.substr(begin, i - begin)))
            if (!is_stop_word(part, lang)) out.tokens.push_back(part);
    }
    std::sort(out.tokens.begin(), out.tokens.end());
    out.tokens.erase(std::unique(out.tokens.begin(), out.tokens.end()), out.tokens.end());
    return out;
}

TokenSet tokenize(const std::string& text, TokenStrategy strategy, LanguageId lang) {
    return strategy == TokenStrategy::Origin ? tokenize_origin(text) : tokenize_cut(text, lang);
}

double jaccard(const TokenSet& a, const TokenSet& b) {
    if (a.tokens.empty() && b.tokens.empty()) return 0.0;
    // both sides are sorted and deduplicated: one linear merge
    std::size_t inter = 0;
    auto ia = a.tokens.begin(), ib = b.tokens.begin();
    while (ia != a.tokens.end() && ib != b.tokens.end()) {
        int cmp = ia->compare(*ib);
        if (cmp == 0) {
            ++inter;
            ++ia;
            ++ib;
        } else if (cmp < 0) {
            ++ia;
        } else {
            ++ib;
        }
    }
    std::size_t uni = a.tokens.size() + b.tokens.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace repoctx
