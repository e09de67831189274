#include "repoctx/syntax.hpp"

#include <cctype>

namespace repoctx {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<bool> code_mask(const std::string& content, LanguageId lang) {
    std::vector<bool> mask(content.size(), true);
    enum class State {
        Code,
        LineComment,
        BlockComment,
        Single,     // '...'
        Double,     // "..."
        Backtick,   // `...` (raw in Go, template in TS)
        TripleS,    // '''...''' (Python)
        TripleD,    // """...""" (Python)
    } state = State::Code;

    bool python = lang == LanguageId::Python;
    bool c_style = !python;  // Go / TypeScript / unknown

    auto at = [&](std::size_t i, const char* s) {
        return content.compare(i, std::char_traits<char>::length(s), s) == 0;
    };

    std::size_t i = 0;
    while (i < content.size()) {
        char c = content[i];
        switch (state) {
            case State::Code:
                if (c_style && at(i, "//")) {
                    mask[i] = mask[i + 1] = false;
                    state = State::LineComment;
                    i += 2;
                    continue;
                }
                if (c_style && at(i, "/*")) {
                    mask[i] = mask[i + 1] = false;
                    state = State::BlockComment;
                    i += 2;
                    continue;
                }
                if (python && c == '#') {
                    mask[i] = false;
                    state = State::LineComment;
                    break;
                }
                if (python && at(i, "'''")) {
                    mask[i] = mask[i + 1] = mask[i + 2] = false;
                    state = State::TripleS;
                    i += 3;
                    continue;
                }
                if (python && at(i, "\"\"\"")) {
                    mask[i] = mask[i + 1] = mask[i + 2] = false;
                    state = State::TripleD;
                    i += 3;
                    continue;
                }
                if (c == '"') {
                    mask[i] = false;
                    state = State::Double;
                } else if (c == '\'') {
                    mask[i] = false;
                    state = State::Single;
                } else if (c == '`' && c_style) {
                    mask[i] = false;
                    state = State::Backtick;
                }
                break;
            case State::LineComment:
                if (c == '\n')
                    state = State::Code;  // the newline itself stays code
                else
                    mask[i] = false;
                break;
            case State::BlockComment:
                mask[i] = false;
                if (at(i, "*/")) {
                    mask[i + 1] = false;
                    state = State::Code;
                    i += 2;
                    continue;
                }
                break;
            case State::Single:
            case State::Double: {
                char quote = state == State::Single ? '\'' : '"';
                mask[i] = false;
                if (c == '\\' && i + 1 < content.size()) {
                    mask[i + 1] = false;
                    i += 2;
                    continue;
                }
                if (c == quote || c == '\n') state = State::Code;
                break;
            }
            case State::Backtick:
                mask[i] = false;
                if (c == '`') state = State::Code;
                break;
            case State::TripleS:
                mask[i] = false;
                if (at(i, "'''")) {
                    mask[i + 1] = mask[i + 2] = false;
                    state = State::Code;
                    i += 3;
                    continue;
                }
                break;
            case State::TripleD:
                mask[i] = false;
                if (at(i, "\"\"\"")) {
                    mask[i + 1] = mask[i + 2] = false;
                    state = State::Code;
                    i += 3;
                    continue;
                }
                break;
        }
        ++i;
    }
    return mask;
}

std::size_t matching_close(const std::string& content, const std::vector<bool>& mask,
                           std::size_t open_pos) {
    if (open_pos >= content.size()) return std::string::npos;
    char open = content[open_pos];
    char close = open == '{' ? '}' : open == '[' ? ']' : open == '(' ? ')' : '\0';
    if (close == '\0') return std::string::npos;
    int depth = 0;
    for (std::size_t i = open_pos; i < content.size(); ++i) {
        if (!mask[i]) continue;
        if (content[i] == open) ++depth;
        if (content[i] == close && --depth == 0) return i;
    }
    return std::string::npos;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(s.front()))) return false;
    for (char c : s)
        if (!ident_char(c)) return false;
    return true;
}

std::string identifier_before(const std::string& content, std::size_t pos) {
    std::size_t end = pos;
    std::size_t begin = end;
    while (begin > 0 && ident_char(content[begin - 1])) --begin;
    std::string ident = content.substr(begin, end - begin);
    return is_identifier(ident) ? ident : std::string();
}

}  // namespace repoctx
