#include "repoctx/eval.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "repoctx/syntax.hpp"

namespace repoctx {

double edit_similarity(const std::string& a, const std::string& b) {
    if (a.empty() && b.empty()) return 100.0;
    std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    double dist = static_cast<double>(prev[m]);
    return 100.0 * (1.0 - dist / static_cast<double>(std::max(n, m)));
}

std::string normalize_ws(const std::string& text) {
    std::string out;
    bool in_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out += ' ';
        in_space = false;
        out += c;
    }
    return out;
}

bool soft_exact_match(const std::string& generated, const std::string& label) {
    std::string g = normalize_ws(generated);
    std::string l = normalize_ws(label);
    if (l.empty()) return false;
    return g.compare(0, l.size(), l) == 0;
}

std::string eval_scenario_name(EvalScenario scenario) {
    switch (scenario) {
        case EvalScenario::FunctionDefinition: return "function_definition";
        case EvalScenario::IfBlock: return "if_block";
        case EvalScenario::FunctionCall: return "function_call";
        case EvalScenario::Expression: return "expression";
        case EvalScenario::ReturnStatement: return "return_statement";
        case EvalScenario::ArrowFunction: return "arrow_function";
        case EvalScenario::JsxElement: return "jsx_element";
        case EvalScenario::JsxAttributes: return "jsx_attributes";
        default: return "random_block";
    }
}

std::optional<EvalScenario> eval_scenario_from_name(const std::string& name) {
    for (EvalScenario s : {EvalScenario::FunctionDefinition, EvalScenario::IfBlock,
                           EvalScenario::FunctionCall, EvalScenario::Expression,
                           EvalScenario::ReturnStatement, EvalScenario::ArrowFunction,
                           EvalScenario::JsxElement, EvalScenario::JsxAttributes,
                           EvalScenario::RandomBlock})
        if (eval_scenario_name(s) == name) return s;
    return std::nullopt;
}

std::vector<EvalScenario> scenarios_for_language(LanguageId lang) {
    std::vector<EvalScenario> base = {EvalScenario::FunctionDefinition, EvalScenario::IfBlock,
                                      EvalScenario::FunctionCall, EvalScenario::Expression,
                                      EvalScenario::ReturnStatement};
    if (lang == LanguageId::TypeScript) {
        base.push_back(EvalScenario::ArrowFunction);
        base.push_back(EvalScenario::JsxElement);
        base.push_back(EvalScenario::JsxAttributes);
    }
    return base;
}

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

struct HoleRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
};

bool word_at(const std::string& s, const std::vector<bool>& mask, std::size_t i,
             const std::string& word) {
    if (i + word.size() > s.size()) return false;
    if (!mask[i]) return false;
    if (s.compare(i, word.size(), word) != 0) return false;
    if (i > 0 && ident_char(s[i - 1])) return false;
    if (i + word.size() < s.size() && ident_char(s[i + word.size()])) return false;
    return true;
}

std::string previous_word(const std::string& s, std::size_t pos) {
    std::size_t i = pos;
    while (i > 0 && (s[i - 1] == ' ' || s[i - 1] == '\t')) --i;
    std::size_t end = i;
    while (i > 0 && ident_char(s[i - 1])) --i;
    return s.substr(i, end - i);
}

// first '{' at paren/bracket depth 0 after `from`
std::size_t find_open_brace(const std::string& s, const std::vector<bool>& mask,
                            std::size_t from, char stop_at = '\0') {
    int depth = 0;
    for (std::size_t i = from; i < s.size(); ++i) {
        if (!mask[i]) continue;
        char c = s[i];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == '{' && depth == 0) return i;
        if (stop_at && c == stop_at && depth == 0) return std::string::npos;
    }
    return std::string::npos;
}

bool keyword_for(LanguageId lang, const std::string& word) {
    static const std::unordered_set<std::string> go = {
        "break", "case", "chan", "const", "continue", "default", "defer", "else",
        "fallthrough", "for", "func", "go", "goto", "if", "import", "interface", "map",
        "package", "range", "return", "select", "struct", "switch", "type", "var"};
    static const std::unordered_set<std::string> py = {
        "and", "as", "assert", "async", "await", "break", "class", "continue", "def",
        "del", "elif", "else", "except", "finally", "for", "from", "global", "if",
        "import", "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise",
        "return", "try", "while", "with", "yield"};
    static const std::unordered_set<std::string> ts = {
        "break", "case", "catch", "class", "const", "continue", "default", "delete", "do",
        "else", "export", "extends", "finally", "for", "function", "if", "import", "in",
        "instanceof", "let", "new", "return", "super", "switch", "throw", "try", "typeof",
        "var", "void", "while", "with", "await", "async", "yield", "of"};
    switch (lang) {
        case LanguageId::Go: return go.count(word) > 0;
        case LanguageId::Python: return py.count(word) > 0;
        case LanguageId::TypeScript: return ts.count(word) > 0;
        default: return false;
    }
}

// --- brace-language node finders ---------------------------------------

std::vector<HoleRange> brace_function_bodies(const std::string& s,
                                             const std::vector<bool>& mask,
                                             const std::string& keyword) {
    std::vector<HoleRange> out;
    for (std::size_t i = 0; i + keyword.size() <= s.size(); ++i) {
        if (!word_at(s, mask, i, keyword)) continue;
        std::size_t open = find_open_brace(s, mask, i + keyword.size());
        if (open == std::string::npos) continue;
        std::size_t close = matching_close(s, mask, open);
        if (close == std::string::npos) continue;
        out.push_back({open + 1, close});
        i = open;
    }
    return out;
}

std::vector<HoleRange> brace_if_blocks(const std::string& s, const std::vector<bool>& mask) {
    std::vector<HoleRange> out;
    for (std::size_t i = 0; i + 2 <= s.size(); ++i) {
        if (!word_at(s, mask, i, "if")) continue;
        std::size_t open = find_open_brace(s, mask, i + 2, ';');
        if (open == std::string::npos) continue;
        std::size_t close = matching_close(s, mask, open);
        if (close == std::string::npos) continue;
        out.push_back({open + 1, close});
        i = open;
    }
    return out;
}

std::vector<HoleRange> call_arguments(const std::string& s, const std::vector<bool>& mask,
                                      LanguageId lang) {
    std::vector<HoleRange> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!mask[i] || !ident_start(s[i]) || (i > 0 && ident_char(s[i - 1]))) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < s.size() && ident_char(s[end])) ++end;
        std::string name = s.substr(i, end - i);
        std::size_t at = i;
        i = end;
        if (end >= s.size() || s[end] != '(' || !mask[end]) continue;
        if (keyword_for(lang, name)) continue;
        std::string prev = previous_word(s, at);
        if (prev == "func" || prev == "def" || prev == "function") continue;  // definition
        std::size_t close = matching_close(s, mask, end);
        if (close == std::string::npos) continue;
        out.push_back({end + 1, close});
    }
    return out;
}

std::vector<HoleRange> return_contents(const std::string& s, const std::vector<bool>& mask) {
    std::vector<HoleRange> out;
    for (std::size_t i = 0; i + 6 <= s.size(); ++i) {
        if (!word_at(s, mask, i, "return")) continue;
        std::size_t begin = i + 6;
        std::size_t end = begin;
        while (end < s.size() && s[end] != '\n') {
            if (mask[end] && (s[end] == '}' || s[end] == ';')) break;
            ++end;
        }
        out.push_back({begin, end});
        i = end;
    }
    return out;
}

bool line_is_expression_statement(const std::string& line, LanguageId lang) {
    std::size_t b = 0, e = line.size();
    while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    if (b == e) return false;
    std::string trimmed = line.substr(b, e - b);
    if (!ident_start(trimmed.front())) return false;
    std::size_t w = 0;
    while (w < trimmed.size() && ident_char(trimmed[w])) ++w;
    if (keyword_for(lang, trimmed.substr(0, w))) return false;
    if (trimmed.find('=') != std::string::npos) return false;
    return trimmed.back() == ')';
}

std::vector<HoleRange> expression_statements(const std::string& s, LanguageId lang) {
    std::vector<HoleRange> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t nl = s.find('\n', pos);
        std::size_t end = nl == std::string::npos ? s.size() : nl;
        std::string line = s.substr(pos, end - pos);
        if (line_is_expression_statement(line, lang)) {
            std::size_t b = pos, e = end;
            while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
            while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
            out.push_back({b, e});
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return out;
}

std::vector<HoleRange> arrow_bodies(const std::string& s, const std::vector<bool>& mask) {
    std::vector<HoleRange> out;
    for (std::size_t i = 0; i + 2 <= s.size(); ++i) {
        if (!mask[i] || s[i] != '=' || s[i + 1] != '>') continue;
        std::size_t p = i + 2;
        while (p < s.size() && (s[p] == ' ' || s[p] == '\t' || s[p] == '\n')) ++p;
        if (p >= s.size() || s[p] != '{' || !mask[p]) continue;
        std::size_t close = matching_close(s, mask, p);
        if (close == std::string::npos) continue;
        out.push_back({p + 1, close});
        i = close;
    }
    return out;
}

struct JsxTag {
    std::size_t attr_begin = 0;
    std::size_t attr_end = 0;
    std::size_t children_begin = 0;
    std::size_t children_end = 0;
    bool self_closing = false;
};

std::vector<JsxTag> jsx_tags(const std::string& s, const std::vector<bool>& mask) {
    std::vector<JsxTag> out;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (!mask[i] || s[i] != '<' || !std::isupper(static_cast<unsigned char>(s[i + 1])))
            continue;
        std::size_t name_end = i + 1;
        while (name_end < s.size() && ident_char(s[name_end])) ++name_end;
        std::string tag = s.substr(i + 1, name_end - i - 1);
        std::size_t gt = s.find('>', name_end);
        if (gt == std::string::npos) continue;
        JsxTag t;
        t.self_closing = gt > 0 && s[gt - 1] == '/';
        t.attr_begin = name_end;
        t.attr_end = t.self_closing ? gt - 1 : gt;
        if (!t.self_closing) {
            std::string closer = "</" + tag + ">";
            std::size_t close = s.find(closer, gt + 1);
            if (close == std::string::npos) {
                out.push_back(t);  // attributes still usable
                continue;
            }
            t.children_begin = gt + 1;
            t.children_end = close;
        }
        out.push_back(t);
        i = gt;
    }
    return out;
}

// --- python suites -----------------------------------------------------

std::size_t indent_of(const std::string& line) {
    std::size_t n = 0;
    for (char c : line) {
        if (c == ' ') ++n;
        else if (c == '\t') n += 8;
        else break;
    }
    return n;
}

bool blank_line(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

// body region of each header line starting with `keyword` and ending in ':'
std::vector<HoleRange> python_suites(const std::string& s, const std::string& keyword) {
    std::vector<HoleRange> out;
    std::vector<std::string> lines = split_lines(s);
    std::vector<std::size_t> offsets;
    std::size_t off = 0;
    for (const auto& line : lines) {
        offsets.push_back(off);
        off += line.size() + 1;
    }
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        if (!keyword.empty()) {
            if (line.compare(b, keyword.size(), keyword) != 0) continue;
            std::size_t after = b + keyword.size();
            if (after < line.size() && ident_char(line[after])) continue;
        }
        std::size_t e = line.find_last_not_of(" \t\r");
        if (e == std::string::npos || line[e] != ':') continue;
        std::size_t header_indent = indent_of(line);
        std::size_t last_body = li;
        for (std::size_t j = li + 1; j < lines.size(); ++j) {
            if (blank_line(lines[j])) continue;
            if (indent_of(lines[j]) <= header_indent) break;
            last_body = j;
        }
        if (last_body == li) continue;
        std::size_t begin = offsets[li + 1];
        std::size_t end = offsets[last_body] + lines[last_body].size();
        out.push_back({begin, end});
    }
    return out;
}

// --- common case construction ------------------------------------------

std::optional<EvalCase> make_case(const FileRecord& record, LanguageId lang,
                                  EvalScenario scenario, HoleRange hole) {
    const std::string& content = record.content;
    std::size_t begin = hole.begin, end = hole.end;
    if (begin >= end || end > content.size()) return std::nullopt;
    while (begin < end && std::isspace(static_cast<unsigned char>(content[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(content[end - 1]))) --end;
    if (begin >= end) return std::nullopt;  // whitespace-only label
    std::string label = content.substr(begin, end - begin);
    std::string prefix = content.substr(0, begin);
    std::string suffix = content.substr(end);
    if (prefix.find(label) != std::string::npos || suffix.find(label) != std::string::npos)
        return std::nullopt;  // leakage
    EvalCase c;
    c.path = record.path;
    c.scenario = scenario;
    c.prefix = std::move(prefix);
    c.suffix = std::move(suffix);
    c.label = std::move(label);
    c.language = lang;
    return c;
}

std::vector<HoleRange> scenario_holes(const std::string& s, const std::vector<bool>& mask,
                                      LanguageId lang, EvalScenario scenario) {
    switch (scenario) {
        case EvalScenario::FunctionDefinition:
            if (lang == LanguageId::Go) return brace_function_bodies(s, mask, "func");
            if (lang == LanguageId::TypeScript) return brace_function_bodies(s, mask, "function");
            return python_suites(s, "def");
        case EvalScenario::IfBlock:
            if (lang == LanguageId::Python) return python_suites(s, "if");
            return brace_if_blocks(s, mask);
        case EvalScenario::FunctionCall:
            return call_arguments(s, mask, lang);
        case EvalScenario::Expression:
            return expression_statements(s, lang);
        case EvalScenario::ReturnStatement:
            return return_contents(s, mask);
        case EvalScenario::ArrowFunction:
            return lang == LanguageId::TypeScript ? arrow_bodies(s, mask)
                                                  : std::vector<HoleRange>{};
        case EvalScenario::JsxElement: {
            std::vector<HoleRange> out;
            if (lang == LanguageId::TypeScript)
                for (const auto& t : jsx_tags(s, mask))
                    if (t.children_end > t.children_begin)
                        out.push_back({t.children_begin, t.children_end});
            return out;
        }
        case EvalScenario::JsxAttributes: {
            std::vector<HoleRange> out;
            if (lang == LanguageId::TypeScript)
                for (const auto& t : jsx_tags(s, mask))
                    if (t.attr_end > t.attr_begin) out.push_back({t.attr_begin, t.attr_end});
            return out;
        }
        default:
            return {};
    }
}

std::vector<HoleRange> syntax_blocks(const std::string& s, const std::vector<bool>& mask,
                                     LanguageId lang) {
    if (lang == LanguageId::Python) return python_suites(s, "");
    std::vector<HoleRange> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!mask[i] || s[i] != '{') continue;
        std::size_t close = matching_close(s, mask, i);
        if (close != std::string::npos && close > i + 1) out.push_back({i + 1, close});
    }
    return out;
}

}  // namespace

std::vector<EvalCase> dig_scenario_holes(const FileRecord& record, LanguageId lang,
                                         EvalScenario scenario) {
    if (lang == LanguageId::Unknown) return {};
    auto allowed = scenarios_for_language(lang);
    if (std::find(allowed.begin(), allowed.end(), scenario) == allowed.end()) return {};
    std::vector<bool> mask = code_mask(record.content, lang);
    std::vector<EvalCase> out;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& hole : scenario_holes(record.content, mask, lang, scenario)) {
        auto c = make_case(record, lang, scenario, hole);
        if (!c) continue;
        auto key = std::make_pair(c->prefix.size(), c->label.size());
        if (!seen.insert(key).second) continue;
        out.push_back(std::move(*c));
    }
    return out;
}

std::vector<EvalCase> dig_random_holes(const FileRecord& record, LanguageId lang,
                                       std::size_t count, std::uint64_t seed) {
    std::vector<EvalCase> out;
    if (count == 0 || lang == LanguageId::Unknown) return out;
    std::vector<bool> mask = code_mask(record.content, lang);
    std::vector<HoleRange> blocks = syntax_blocks(record.content, mask, lang);
    if (blocks.empty()) return out;
    std::mt19937_64 rng(seed ^ std::hash<std::string>{}(record.path));
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::size_t attempts = count * 8;
    for (std::size_t a = 0; a < attempts && out.size() < count; ++a) {
        const HoleRange& block = blocks[rng() % blocks.size()];
        std::size_t span = block.end - block.begin;
        std::size_t start = block.begin + rng() % span;
        auto c = make_case(record, lang, EvalScenario::RandomBlock, {start, block.end});
        if (!c) continue;
        auto key = std::make_pair(c->prefix.size(), c->label.size());
        if (!seen.insert(key).second) continue;
        out.push_back(std::move(*c));
    }
    return out;
}

DatasetReport build_dataset(const RepoSnapshot& snapshot, LanguageId lang,
                            std::size_t per_strategy_count, std::uint64_t seed) {
    DatasetReport report;
    std::vector<const FileRecord*> files;
    for (const auto& [path, rec] : snapshot.files())
        if (language_from_path(path) == lang) files.push_back(&rec);
    // snapshot map iteration is already path-ordered

    // strategy 1: scenario digging, round-robin across scenario kinds
    std::vector<std::vector<EvalCase>> buckets;
    for (EvalScenario scenario : scenarios_for_language(lang)) {
        std::vector<EvalCase> bucket;
        for (const FileRecord* rec : files) {
            auto cases = dig_scenario_holes(*rec, lang, scenario);
            bucket.insert(bucket.end(), cases.begin(), cases.end());
        }
        buckets.push_back(std::move(bucket));
    }
    std::vector<EvalCase> scenario_cases;
    std::vector<std::size_t> cursors(buckets.size(), 0);
    bool progressed = true;
    while (scenario_cases.size() < per_strategy_count && progressed) {
        progressed = false;
        for (std::size_t b = 0; b < buckets.size(); ++b) {
            if (scenario_cases.size() >= per_strategy_count) break;
            if (cursors[b] < buckets[b].size()) {
                scenario_cases.push_back(std::move(buckets[b][cursors[b]++]));
                progressed = true;
            }
        }
    }

    // strategy 2: random digging, round-robin across files
    std::vector<std::vector<EvalCase>> per_file;
    for (const FileRecord* rec : files)
        per_file.push_back(dig_random_holes(*rec, lang, per_strategy_count, seed));
    std::vector<EvalCase> random_cases;
    std::vector<std::size_t> fcursors(per_file.size(), 0);
    progressed = true;
    while (random_cases.size() < per_strategy_count && progressed) {
        progressed = false;
        for (std::size_t f = 0; f < per_file.size(); ++f) {
            if (random_cases.size() >= per_strategy_count) break;
            if (fcursors[f] < per_file[f].size()) {
                random_cases.push_back(std::move(per_file[f][fcursors[f]++]));
                progressed = true;
            }
        }
    }

    report.scenario_count = scenario_cases.size();
    report.random_count = random_cases.size();
    report.scenario_shortfall = per_strategy_count - scenario_cases.size();
    report.random_shortfall = per_strategy_count - random_cases.size();

    std::vector<EvalCase> all;
    all.reserve(scenario_cases.size() + random_cases.size());
    for (auto& c : scenario_cases) all.push_back(std::move(c));
    for (auto& c : random_cases) all.push_back(std::move(c));

    // portable Fisher-Yates so identical seeds give byte-identical files
    std::mt19937_64 rng(seed);
    for (std::size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[rng() % i]);

    for (std::size_t i = 0; i < all.size(); ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "case-%05zu", i);
        all[i].id = buf;
    }
    report.cases = std::move(all);
    return report;
}

ScoreReport score_run(const std::vector<EvalCase>& cases,
                      const std::map<std::string, std::string>& predictions) {
    ScoreReport report;
    double sim_sum = 0.0;
    std::size_t sem_count = 0;
    for (const auto& c : cases) {
        CaseScore score;
        score.id = c.id;
        auto it = predictions.find(c.id);
        std::string output;
        if (it == predictions.end()) {
            score.missing_prediction = true;
            ++report.incomplete;
        } else {
            output = it->second;
        }
        score.edit_similarity = edit_similarity(output, c.label);
        score.soft_exact_match = soft_exact_match(output, c.label);
        sim_sum += score.edit_similarity;
        if (score.soft_exact_match) ++sem_count;
        report.per_case.push_back(std::move(score));
    }
    if (!cases.empty()) {
        report.mean_edit_similarity = sim_sum / static_cast<double>(cases.size());
        report.sem_rate = 100.0 * static_cast<double>(sem_count) /
                          static_cast<double>(cases.size());
    }
    return report;
}

std::string stub_generate(const std::string& prompt_text, const std::string& evidence,
                          const std::string& label) {
    if (!evidence.empty() && prompt_text.find(evidence) != std::string::npos) return label;
    return "~~~ no completion ~~~";
}

std::string eval_case_to_json(const EvalCase& c) {
    nlohmann::json j;
    j["id"] = c.id;
    j["path"] = c.path;
    j["scenario"] = eval_scenario_name(c.scenario);
    j["prefix"] = c.prefix;
    j["suffix"] = c.suffix;
    j["label"] = c.label;
    j["language"] = language_name(c.language);
    return j.dump();
}

std::optional<EvalCase> eval_case_from_json(const std::string& line) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    EvalCase c;
    try {
        c.id = j.at("id").get<std::string>();
        c.path = j.at("path").get<std::string>();
        auto scenario = eval_scenario_from_name(j.at("scenario").get<std::string>());
        if (!scenario) return std::nullopt;
        c.scenario = *scenario;
        c.prefix = j.at("prefix").get<std::string>();
        c.suffix = j.at("suffix").get<std::string>();
        c.label = j.at("label").get<std::string>();
        c.language = language_from_name(j.at("language").get<std::string>());
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    return c;
}

std::string score_report_to_json(const ScoreReport& report) {
    nlohmann::json j;
    j["aggregates"]["mean_edit_similarity"] = report.mean_edit_similarity;
    j["aggregates"]["sem_rate"] = report.sem_rate;
    j["incomplete"] = report.incomplete;
    j["per_case"] = nlohmann::json::array();
    for (const auto& c : report.per_case) {
        nlohmann::json e;
        e["id"] = c.id;
        e["edit_similarity"] = c.edit_similarity;
        e["soft_exact_match"] = c.soft_exact_match;
        if (c.missing_prediction) e["missing"] = true;
        j["per_case"].push_back(std::move(e));
    }
    return j.dump(2);
}

std::string score_report_table(const ScoreReport& report) {
    std::ostringstream out;
    out << "id              edit_sim   sem\n";
    for (const auto& c : report.per_case) {
        char line[64];
        std::snprintf(line, sizeof(line), "%-14s %8.2f   %s%s\n", c.id.c_str(),
                      c.edit_similarity, c.soft_exact_match ? "yes" : "no",
                      c.missing_prediction ? " (missing)" : "");
        out << line;
    }
    char agg[96];
    std::snprintf(agg, sizeof(agg), "mean edit similarity %.2f  SEM %.2f%%  incomplete %zu\n",
                  report.mean_edit_similarity, report.sem_rate, report.incomplete);
    out << agg;
    return out.str();
}

}  // namespace repoctx
