#include "repoctx/ckg.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

#include "repoctx/fusion.hpp"
#include "repoctx/syntax.hpp"

namespace repoctx {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::size_t skip_space(const std::string& s, std::size_t i) {
    while (i < s.size() && is_space(s[i])) ++i;
    return i;
}

std::string read_ident(const std::string& s, std::size_t& i) {
    std::size_t begin = i;
    while (i < s.size() && ident_char(s[i])) ++i;
    return s.substr(begin, i - begin);
}

int line_of_offset(const std::string& s, std::size_t offset) {
    return 1 + static_cast<int>(std::count(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::string rtrim(std::string s) {
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

bool at_line_start(const std::string& s, std::size_t i) {
    return i == 0 || s[i - 1] == '\n';
}

const std::unordered_set<std::string>& go_builtin_types() {
    static const std::unordered_set<std::string> names = {
        "bool", "string", "int", "int8", "int16", "int32", "int64", "uint", "uint8",
        "uint16", "uint32", "uint64", "uintptr", "byte", "rune", "float32", "float64",
        "complex64", "complex128", "error", "any", "map", "chan", "func", "interface",
        "struct",
    };
    return names;
}

bool go_keyword(const std::string& s) {
    static const std::unordered_set<std::string> words = {
        "break", "case", "chan", "const", "continue", "default", "defer", "else",
        "fallthrough", "for", "func", "go", "goto", "if", "import", "interface",
        "map", "package", "range", "return", "select", "struct", "switch", "type", "var",
    };
    return words.count(s) > 0;
}

// Offset of the '{' opening the function body, skipping anonymous
// struct/interface type literals inside the signature. npos when absent.
std::size_t find_body_open(const std::string& s, const std::vector<bool>& mask,
                           std::size_t from) {
    int depth = 0;
    std::string last_word;
    for (std::size_t i = from; i < s.size(); ++i) {
        if (!mask[i]) continue;
        char c = s[i];
        if (ident_char(c)) {
            std::size_t j = i;
            last_word = read_ident(s, j);
            i = j - 1;
            continue;
        }
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == '{' && depth == 0) {
            if (last_word == "interface" || last_word == "struct") {
                std::size_t close = matching_close(s, mask, i);
                if (close == std::string::npos) return std::string::npos;
                i = close;
                last_word.clear();
                continue;
            }
            return i;
        }
        if (c == '\n' && depth == 0 && last_word != "interface" && last_word != "struct") {
            // a multi-line signature keeps depth > 0 until its params close
        }
        if (!is_space(c)) last_word.clear();
    }
    return std::string::npos;
}

// Last identifier of each depth-0 comma group, skipping builtins; these
// are the named parameter types.
std::vector<std::string> param_type_names(const std::string& params) {
    std::vector<std::string> out;
    std::vector<std::string> groups;
    int depth = 0;
    std::string cur;
    for (char c : params) {
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            groups.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!rtrim(cur).empty()) groups.push_back(cur);
    for (const auto& group : groups) {
        std::string last;
        std::size_t i = 0;
        while (i < group.size()) {
            if (ident_char(group[i])) {
                last = read_ident(group, i);
            } else {
                ++i;
            }
        }
        if (!last.empty() && !go_builtin_types().count(last) && !go_keyword(last) &&
            std::find(out.begin(), out.end(), last) == out.end())
            out.push_back(last);
    }
    return out;
}

struct GoFunc {
    std::string name;
    std::string signature;
    std::string container;  // receiver type for methods
    int start_line = 1;
};

struct GoStruct {
    std::string name;
    std::string definition;
    int start_line = 1;
};

struct GoScan {
    std::vector<GoFunc> funcs;
    std::vector<GoStruct> structs;
};

GoScan scan_go(const std::string& content) {
    GoScan out;
    std::vector<bool> mask = code_mask(content, LanguageId::Go);
    std::size_t i = 0;
    while (i < content.size()) {
        if (!mask[i] || !at_line_start(content, i)) {
            ++i;
            continue;
        }
        std::size_t word_end = i;
        std::string word = read_ident(content, word_end);
        if (word == "func") {
            GoFunc fn;
            std::size_t p = skip_space(content, word_end);
            if (p < content.size() && content[p] == '(') {
                // method receiver
                std::size_t close = matching_close(content, mask, p);
                if (close == std::string::npos) {
                    i = word_end;
                    continue;
                }
                std::string receiver = content.substr(p + 1, close - p - 1);
                auto types = param_type_names(receiver);
                if (!types.empty()) fn.container = types.back();
                p = skip_space(content, close + 1);
            }
            std::size_t name_end = p;
            fn.name = read_ident(content, name_end);
            if (fn.name.empty()) {
                i = word_end;
                continue;
            }
            std::size_t body = find_body_open(content, mask, name_end);
            std::size_t sig_end = body;
            if (sig_end == std::string::npos) {
                sig_end = content.find('\n', name_end);
                if (sig_end == std::string::npos) sig_end = content.size();
            }
            fn.signature = rtrim(content.substr(i, sig_end - i));
            fn.start_line = line_of_offset(content, i);
            out.funcs.push_back(std::move(fn));
            if (body != std::string::npos) {
                std::size_t close = matching_close(content, mask, body);
                i = close == std::string::npos ? body + 1 : close + 1;
            } else {
                i = sig_end;
            }
            continue;
        }
        if (word == "type") {
            std::size_t p = skip_space(content, word_end);
            std::size_t name_end = p;
            std::string name = read_ident(content, name_end);
            if (name.empty()) {
                i = word_end;
                continue;
            }
            // generic parameter list between name and the kind keyword
            std::size_t q = skip_space(content, name_end);
            if (q < content.size() && content[q] == '[') {
                std::size_t close = matching_close(content, mask, q);
                if (close == std::string::npos) {
                    i = name_end;
                    continue;
                }
                q = skip_space(content, close + 1);
            }
            std::size_t kind_end = q;
            std::string kind_word = read_ident(content, kind_end);
            if (kind_word == "struct") {
                std::size_t brace = content.find('{', kind_end);
                if (brace != std::string::npos && mask[brace]) {
                    std::size_t close = matching_close(content, mask, brace);
                    if (close != std::string::npos) {
                        GoStruct st;
                        st.name = name;
                        st.definition = content.substr(i, close - i + 1);
                        st.start_line = line_of_offset(content, i);
                        out.structs.push_back(std::move(st));
                        i = close + 1;
                        continue;
                    }
                }
            }
        }
        i = word_end > i ? word_end : i + 1;
    }
    return out;
}

class GoParser final : public SymbolParser {
public:
    std::vector<SymbolEntry> parse(const FileRecord& record) const override {
        GoScan scan = scan_go(record.content);
        std::vector<SymbolEntry> out;
        for (const auto& fn : scan.funcs) {
            SymbolEntry e;
            e.name = fn.name;
            e.kind = SymbolKind::Function;
            e.context = fn.signature;
            e.path = record.path;
            e.start_line = fn.start_line;
            e.container = fn.container;
            if (!e.context.empty()) out.push_back(std::move(e));
        }
        for (const auto& st : scan.structs) {
            SymbolEntry e;
            e.name = st.name;
            e.kind = SymbolKind::Structure;
            e.context = st.definition;
            for (const auto& fn : scan.funcs)
                if (fn.container == st.name) e.context += "\n" + fn.signature;
            e.path = record.path;
            e.start_line = st.start_line;
            if (!e.context.empty()) out.push_back(std::move(e));
        }
        return out;
    }
};

}  // namespace

std::string symbol_kind_name(SymbolKind kind) {
    return kind == SymbolKind::Function ? "function" : "structure";
}

std::string scenario_kind_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::FunctionCall: return "function_call";
        case ScenarioKind::StructInitialization: return "struct_initialization";
        default: return "function_body";
    }
}

const SymbolParser* symbol_parser_for(LanguageId lang) {
    static const GoParser go_parser;
    if (lang == LanguageId::Go) return &go_parser;
    return nullptr;
}

std::vector<SymbolEntry> parse_symbols(const FileRecord& record, LanguageId lang) {
    const SymbolParser* parser = symbol_parser_for(lang);
    if (!parser) return {};
    try {
        return parser->parse(record);
    } catch (const std::exception&) {
        return {};  // unparseable files never abort indexing
    }
}

std::optional<Scenario> detect_scenario(const CompletionRequest& request) {
    if (request.language != LanguageId::Go) return std::nullopt;
    const std::string& prefix = request.prefix;
    std::vector<bool> mask = code_mask(prefix, request.language);

    std::vector<std::size_t> open_stack;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (!mask[i]) continue;
        char c = prefix[i];
        if (c == '(' || c == '[' || c == '{') {
            open_stack.push_back(i);
        } else if (c == ')' || c == ']' || c == '}') {
            if (!open_stack.empty()) open_stack.pop_back();
        }
    }

    // innermost construct wins
    for (auto it = open_stack.rbegin(); it != open_stack.rend(); ++it) {
        std::size_t pos = *it;
        char opener = prefix[pos];
        if (opener == '(') {
            std::size_t before = pos;
            while (before > 0 && (prefix[before - 1] == ' ' || prefix[before - 1] == '\t'))
                --before;
            std::string name = identifier_before(prefix, before);
            if (!name.empty() && !go_keyword(name))
                return Scenario{ScenarioKind::FunctionCall, {{name, SymbolKind::Function}}};
        } else if (opener == '{') {
            // composite literals are written flush against the type name
            if (pos > 0 && ident_char(prefix[pos - 1])) {
                std::string name = identifier_before(prefix, pos);
                if (!name.empty() && !go_keyword(name))
                    return Scenario{ScenarioKind::StructInitialization,
                                    {{name, SymbolKind::Structure}}};
            }
        }
    }

    // enclosing function body, when one is still open at the cursor
    std::size_t i = 0;
    std::size_t last_func = std::string::npos;
    while (i < prefix.size()) {
        if (mask[i] && at_line_start(prefix, i)) {
            std::size_t end = i;
            if (read_ident(prefix, end) == "func") last_func = i;
        }
        ++i;
    }
    if (last_func == std::string::npos) return std::nullopt;
    std::size_t body = find_body_open(prefix, mask, last_func + 4);
    if (body == std::string::npos ||
        std::find(open_stack.begin(), open_stack.end(), body) == open_stack.end())
        return std::nullopt;

    Scenario scenario;
    scenario.kind = ScenarioKind::FunctionBody;
    // parameter groups: the receiver (methods) plus the parameter list
    std::size_t p = last_func + 4;
    while (p < body) {
        p = skip_space(prefix, p);
        if (p >= body) break;
        if (prefix[p] == '(') {
            std::size_t close = matching_close(prefix, mask, p);
            if (close == std::string::npos || close > body) break;
            for (const auto& type_name :
                 param_type_names(prefix.substr(p + 1, close - p - 1))) {
                auto sym = std::make_pair(type_name, SymbolKind::Structure);
                if (std::find(scenario.referenced_symbols.begin(),
                              scenario.referenced_symbols.end(),
                              sym) == scenario.referenced_symbols.end())
                    scenario.referenced_symbols.push_back(sym);
            }
            p = close + 1;
            // return types follow the last parameter list; stop there
            std::size_t rest = skip_space(prefix, p);
            if (rest < body && prefix[rest] != '(') break;
        } else {
            std::size_t end = p;
            if (read_ident(prefix, end).empty()) ++end;
            p = end;
        }
    }
    return scenario;
}

void CodeKnowledgeGraph::build(const RepoSnapshot& snapshot) {
    std::unique_lock lock(mutex_);
    by_name_.clear();
    by_file_.clear();
    dirty_.clear();
    for (const auto& [path, rec] : snapshot.files()) {
        LanguageId lang = language_from_path(path);
        if (!symbol_parser_for(lang)) continue;
        insert_entries_locked(path, parse_symbols(rec, lang));
    }
    ++generation_;
}

void CodeKnowledgeGraph::incremental_update(const FileRecord& record, LanguageId lang) {
    std::unique_lock lock(mutex_);
    remove_file_locked(record.path);
    dirty_.erase(record.path);
    if (symbol_parser_for(lang)) {
        auto entries = parse_symbols(record, lang);
        if (entries.empty() && record.line_count > 0) dirty_.insert(record.path);
        insert_entries_locked(record.path, std::move(entries));
    }
    ++generation_;
}

void CodeKnowledgeGraph::remove_file(const std::string& path) {
    std::unique_lock lock(mutex_);
    remove_file_locked(path);
    dirty_.erase(path);
    ++generation_;
}

void CodeKnowledgeGraph::remove_file_locked(const std::string& path) {
    auto fit = by_file_.find(path);
    if (fit == by_file_.end()) return;
    for (const auto& entry : fit->second) {
        auto key = std::make_pair(entry.name, entry.kind);
        auto nit = by_name_.find(key);
        if (nit == by_name_.end()) continue;
        auto& list = nit->second;
        list.erase(std::remove(list.begin(), list.end(), entry), list.end());
        if (list.empty()) by_name_.erase(nit);
    }
    by_file_.erase(fit);
}

void CodeKnowledgeGraph::insert_entries_locked(const std::string& path,
                                               std::vector<SymbolEntry> entries) {
    if (entries.empty()) return;
    for (const auto& entry : entries) by_name_[{entry.name, entry.kind}].push_back(entry);
    by_file_[path] = std::move(entries);
}

std::vector<SymbolEntry> CodeKnowledgeGraph::lookup(const std::string& name,
                                                    SymbolKind kind) const {
    std::shared_lock lock(mutex_);
    auto it = by_name_.find({name, kind});
    return it == by_name_.end() ? std::vector<SymbolEntry>{} : it->second;
}

std::vector<SymbolEntry> CodeKnowledgeGraph::file_entries(const std::string& path) const {
    std::shared_lock lock(mutex_);
    auto it = by_file_.find(path);
    return it == by_file_.end() ? std::vector<SymbolEntry>{} : it->second;
}

std::size_t CodeKnowledgeGraph::size() const {
    std::shared_lock lock(mutex_);
    std::size_t n = 0;
    for (const auto& [path, entries] : by_file_) n += entries.size();
    return n;
}

std::int64_t CodeKnowledgeGraph::generation() const {
    std::shared_lock lock(mutex_);
    return generation_;
}

std::vector<std::string> CodeKnowledgeGraph::dirty_files() const {
    std::shared_lock lock(mutex_);
    return {dirty_.begin(), dirty_.end()};
}

std::vector<SymbolEntry> CodeKnowledgeGraph::all_entries() const {
    std::shared_lock lock(mutex_);
    std::vector<SymbolEntry> out;
    for (const auto& [path, entries] : by_file_)
        out.insert(out.end(), entries.begin(), entries.end());
    std::sort(out.begin(), out.end(), [](const SymbolEntry& a, const SymbolEntry& b) {
        return std::tie(a.path, a.start_line, a.name) < std::tie(b.path, b.start_line, b.name);
    });
    return out;
}

void CodeKnowledgeGraph::check_consistency() const {
    std::shared_lock lock(mutex_);
    std::size_t by_file_total = 0;
    for (const auto& [path, entries] : by_file_) {
        by_file_total += entries.size();
        for (const auto& entry : entries) {
            auto it = by_name_.find({entry.name, entry.kind});
            if (it == by_name_.end() ||
                std::find(it->second.begin(), it->second.end(), entry) == it->second.end())
                throw std::logic_error("entry missing from by_name: " + entry.name);
        }
    }
    std::size_t by_name_total = 0;
    for (const auto& [key, entries] : by_name_) by_name_total += entries.size();
    if (by_file_total != by_name_total)
        throw std::logic_error("by_name and by_file hold different entry counts");
}

namespace {

int path_distance(const std::string& a, const std::string& b) {
    auto dirs = [](const std::string& p) {
        std::vector<std::string> out;
        std::size_t pos = 0;
        auto slash = p.rfind('/');
        if (slash == std::string::npos) return out;
        std::string dir = p.substr(0, slash);
        while (pos <= dir.size()) {
            auto sep = dir.find('/', pos);
            out.push_back(sep == std::string::npos ? dir.substr(pos)
                                                   : dir.substr(pos, sep - pos));
            if (sep == std::string::npos) break;
            pos = sep + 1;
        }
        return out;
    };
    auto da = dirs(a), db = dirs(b);
    std::size_t common = 0;
    while (common < da.size() && common < db.size() && da[common] == db[common]) ++common;
    return static_cast<int>(da.size() - common) + static_cast<int>(db.size() - common);
}

}  // namespace

std::vector<RetrievedContext> retrieve_symbols(const CodeKnowledgeGraph& graph,
                                               const Scenario& scenario,
                                               const std::string& request_path,
                                               std::size_t max_entries) {
    std::vector<RetrievedContext> out;
    for (const auto& [name, kind] : scenario.referenced_symbols) {
        auto entries = graph.lookup(name, kind);
        std::stable_sort(entries.begin(), entries.end(),
                         [&](const SymbolEntry& a, const SymbolEntry& b) {
                             int da = path_distance(a.path, request_path);
                             int db = path_distance(b.path, request_path);
                             if (da != db) return da < db;
                             if (a.path != b.path) return a.path < b.path;
                             return a.start_line < b.start_line;
                         });
        for (const auto& entry : entries) {
            if (out.size() >= max_entries) return out;
            RetrievedContext ctx;
            ctx.kind = ContextKind::Symbol;
            ctx.content = entry.context;
            ctx.score = 1.0 / (1.0 + path_distance(entry.path, request_path));
            ctx.source_path = entry.path;
            ctx.source_start_line = entry.start_line;
            ctx.source_end_line = entry.start_line;
            ctx.token_estimate = count_tokens(ctx.content);
            out.push_back(std::move(ctx));
        }
    }
    return out;
}

}  // namespace repoctx
