#include "repoctx/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace repoctx {

void EngineConfig::validate() const {
    auto fail = [](const std::string& message) { throw std::invalid_argument(message); };
    if (behavior.recent_files_n < 1) fail("behavior.recent_files_n must be >= 1");
    if (behavior.top_k < 1) fail("behavior.top_k must be >= 1");
    if (behavior.window_stride < 1 || behavior.window_stride > behavior.window_lines)
        fail("behavior window stride must satisfy 1 <= stride <= window");
    if (similarity.jaccard_threshold < 0.0 || similarity.jaccard_threshold > 1.0)
        fail("similarity.jaccard_threshold must lie in [0, 1]");
    if (similarity.window_stride < 1 || similarity.window_stride > similarity.window_lines)
        fail("similarity window stride must satisfy 1 <= stride <= window");
    if (similarity.top_k < 1) fail("similarity.top_k must be >= 1");
    if (index.capacity < 1) fail("index.capacity must be >= 1");
    if (!budgets.valid()) fail("token budget caps must fit inside max_input_tokens");
    if (fim.style != "psm" && fim.style != "spm") fail("fim.style must be psm or spm");
    if (max_symbol_entries < 1) fail("max_symbol_entries must be >= 1");
    if (retriever_deadline_ms < 1) fail("retriever_deadline_ms must be >= 1");
}

EngineConfig EngineConfig::default_4k() { return {}; }

EngineConfig EngineConfig::extended_8k() {
    EngineConfig cfg;
    cfg.similarity = SimilarityConfig::extended_8k();
    cfg.budgets = TokenBudgets::extended_8k();
    cfg.profile = "extended_8k";
    return cfg;
}

EngineConfig EngineConfig::for_profile(const std::string& profile) {
    if (profile == "default_4k") return default_4k();
    if (profile == "extended_8k") return extended_8k();
    throw std::invalid_argument("unknown profile: " + profile);
}

namespace {

// Flat TOML subset: [section] headers, key = value with string / integer /
// float / boolean values.
nlohmann::json parse_flat_toml(std::istream& in) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* section = &root;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("toml: bad section at line " +
                                            std::to_string(lineno));
            section = &root[line.substr(1, line.size() - 2)];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("toml: expected key = value at line " +
                                        std::to_string(lineno));
        std::string key = line.substr(0, eq);
        key = key.substr(0, key.find_last_not_of(" \t") + 1);
        std::string value = line.substr(eq + 1);
        value = value.substr(value.find_first_not_of(" \t"));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            (*section)[key] = value.substr(1, value.size() - 2);
        } else if (value == "true" || value == "false") {
            (*section)[key] = value == "true";
        } else if (value.find('.') != std::string::npos) {
            (*section)[key] = std::stod(value);
        } else {
            (*section)[key] = std::stoll(value);
        }
    }
    return root;
}

template <typename T>
void take(nlohmann::json& obj, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    out = it->get<T>();
    obj.erase(it);
}

void reject_unknown(const nlohmann::json& obj, const std::string& where) {
    if (!obj.empty())
        throw std::invalid_argument("unknown config key in " + where + ": " +
                                    obj.begin().key());
}

void apply_json(EngineConfig& cfg, nlohmann::json root) {
    std::string profile;
    take(root, "profile", profile);
    if (!profile.empty()) cfg = EngineConfig::for_profile(profile);

    if (root.contains("behavior")) {
        auto obj = root["behavior"];
        take(obj, "recent_files_n", cfg.behavior.recent_files_n);
        take(obj, "top_k", cfg.behavior.top_k);
        take(obj, "window_lines", cfg.behavior.window_lines);
        take(obj, "window_stride", cfg.behavior.window_stride);
        take(obj, "exclude_current_file", cfg.behavior.exclude_current_file);
        take(obj, "retention_cap", cfg.behavior.retention_cap);
        reject_unknown(obj, "behavior");
        root.erase("behavior");
    }
    if (root.contains("similarity")) {
        auto obj = root["similarity"];
        std::string strategy;
        take(obj, "strategy", strategy);
        if (strategy == "origin") cfg.similarity.strategy = TokenStrategy::Origin;
        else if (strategy == "cut") cfg.similarity.strategy = TokenStrategy::Cut;
        else if (!strategy.empty())
            throw std::invalid_argument("similarity.strategy must be origin or cut");
        take(obj, "window_lines", cfg.similarity.window_lines);
        take(obj, "window_stride", cfg.similarity.window_stride);
        take(obj, "top_k", cfg.similarity.top_k);
        take(obj, "jaccard_threshold", cfg.similarity.jaccard_threshold);
        take(obj, "query_context_lines", cfg.similarity.query_context_lines);
        reject_unknown(obj, "similarity");
        root.erase("similarity");
    }
    if (root.contains("index")) {
        auto obj = root["index"];
        take(obj, "capacity", cfg.index.capacity);
        take(obj, "window_lines", cfg.index.window_lines);
        take(obj, "window_stride", cfg.index.window_stride);
        take(obj, "max_file_bytes", cfg.index.max_file_bytes);
        reject_unknown(obj, "index");
        root.erase("index");
    }
    if (root.contains("budgets")) {
        auto obj = root["budgets"];
        take(obj, "max_input_tokens", cfg.budgets.max_input_tokens);
        take(obj, "max_symbol_tokens", cfg.budgets.max_symbol_tokens);
        take(obj, "max_similar_tokens", cfg.budgets.max_similar_tokens);
        take(obj, "max_behavior_tokens", cfg.budgets.max_behavior_tokens);
        take(obj, "reserved_for_file", cfg.budgets.reserved_for_file);
        reject_unknown(obj, "budgets");
        root.erase("budgets");
    }
    if (root.contains("fim")) {
        auto obj = root["fim"];
        take(obj, "prefix_marker", cfg.fim.prefix_marker);
        take(obj, "suffix_marker", cfg.fim.suffix_marker);
        take(obj, "middle_marker", cfg.fim.middle_marker);
        take(obj, "style", cfg.fim.style);
        reject_unknown(obj, "fim");
        root.erase("fim");
    }
    take(root, "max_symbol_entries", cfg.max_symbol_entries);
    take(root, "retriever_deadline_ms", cfg.retriever_deadline_ms);
    reject_unknown(root, "config");
}

}  // namespace

EngineConfig load_config(const std::string& path, const std::string& profile) {
    EngineConfig cfg = EngineConfig::for_profile(profile);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    nlohmann::json root;
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0) {
        root = parse_flat_toml(in);
    } else {
        root = nlohmann::json::parse(in);
    }
    apply_json(cfg, std::move(root));
    cfg.validate();
    return cfg;
}

}  // namespace repoctx
