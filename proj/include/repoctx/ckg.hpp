#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "repoctx/context.hpp"
#include "repoctx/workspace.hpp"

namespace repoctx {

enum class SymbolKind { Function, Structure };

std::string symbol_kind_name(SymbolKind kind);

struct SymbolEntry {
    std::string name;
    SymbolKind kind = SymbolKind::Function;
    std::string context;  // function: signature; structure: definition + method signatures
    std::string path;
    int start_line = 1;
    std::string container;  // receiver/owner type, when any

    bool operator==(const SymbolEntry&) const = default;
};

// Per-language static symbol extraction plugin.
class SymbolParser {
public:
    virtual ~SymbolParser() = default;
    virtual std::vector<SymbolEntry> parse(const FileRecord& record) const = 0;
};

const SymbolParser* symbol_parser_for(LanguageId lang);

// Convenience over the plugin registry; unsupported or unparseable files
// yield an empty list.
std::vector<SymbolEntry> parse_symbols(const FileRecord& record, LanguageId lang);

enum class ScenarioKind { FunctionCall, StructInitialization, FunctionBody };

std::string scenario_kind_name(ScenarioKind kind);

struct Scenario {
    ScenarioKind kind = ScenarioKind::FunctionBody;
    std::vector<std::pair<std::string, SymbolKind>> referenced_symbols;
};

// Classifies the cursor position from the request prefix: innermost open
// call argument list → FunctionCall; innermost composite literal →
// StructInitialization; otherwise an open function body → FunctionBody
// with the enclosing function's named parameter types.
std::optional<Scenario> detect_scenario(const CompletionRequest& request);

class CodeKnowledgeGraph {
public:
    void build(const RepoSnapshot& snapshot);
    void incremental_update(const FileRecord& record, LanguageId lang);
    void remove_file(const std::string& path);

    std::vector<SymbolEntry> lookup(const std::string& name, SymbolKind kind) const;
    std::vector<SymbolEntry> file_entries(const std::string& path) const;
    std::size_t size() const;
    std::int64_t generation() const;
    std::vector<std::string> dirty_files() const;

    // All entries in a canonical order (for equivalence checks and dumps).
    std::vector<SymbolEntry> all_entries() const;

    // Test hook: by_name and by_file must hold exactly the same entries.
    void check_consistency() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::pair<std::string, SymbolKind>, std::vector<SymbolEntry>> by_name_;
    std::map<std::string, std::vector<SymbolEntry>> by_file_;
    std::set<std::string> dirty_;
    std::int64_t generation_ = 0;

    void remove_file_locked(const std::string& path);
    void insert_entries_locked(const std::string& path, std::vector<SymbolEntry> entries);
};

// Matching graph entries for a scenario, nearest path first, capped at
// max_entries across all referenced symbols.
std::vector<RetrievedContext> retrieve_symbols(const CodeKnowledgeGraph& graph,
                                               const Scenario& scenario,
                                               const std::string& request_path,
                                               std::size_t max_entries = 4);

}  // namespace repoctx
