#pragma once

#include <optional>
#include <string>

#include "repoctx/behavior.hpp"
#include "repoctx/fusion.hpp"
#include "repoctx/index_cache.hpp"
#include "repoctx/similarity.hpp"

namespace repoctx {

struct EngineConfig {
    BehaviorConfig behavior;
    SimilarityConfig similarity;
    IndexConfig index;
    TokenBudgets budgets;
    FimTemplate fim;
    std::size_t max_symbol_entries = 4;
    int retriever_deadline_ms = 150;
    std::string profile = "default_4k";

    // Throws std::invalid_argument when any module invariant fails.
    void validate() const;

    static EngineConfig default_4k();
    static EngineConfig extended_8k();
    static EngineConfig for_profile(const std::string& profile);
};

// Reads a .json or .toml config (flat TOML: [section] plus key = value).
// Unknown keys are rejected so typos never silently fall back to defaults.
EngineConfig load_config(const std::string& path,
                         const std::string& profile = "default_4k");

}  // namespace repoctx
