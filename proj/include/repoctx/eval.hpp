#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "repoctx/workspace.hpp"

namespace repoctx {

// 100 * (1 - lev(a, b) / max(|a|, |b|)); 100 when both strings are empty.
double edit_similarity(const std::string& a, const std::string& b);

// Runs of whitespace collapsed to single spaces, ends trimmed.
std::string normalize_ws(const std::string& text);

// True iff normalize(label) is a non-empty prefix of normalize(generated):
// trailing content after the right answer still counts as correct.
bool soft_exact_match(const std::string& generated, const std::string& label);

enum class EvalScenario {
    FunctionDefinition,
    IfBlock,
    FunctionCall,
    Expression,
    ReturnStatement,
    ArrowFunction,
    JsxElement,
    JsxAttributes,
    RandomBlock,
};

std::string eval_scenario_name(EvalScenario scenario);
std::optional<EvalScenario> eval_scenario_from_name(const std::string& name);
std::vector<EvalScenario> scenarios_for_language(LanguageId lang);

struct EvalCase {
    std::string id;
    std::string path;
    EvalScenario scenario = EvalScenario::RandomBlock;
    std::string prefix;
    std::string suffix;
    std::string label;
    LanguageId language = LanguageId::Unknown;
};

// Holes for every syntax node of the scenario in the file; cases whose
// label leaks into prefix or suffix are discarded.
std::vector<EvalCase> dig_scenario_holes(const FileRecord& record, LanguageId lang,
                                         EvalScenario scenario);

// Seeded random holes: a uniformly sampled start inside a syntax block,
// extending to the end of the innermost enclosing block.
std::vector<EvalCase> dig_random_holes(const FileRecord& record, LanguageId lang,
                                       std::size_t count, std::uint64_t seed);

struct DatasetReport {
    std::vector<EvalCase> cases;
    std::size_t scenario_count = 0;
    std::size_t random_count = 0;
    std::size_t scenario_shortfall = 0;
    std::size_t random_shortfall = 0;
};

// 1:1 mix of scenario-digging (round-robin across the language's
// scenarios) and random-digging, shuffled deterministically by the seed.
DatasetReport build_dataset(const RepoSnapshot& snapshot, LanguageId lang,
                            std::size_t per_strategy_count, std::uint64_t seed);

struct CaseScore {
    std::string id;
    double edit_similarity = 0.0;
    bool soft_exact_match = false;
    bool missing_prediction = false;
};

struct ScoreReport {
    std::vector<CaseScore> per_case;
    double mean_edit_similarity = 0.0;
    double sem_rate = 0.0;  // percent
    std::size_t incomplete = 0;
};

ScoreReport score_run(const std::vector<EvalCase>& cases,
                      const std::map<std::string, std::string>& predictions);

// Deterministic generation stub used in place of an LLM: echoes the label
// when its evidence string occurs in the prompt, garbage otherwise.
std::string stub_generate(const std::string& prompt_text, const std::string& evidence,
                          const std::string& label);

// JSONL dataset / prediction / report round-trips (External Interfaces).
std::string eval_case_to_json(const EvalCase& c);
std::optional<EvalCase> eval_case_from_json(const std::string& line);
std::string score_report_to_json(const ScoreReport& report);
std::string score_report_table(const ScoreReport& report);

}  // namespace repoctx
