#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "repoctx/eval.hpp"
#include "test_support.hpp"

using namespace repoctx;

namespace {

// Full-matrix Levenshtein oracle, written independently of the two-row
// implementation under test.
std::size_t oracle_levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                            std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

std::string random_string(std::mt19937_64& rng, std::size_t max_len) {
    static const char alphabet[] = "abcX_ \n({";
    std::string s;
    std::size_t len = rng() % (max_len + 1);
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % (sizeof(alphabet) - 1)];
    return s;
}

FileRecord go_file(const std::string& path, const std::string& content) {
    FileRecord rec;
    rec.path = path;
    rec.content = content;
    rec.version = 1;
    rec.line_count = split_lines(content).size();
    return rec;
}

const char* kGoSource =
    "package demo\n"
    "\n"
    "func add(a, b int) int {\n"
    "    if a > b {\n"
    "        return a + b\n"
    "    }\n"
    "    total := a * b\n"
    "    return total\n"
    "}\n"
    "\n"
    "func use() {\n"
    "    result := add(3, 4)\n"
    "    print(result)\n"
    "}\n";

}  // namespace

TEST_CASE("edit similarity on worked examples") {
    CHECK(edit_similarity("", "") == doctest::Approx(100.0));
    CHECK(edit_similarity("abc", "abc") == doctest::Approx(100.0));
    CHECK(edit_similarity("abc", "") == doctest::Approx(0.0));
    // lev(kitten, sitting) = 3, max len 7 → 100 * (1 - 3/7)
    CHECK(edit_similarity("kitten", "sitting") == doctest::Approx(100.0 * 4.0 / 7.0));
}

TEST_CASE("edit similarity matches the full-matrix oracle") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 1000; ++i) {
        std::string a = random_string(rng, 40);
        std::string b = random_string(rng, 40);
        std::size_t lev = oracle_levenshtein(a, b);
        double expected = (a.empty() && b.empty())
                              ? 100.0
                              : 100.0 * (1.0 - static_cast<double>(lev) /
                                                   static_cast<double>(std::max(a.size(),
                                                                                b.size())));
        CHECK(edit_similarity(a, b) == doctest::Approx(expected));
        CHECK(edit_similarity(a, b) == doctest::Approx(edit_similarity(b, a)));
        CHECK(edit_similarity(a, a) == doctest::Approx(100.0));
    }
}

TEST_CASE("whitespace normalization") {
    CHECK(normalize_ws("") == "");
    CHECK(normalize_ws("  a\t b\n\nc ") == "a b c");
    CHECK(normalize_ws("one") == "one");
}

TEST_CASE("soft exact match truth table") {
    CHECK(soft_exact_match("return a + b", "return a + b"));
    CHECK(soft_exact_match("return  a +\n b", "return a + b"));       // whitespace-insensitive
    CHECK(soft_exact_match("return a + b\n}\nfunc next()", "return a + b"));  // extra tail ok
    CHECK_FALSE(soft_exact_match("return a - b", "return a + b"));
    CHECK_FALSE(soft_exact_match("", "return a + b"));
    CHECK_FALSE(soft_exact_match("retur", "return a + b"));  // partial answer is not a match
    CHECK_FALSE(soft_exact_match("anything", ""));           // empty label never matches
}

TEST_CASE("scenario sets per language") {
    auto go = scenarios_for_language(LanguageId::Go);
    CHECK(std::count(go.begin(), go.end(), EvalScenario::FunctionDefinition) == 1);
    CHECK(std::count(go.begin(), go.end(), EvalScenario::JsxElement) == 0);
    auto ts = scenarios_for_language(LanguageId::TypeScript);
    CHECK(std::count(ts.begin(), ts.end(), EvalScenario::ArrowFunction) == 1);
    CHECK(std::count(ts.begin(), ts.end(), EvalScenario::JsxElement) == 1);
}

TEST_CASE("scenario names round-trip") {
    for (EvalScenario s :
         {EvalScenario::FunctionDefinition, EvalScenario::IfBlock, EvalScenario::FunctionCall,
          EvalScenario::Expression, EvalScenario::ReturnStatement, EvalScenario::ArrowFunction,
          EvalScenario::JsxElement, EvalScenario::JsxAttributes, EvalScenario::RandomBlock}) {
        auto back = eval_scenario_from_name(eval_scenario_name(s));
        REQUIRE(back.has_value());
        CHECK(*back == s);
    }
    CHECK_FALSE(eval_scenario_from_name("bogus").has_value());
}

TEST_CASE("holes reconstruct the source and never leak the label") {
    FileRecord rec = go_file("demo/a.go", kGoSource);
    for (EvalScenario scenario : scenarios_for_language(LanguageId::Go)) {
        for (const auto& c : dig_scenario_holes(rec, LanguageId::Go, scenario)) {
            CHECK(c.prefix + c.label + c.suffix == rec.content);
            CHECK_FALSE(normalize_ws(c.label).empty());
            CHECK(c.prefix.find(normalize_ws(c.label)) == std::string::npos);
            CHECK(c.scenario == scenario);
            CHECK(c.language == LanguageId::Go);
        }
    }
}

TEST_CASE("function-definition holes cover the body") {
    FileRecord rec = go_file("demo/a.go", kGoSource);
    auto cases = dig_scenario_holes(rec, LanguageId::Go, EvalScenario::FunctionDefinition);
    REQUIRE_FALSE(cases.empty());
    bool found = false;
    for (const auto& c : cases)
        if (normalize_ws(c.label).find("total := a * b") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("call holes cover arguments of calls, not definitions") {
    FileRecord rec = go_file("demo/a.go", kGoSource);
    auto cases = dig_scenario_holes(rec, LanguageId::Go, EvalScenario::FunctionCall);
    REQUIRE_FALSE(cases.empty());
    for (const auto& c : cases) {
        CHECK(normalize_ws(c.label) != "a, b int");  // parameter list is not a call
    }
    bool found = false;
    for (const auto& c : cases)
        if (normalize_ws(c.label) == "3, 4") found = true;
    CHECK(found);
}

TEST_CASE("random holes are seeded and reconstruct the source") {
    FileRecord rec = go_file("demo/a.go", kGoSource);
    auto a = dig_random_holes(rec, LanguageId::Go, 5, 42);
    auto b = dig_random_holes(rec, LanguageId::Go, 5, 42);
    auto c = dig_random_holes(rec, LanguageId::Go, 5, 43);
    REQUIRE_FALSE(a.empty());
    REQUIRE(a.size() == b.size());
    bool all_equal = true;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].prefix != b[i].prefix || a[i].label != b[i].label) all_equal = false;
    CHECK(all_equal);
    bool any_differs = a.size() != c.size();
    for (std::size_t i = 0; i < std::min(a.size(), c.size()); ++i)
        if (a[i].label != c[i].label) any_differs = true;
    CHECK(any_differs);
    for (const auto& cs : a) CHECK(cs.prefix + cs.label + cs.suffix == rec.content);
}

TEST_CASE("dataset mixes strategies 1:1 and is byte-deterministic") {
    std::mt19937_64 rng(9);
    RepoSnapshot snapshot("/mem");
    for (int i = 0; i < 6; ++i) {
        std::string src = "package p\n\n";
        for (int f = 0; f < 4; ++f) {
            src += "func fn" + std::to_string(i) + "_" + std::to_string(f) +
                   "(x int) int {\n    if x > " + std::to_string(f) +
                   " {\n        return x + " + std::to_string(f) +
                   "\n    }\n    y := call" + std::to_string(f) + "(x, " + std::to_string(i) +
                   ")\n    return y\n}\n\n";
        }
        snapshot.apply_file_change("pkg" + std::to_string(i) + "/f.go", src);
    }
    auto report = build_dataset(snapshot, LanguageId::Go, 20, 1234);
    CHECK(report.scenario_count == 20);
    CHECK(report.random_count == 20);
    CHECK(report.cases.size() == 40);
    CHECK(report.scenario_shortfall == 0);
    CHECK(report.random_shortfall == 0);

    std::set<std::string> ids;
    for (const auto& c : report.cases) ids.insert(c.id);
    CHECK(ids.size() == report.cases.size());

    std::string jsonl_a, jsonl_b;
    for (const auto& c : report.cases) jsonl_a += eval_case_to_json(c) + "\n";
    for (const auto& c : build_dataset(snapshot, LanguageId::Go, 20, 1234).cases)
        jsonl_b += eval_case_to_json(c) + "\n";
    CHECK(jsonl_a == jsonl_b);

    auto other = build_dataset(snapshot, LanguageId::Go, 20, 99);
    std::string jsonl_c;
    for (const auto& c : other.cases) jsonl_c += eval_case_to_json(c) + "\n";
    CHECK(jsonl_a != jsonl_c);
}

TEST_CASE("dataset reports shortfalls on tiny corpora") {
    RepoSnapshot snapshot("/mem");
    snapshot.apply_file_change("a.go", "package a\n\nfunc one() int {\n    return 1\n}\n");
    auto report = build_dataset(snapshot, LanguageId::Go, 500, 7);
    CHECK(report.cases.size() < 1000);
    CHECK(report.scenario_shortfall + report.random_shortfall > 0);
    CHECK(report.scenario_count + report.random_count == report.cases.size());
}

TEST_CASE("eval cases round-trip through JSONL") {
    EvalCase c;
    c.id = "case-00001";
    c.path = "pkg/f.go";
    c.scenario = EvalScenario::ReturnStatement;
    c.prefix = "func f() int {\n    ";
    c.suffix = "\n}\n";
    c.label = "return 42";
    c.language = LanguageId::Go;
    auto back = eval_case_from_json(eval_case_to_json(c));
    REQUIRE(back.has_value());
    CHECK(back->id == c.id);
    CHECK(back->path == c.path);
    CHECK(back->scenario == c.scenario);
    CHECK(back->prefix == c.prefix);
    CHECK(back->suffix == c.suffix);
    CHECK(back->label == c.label);
    CHECK(back->language == c.language);
    CHECK_FALSE(eval_case_from_json("not json").has_value());
}

TEST_CASE("scoring aggregates ES, SEM and missing predictions") {
    EvalCase a, b, c;
    a.id = "a";
    a.label = "return x + 1";
    b.id = "b";
    b.label = "return y";
    c.id = "c";
    c.label = "return z";
    std::map<std::string, std::string> predictions = {
        {"a", "return x + 1"},       // exact
        {"b", "return   y\n}\n"},    // soft match with tail
    };                               // c missing
    auto report = score_run({a, b, c}, predictions);
    REQUIRE(report.per_case.size() == 3);
    CHECK(report.per_case[0].soft_exact_match);
    CHECK(report.per_case[0].edit_similarity == doctest::Approx(100.0));
    CHECK(report.per_case[1].soft_exact_match);
    CHECK(report.per_case[2].missing_prediction);
    CHECK(report.per_case[2].edit_similarity == doctest::Approx(0.0));
    CHECK(report.incomplete == 1);
    CHECK(report.sem_rate == doctest::Approx(100.0 * 2.0 / 3.0));
    double es0 = report.per_case[0].edit_similarity;
    double es1 = report.per_case[1].edit_similarity;
    CHECK(report.mean_edit_similarity == doctest::Approx((es0 + es1 + 0.0) / 3.0));
}

TEST_CASE("generation stub keys on evidence in the prompt") {
    CHECK(stub_generate("prompt with NEEDLE inside", "NEEDLE", "the label") == "the label");
    CHECK(stub_generate("prompt without it", "NEEDLE", "the label") != "the label");
    CHECK_FALSE(soft_exact_match(stub_generate("nope", "NEEDLE", "lbl"), "lbl"));
}
