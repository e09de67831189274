#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "repoctx/engine.hpp"
#include "repoctx/eval.hpp"

namespace {

using nlohmann::json;
using namespace repoctx;

int log_level() {
    const char* env = std::getenv("REPOCTX_LOG");
    if (!env) return 1;
    std::string v = env;
    if (v == "debug") return 2;
    if (v == "quiet" || v == "0") return 0;
    return 1;
}

void log_line(const std::string& message) {
    if (log_level() > 0) std::cerr << "repoctx: " << message << "\n";
}

json stats_to_json(const IndexStats& stats, const Engine& engine) {
    json j;
    j["indexed_files"] = stats.indexed_files;
    j["snippet_count"] = stats.snippet_count;
    j["generation"] = stats.generation;
    j["last_cycle_ms"] = stats.last_cycle_ms;
    j["graph_entries"] = engine.graph_size();
    return j;
}

json contexts_to_json(const std::vector<RetrievedContext>& contexts) {
    json arr = json::array();
    for (const auto& ctx : contexts) {
        json e;
        e["kind"] = context_kind_name(ctx.kind);
        e["score"] = ctx.score;
        e["content"] = ctx.content;
        e["source"] = {{"path", ctx.source_path},
                       {"start_line", ctx.source_start_line},
                       {"end_line", ctx.source_end_line}};
        e["token_estimate"] = ctx.token_estimate;
        arr.push_back(std::move(e));
    }
    return arr;
}

CompletionRequest request_from_json(const json& j) {
    CompletionRequest request;
    request.path = j.at("path").get<std::string>();
    if (j.contains("cursor")) {
        request.cursor.line = j["cursor"].value("line", 1);
        request.cursor.column = j["cursor"].value("col", 1);
    }
    request.prefix = j.value("prefix", "");
    request.suffix = j.value("suffix", "");
    request.language = language_from_name(j.value("language", ""));
    if (request.language == LanguageId::Unknown)
        request.language = language_from_path(request.path);
    return request;
}

json run_query(Engine& engine, const json& request_json) {
    CompletionRequest request = request_from_json(request_json);
    QueryResponse response = engine.query(request);
    json j;
    j["contexts"] = contexts_to_json(response.contexts);
    j["prompt"] = response.prompt.text;
    j["timings_ms"] = {{"behavior", response.timings.behavior_ms},
                       {"similar", response.timings.similar_ms},
                       {"symbol", response.timings.symbol_ms},
                       {"total", response.timings.total_ms}};
    if (response.prompt.truncated) j["truncated"] = true;
    if (response.prompt.contexts_dropped) j["contexts_dropped"] = true;
    return j;
}

EngineConfig resolve_config(const std::string& config_path, const std::string& profile) {
    if (!config_path.empty()) return load_config(config_path, profile);
    return EngineConfig::for_profile(profile);
}

int serve_stdio(Engine& engine) {
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        json response;
        json id = nullptr;
        try {
            json request = json::parse(line);
            id = request.value("id", json(nullptr));
            std::string op = request.at("op").get<std::string>();
            if (op == "shutdown") {
                response = {{"id", id}, {"ok", true}};
                std::cout << response.dump() << "\n" << std::flush;
                return 0;
            }
            if (op == "event") {
                if (request.contains("content")) {
                    // file-change event
                    engine.handle_file_change(request.at("path").get<std::string>(),
                                              request.at("content").get<std::string>());
                } else if (request.value("removed", false)) {
                    engine.handle_file_removal(request.at("path").get<std::string>());
                } else {
                    CursorEvent event;
                    event.timestamp_ms = request.at("ts").get<std::int64_t>();
                    event.path = request.at("path").get<std::string>();
                    event.line = request.at("line").get<int>();
                    event.column = request.value("col", 1);
                    event.kind = request.value("kind", "browse") == "edit" ? EventKind::Edit
                                                                           : EventKind::Browse;
                    engine.handle_cursor_event(event);
                }
                response = {{"id", id}, {"ok", true}};
            } else if (op == "query") {
                response = run_query(engine, request);
                response["id"] = id;
                response["ok"] = true;
            } else if (op == "stats") {
                response = stats_to_json(engine.index_stats(), engine);
                response["id"] = id;
                response["ok"] = true;
            } else {
                response = {{"id", id}, {"ok", false}, {"error", "unknown op: " + op}};
            }
        } catch (const std::exception& e) {
            response = {{"id", id}, {"ok", false}, {"error", e.what()}};
        }
        std::cout << response.dump() << "\n" << std::flush;
    }
    return 0;
}

int cmd_eval_dig(const std::string& repo, const std::string& language_name,
                 std::size_t count, std::uint64_t seed, const std::string& out_path) {
    Engine engine;
    engine.init_from_disk(repo);
    LanguageId lang = language_from_name(language_name);
    if (lang == LanguageId::Unknown) {
        std::cerr << "unsupported language: " << language_name << "\n";
        return 2;
    }
    DatasetReport report = build_dataset(engine.snapshot(), lang, count / 2, seed);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty() && out_path != "-") {
        file.open(out_path);
        if (!file) {
            std::cerr << "cannot write " << out_path << "\n";
            return 2;
        }
        out = &file;
    }
    for (const auto& c : report.cases) *out << eval_case_to_json(c) << "\n";
    log_line("dug " + std::to_string(report.cases.size()) + " cases (" +
             std::to_string(report.scenario_count) + " scenario, " +
             std::to_string(report.random_count) + " random)");
    if (report.scenario_shortfall || report.random_shortfall)
        log_line("shortfall: scenario " + std::to_string(report.scenario_shortfall) +
                 ", random " + std::to_string(report.random_shortfall));
    return 0;
}

int cmd_eval_score(const std::string& cases_path, const std::string& predictions_path,
                   const std::string& report_path) {
    std::ifstream cases_in(cases_path);
    if (!cases_in) {
        std::cerr << "cannot read " << cases_path << "\n";
        return 2;
    }
    std::vector<EvalCase> cases;
    std::string line;
    while (std::getline(cases_in, line)) {
        if (line.empty()) continue;
        auto c = eval_case_from_json(line);
        if (!c) {
            std::cerr << "malformed case line\n";
            return 2;
        }
        cases.push_back(std::move(*c));
    }
    std::ifstream pred_in(predictions_path);
    if (!pred_in) {
        std::cerr << "cannot read " << predictions_path << "\n";
        return 2;
    }
    std::map<std::string, std::string> predictions;
    while (std::getline(pred_in, line)) {
        if (line.empty()) continue;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("id") || !j.contains("output")) {
            std::cerr << "malformed prediction line\n";
            return 2;
        }
        predictions[j["id"].get<std::string>()] = j["output"].get<std::string>();
    }
    ScoreReport report = score_run(cases, predictions);
    std::string rendered = score_report_to_json(report);
    if (!report_path.empty() && report_path != "-") {
        std::ofstream out(report_path);
        out << rendered << "\n";
    } else {
        std::cout << rendered << "\n";
    }
    std::cerr << score_report_table(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"repository context retrieval engine for code completion"};
    app.require_subcommand(1);

    std::string config_path;
    std::string profile = "default_4k";
    app.add_option("--config", config_path, "engine config file (.json or .toml)");
    app.add_option("--profile", profile, "default_4k or extended_8k");

    std::string repo_path;
    auto* index_cmd = app.add_subcommand("index", "index a repository and print stats");
    index_cmd->add_option("path", repo_path, "repository root")->required();

    std::string query_repo, request_path = "-";
    auto* query_cmd = app.add_subcommand("query", "one-shot context query");
    query_cmd->add_option("path", query_repo, "repository root")->required();
    query_cmd->add_option("--request", request_path, "request JSON file, or - for stdin");

    std::string serve_repo;
    auto* serve_cmd = app.add_subcommand("serve", "newline-delimited JSON service on stdio");
    serve_cmd->add_option("path", serve_repo, "repository root")->required();

    auto* eval_cmd = app.add_subcommand("eval", "dataset digging and scoring");
    eval_cmd->require_subcommand(1);
    std::string dig_repo, dig_lang = "go", dig_out;
    std::size_t dig_count = 100;
    std::uint64_t dig_seed = 0;
    auto* dig_cmd = eval_cmd->add_subcommand("dig", "build a hole-digging dataset (JSONL)");
    dig_cmd->add_option("path", dig_repo, "repository root")->required();
    dig_cmd->add_option("--language", dig_lang, "go | python | typescript");
    dig_cmd->add_option("--count", dig_count, "total cases (1:1 scenario/random mix)");
    dig_cmd->add_option("--seed", dig_seed, "dataset seed");
    dig_cmd->add_option("--out", dig_out, "output file (default stdout)");

    std::string score_cases, score_preds, score_out;
    auto* score_cmd = eval_cmd->add_subcommand("score", "score predictions against a dataset");
    score_cmd->add_option("--cases", score_cases, "dataset JSONL")->required();
    score_cmd->add_option("--predictions", score_preds, "predictions JSONL")->required();
    score_cmd->add_option("--report", score_out, "report JSON output (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        EngineConfig config = resolve_config(config_path, profile);

        if (*index_cmd) {
            if (!std::filesystem::exists(repo_path)) {
                std::cerr << "no such path: " << repo_path << "\n";
                return 2;
            }
            Engine engine(config);
            IndexStats stats = engine.init_from_disk(repo_path);
            std::cout << stats_to_json(stats, engine).dump() << "\n";
            return 0;
        }
        if (*query_cmd) {
            Engine engine(config);
            engine.init_from_disk(query_repo);
            json request;
            if (request_path == "-") {
                request = json::parse(std::cin);
            } else {
                std::ifstream in(request_path);
                if (!in) {
                    std::cerr << "cannot read " << request_path << "\n";
                    return 2;
                }
                request = json::parse(in);
            }
            std::cout << run_query(engine, request).dump() << "\n";
            return 0;
        }
        if (*serve_cmd) {
            Engine engine(config);
            engine.init_from_disk(serve_repo);
            log_line("serving on stdio");
            return serve_stdio(engine);
        }
        if (*dig_cmd) return cmd_eval_dig(dig_repo, dig_lang, dig_count, dig_seed, dig_out);
        if (*score_cmd) return cmd_eval_score(score_cases, score_preds, score_out);
    } catch (const json::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
