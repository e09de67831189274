#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "repoctx/engine.hpp"
#include "repoctx/eval.hpp"

namespace py = pybind11;
using namespace repoctx;

namespace {

CompletionRequest request_from_kwargs(const std::string& path, const std::string& prefix,
                                      const std::string& suffix, int line, int column,
                                      const std::string& language) {
    CompletionRequest request;
    request.path = path;
    request.prefix = prefix;
    request.suffix = suffix;
    request.cursor.line = line;
    request.cursor.column = column;
    request.language = language.empty() ? language_from_path(path)
                                        : language_from_name(language);
    return request;
}

py::dict context_to_dict(const RetrievedContext& ctx) {
    py::dict d;
    d["kind"] = context_kind_name(ctx.kind);
    d["content"] = ctx.content;
    d["score"] = ctx.score;
    d["path"] = ctx.source_path;
    d["start_line"] = ctx.source_start_line;
    d["end_line"] = ctx.source_end_line;
    d["token_estimate"] = ctx.token_estimate;
    return d;
}

py::dict response_to_dict(const QueryResponse& response) {
    py::list contexts;
    for (const auto& ctx : response.contexts) contexts.append(context_to_dict(ctx));
    py::dict timings;
    timings["behavior_ms"] = response.timings.behavior_ms;
    timings["similar_ms"] = response.timings.similar_ms;
    timings["symbol_ms"] = response.timings.symbol_ms;
    timings["total_ms"] = response.timings.total_ms;
    py::dict d;
    d["contexts"] = contexts;
    d["prompt"] = response.prompt.text;
    d["truncated"] = response.prompt.truncated;
    d["contexts_dropped"] = response.prompt.contexts_dropped;
    d["timings"] = timings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_repoctx, m) {
    m.doc() = "repository context retrieval engine for code completion";

    m.def(
        "tokenize",
        [](const std::string& text, const std::string& strategy, const std::string& language) {
            TokenStrategy s = strategy == "origin" ? TokenStrategy::Origin : TokenStrategy::Cut;
            return tokenize(text, s, language_from_name(language)).tokens;
        },
        py::arg("text"), py::arg("strategy") = "cut", py::arg("language") = "",
        "Deduplicated sorted tokens of a code fragment.");

    m.def(
        "jaccard",
        [](const std::string& a, const std::string& b, const std::string& strategy,
           const std::string& language) {
            TokenStrategy s = strategy == "origin" ? TokenStrategy::Origin : TokenStrategy::Cut;
            LanguageId lang = language_from_name(language);
            return jaccard(tokenize(a, s, lang), tokenize(b, s, lang));
        },
        py::arg("a"), py::arg("b"), py::arg("strategy") = "cut", py::arg("language") = "",
        "Jaccard similarity of two fragments' token sets.");

    m.def("count_tokens", &count_tokens, py::arg("text"),
          "Deterministic token count used for prompt budgeting.");
    m.def("edit_similarity", &edit_similarity, py::arg("a"), py::arg("b"),
          "100 * (1 - levenshtein / max length).");
    m.def("soft_exact_match", &soft_exact_match, py::arg("generated"), py::arg("label"),
          "Whitespace-insensitive prefix match.");
    m.def("normalize_ws", &normalize_ws, py::arg("text"));

    py::class_<Engine>(m, "Engine")
        .def(py::init([](const std::string& profile) {
                 return new Engine(EngineConfig::for_profile(profile));
             }),
             py::arg("profile") = "default_4k")
        .def(
            "init_from_disk",
            [](Engine& self, const std::string& repo_path) {
                IndexStats stats = self.init_from_disk(repo_path);
                py::dict d;
                d["indexed_files"] = stats.indexed_files;
                d["snippet_count"] = stats.snippet_count;
                d["graph_entries"] = self.graph_size();
                return d;
            },
            py::arg("repo_path"))
        .def(
            "cursor_event",
            [](Engine& self, std::int64_t ts, const std::string& path, int line, int column,
               const std::string& kind) {
                self.handle_cursor_event(
                    {ts, path, line, column,
                     kind == "edit" ? EventKind::Edit : EventKind::Browse});
            },
            py::arg("ts"), py::arg("path"), py::arg("line"), py::arg("column") = 1,
            py::arg("kind") = "browse")
        .def("file_change", &Engine::handle_file_change, py::arg("path"), py::arg("content"))
        .def("file_removal", &Engine::handle_file_removal, py::arg("path"))
        .def(
            "query",
            [](Engine& self, const std::string& path, const std::string& prefix,
               const std::string& suffix, int line, int column, const std::string& language) {
                return response_to_dict(self.query(
                    request_from_kwargs(path, prefix, suffix, line, column, language)));
            },
            py::arg("path"), py::arg("prefix") = "", py::arg("suffix") = "",
            py::arg("line") = 1, py::arg("column") = 1, py::arg("language") = "");

    m.def(
        "dig_dataset",
        [](const std::string& repo_path, const std::string& language, std::size_t count,
           std::uint64_t seed) {
            Engine engine;
            engine.init_from_disk(repo_path);
            DatasetReport report =
                build_dataset(engine.snapshot(), language_from_name(language), count / 2, seed);
            py::list cases;
            for (const auto& c : report.cases) cases.append(eval_case_to_json(c));
            return cases;
        },
        py::arg("repo_path"), py::arg("language") = "go", py::arg("count") = 100,
        py::arg("seed") = 0, "Hole-digging dataset as JSONL lines.");
}
