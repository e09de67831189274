#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "repoctx/behavior.hpp"
#include "test_support.hpp"

using namespace repoctx;

namespace {

// Independent brute-force oracle: enumerate every window of every recent
// file, score by event containment, sort by (score desc, file recency
// desc, start asc), drop overlaps per file keeping the higher-ranked one.
struct OracleWindow {
    std::string path;
    int start = 0;
    int end = 0;
    int score = 0;
};

std::vector<OracleWindow> oracle(const BehaviorLog& log, const RepoSnapshot& snapshot,
                                 const CompletionRequest& request, const BehaviorConfig& cfg) {
    auto events = log.events_view();
    std::vector<std::pair<std::string, std::int64_t>> last_seen;
    for (const auto& e : events) {
        auto it = std::find_if(last_seen.begin(), last_seen.end(),
                               [&](const auto& p) { return p.first == e.path; });
        if (it == last_seen.end())
            last_seen.emplace_back(e.path, e.timestamp_ms);
        else if (it->second < e.timestamp_ms)
            it->second = e.timestamp_ms;
    }
    std::sort(last_seen.begin(), last_seen.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> recent;
    for (const auto& [path, ts] : last_seen) {
        if (cfg.exclude_current_file && path == request.path) continue;
        recent.push_back(path);
        if (static_cast<int>(recent.size()) == cfg.recent_files_n) break;
    }

    std::vector<std::pair<OracleWindow, int>> all;  // window, file rank
    for (std::size_t rank = 0; rank < recent.size(); ++rank) {
        const FileRecord* rec = snapshot.find(recent[rank]);
        if (!rec) continue;
        int lines = static_cast<int>(rec->line_count);
        for (int start = 1; start <= lines; start += cfg.window_stride) {
            int end = start + cfg.window_lines - 1;
            bool final_window = end >= lines;
            if (final_window) end = lines;
            OracleWindow w{rec->path, start, end, 0};
            for (const auto& e : events)
                if (e.path == w.path && e.line >= start && e.line <= end) ++w.score;
            all.push_back({w, static_cast<int>(rank)});
            if (final_window) break;
        }
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first.score != b.first.score) return a.first.score > b.first.score;
        if (a.second != b.second) return a.second < b.second;
        return a.first.start < b.first.start;
    });
    std::vector<OracleWindow> picked;
    for (const auto& [w, rank] : all) {
        if (static_cast<int>(picked.size()) == cfg.top_k) break;
        if (w.score == 0) continue;
        bool overlap = std::any_of(picked.begin(), picked.end(), [&](const OracleWindow& p) {
            return p.path == w.path && p.start <= w.end && w.start <= p.end;
        });
        if (!overlap) picked.push_back(w);
    }
    return picked;
}

CursorEvent ev(std::int64_t ts, const std::string& path, int line,
               EventKind kind = EventKind::Browse) {
    return CursorEvent{ts, path, line, 1, kind};
}

}  // namespace

TEST_CASE("record_event updates last-seen and clamps out-of-order timestamps") {
    BehaviorLog log;
    log.record_event(ev(100, "f.go", 10));
    CHECK(log.last_seen("f.go") == 100);
    log.record_event(ev(50, "g.go", 1));  // older clock, clamped to 100
    CHECK(log.last_seen("g.go") == 100);
    CHECK(log.size() == 2);
}

TEST_CASE("retention cap expires the oldest events") {
    BehaviorLog log(100);
    for (int i = 0; i < 250; ++i) log.record_event(ev(i, "f" + std::to_string(i % 3), 1));
    CHECK(log.size() == 100);
}

TEST_CASE("recent_files orders by recency and honors exclude") {
    BehaviorLog log;
    log.record_event(ev(1, "a.go", 1));
    log.record_event(ev(2, "b.go", 1));
    log.record_event(ev(3, "a.go", 2));
    CHECK(log.recent_files(5) == std::vector<std::string>{"a.go", "b.go"});
    CHECK(log.recent_files(5, "a.go") == std::vector<std::string>{"b.go"});
    CHECK(log.recent_files(1) == std::vector<std::string>{"a.go"});
    CHECK(BehaviorLog().recent_files(5).empty());
}

TEST_CASE("recent_files keeps only the n most recent of many files") {
    BehaviorLog log;
    for (int i = 0; i < 7; ++i) log.record_event(ev(i, "f" + std::to_string(i) + ".go", 1));
    auto recent = log.recent_files(5);
    REQUIRE(recent.size() == 5);
    CHECK(recent.front() == "f6.go");
    CHECK(recent.back() == "f2.go");
}

TEST_CASE("single window collects every event inside it") {
    RepoSnapshot snapshot("/mem");
    std::string content;
    for (int i = 0; i < 20; ++i) content += "line\n";
    snapshot.apply_file_change("f.go", content);
    BehaviorLog log;
    for (int i = 0; i < 6; ++i) log.record_event(ev(i, "f.go", 1 + i * 3));
    CompletionRequest request;
    request.path = "other.go";
    auto out = retrieve_behavior_snippets(log, snapshot, request, BehaviorConfig{});
    REQUIRE(out.size() == 1);
    CHECK(out[0].score == doctest::Approx(6));
    CHECK(out[0].kind == ContextKind::Behavior);
}

TEST_CASE("densest window wins") {
    RepoSnapshot snapshot("/mem");
    std::string content;
    for (int i = 0; i < 90; ++i) content += "line\n";
    snapshot.apply_file_change("f.go", content);
    BehaviorLog log;
    for (int i = 0; i < 5; ++i) log.record_event(ev(i, "f.go", 40 + i * 3));  // lines 40..52
    log.record_event(ev(10, "f.go", 2));
    log.record_event(ev(11, "f.go", 8));
    BehaviorConfig cfg;
    cfg.top_k = 1;
    CompletionRequest request;
    request.path = "other.go";
    auto out = retrieve_behavior_snippets(log, snapshot, request, cfg);
    REQUIRE(out.size() == 1);
    CHECK(out[0].source_start_line == 31);
    CHECK(out[0].source_end_line == 60);
    CHECK(out[0].score == doctest::Approx(5));
}

TEST_CASE("empty log retrieves nothing") {
    RepoSnapshot snapshot("/mem");
    snapshot.apply_file_change("f.go", "x\n");
    CompletionRequest request;
    request.path = "f.go";
    CHECK(retrieve_behavior_snippets(BehaviorLog(), snapshot, request, BehaviorConfig{}).empty());
}

TEST_CASE("current file is excluded when configured") {
    RepoSnapshot snapshot("/mem");
    snapshot.apply_file_change("f.go", "x\ny\n");
    BehaviorLog log;
    log.record_event(ev(1, "f.go", 1));
    CompletionRequest request;
    request.path = "f.go";
    CHECK(retrieve_behavior_snippets(log, snapshot, request, BehaviorConfig{}).empty());
    BehaviorConfig keep;
    keep.exclude_current_file = false;
    CHECK(retrieve_behavior_snippets(log, snapshot, request, keep).size() == 1);
}

TEST_CASE("ranking matches the brute-force oracle on random logs and repos") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 120; ++round) {
        RepoSnapshot snapshot = testing::random_snapshot(rng, 8, 70);
        std::vector<std::string> paths;
        for (const auto& [p, r] : snapshot.files()) paths.push_back(p);
        BehaviorLog log;
        std::int64_t ts = 0;
        int events = static_cast<int>(rng() % 60);
        for (int i = 0; i < events; ++i) {
            const std::string& path = paths[rng() % paths.size()];
            int lines = static_cast<int>(snapshot.find(path)->line_count);
            log.record_event(ev(ts += rng() % 3, path, 1 + static_cast<int>(rng() % lines),
                                rng() % 2 ? EventKind::Edit : EventKind::Browse));
        }
        BehaviorConfig cfg;
        cfg.recent_files_n = 1 + static_cast<int>(rng() % 5);
        cfg.top_k = 1 + static_cast<int>(rng() % 4);
        cfg.window_lines = 10 + static_cast<int>(rng() % 25);
        cfg.window_stride = 1 + static_cast<int>(rng() % cfg.window_lines);
        CompletionRequest request;
        request.path = paths[rng() % paths.size()];

        auto actual = retrieve_behavior_snippets(log, snapshot, request, cfg);
        auto expected = oracle(log, snapshot, request, cfg);
        REQUIRE(actual.size() == expected.size());
        for (std::size_t i = 0; i < actual.size(); ++i) {
            CHECK(actual[i].source_path == expected[i].path);
            CHECK(actual[i].source_start_line == expected[i].start);
            CHECK(actual[i].source_end_line == expected[i].end);
            CHECK(actual[i].score == doctest::Approx(expected[i].score));
        }
        // scores never increase down the list; own file never returned
        for (std::size_t i = 1; i < actual.size(); ++i)
            CHECK(actual[i - 1].score >= actual[i].score);
        for (const auto& ctx : actual) CHECK(ctx.source_path != request.path);
    }
}
