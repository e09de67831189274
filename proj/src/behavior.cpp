#include "repoctx/behavior.hpp"

#include <algorithm>

#include "repoctx/chunk.hpp"
#include "repoctx/fusion.hpp"

namespace repoctx {

void BehaviorLog::record_event(CursorEvent event) {
    std::lock_guard lock(mutex_);
    if (event.timestamp_ms < max_timestamp_) event.timestamp_ms = max_timestamp_;
    max_timestamp_ = event.timestamp_ms;
    events_.push_back(event);
    auto it = per_file_last_seen_.find(event.path);
    if (it == per_file_last_seen_.end() || it->second < event.timestamp_ms)
        per_file_last_seen_[event.path] = event.timestamp_ms;
    if (events_.size() > retention_cap_) {
        events_.pop_front();
        rebuild_last_seen_locked();
    }
}

void BehaviorLog::rebuild_last_seen_locked() {
    per_file_last_seen_.clear();
    for (const auto& e : events_) {
        auto it = per_file_last_seen_.find(e.path);
        if (it == per_file_last_seen_.end() || it->second < e.timestamp_ms)
            per_file_last_seen_[e.path] = e.timestamp_ms;
    }
}

std::size_t BehaviorLog::size() const {
    std::lock_guard lock(mutex_);
    return events_.size();
}

std::vector<CursorEvent> BehaviorLog::events_view() const {
    std::lock_guard lock(mutex_);
    return {events_.begin(), events_.end()};
}

std::optional<std::int64_t> BehaviorLog::last_seen(const std::string& path) const {
    std::lock_guard lock(mutex_);
    auto it = per_file_last_seen_.find(path);
    if (it == per_file_last_seen_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> BehaviorLog::recent_files(int n, const std::string& exclude) const {
    std::lock_guard lock(mutex_);
    std::vector<std::pair<std::string, std::int64_t>> paths(per_file_last_seen_.begin(),
                                                            per_file_last_seen_.end());
    std::stable_sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> out;
    for (const auto& [path, ts] : paths) {
        if (path == exclude) continue;
        out.push_back(path);
        if (static_cast<int>(out.size()) == n) break;
    }
    return out;
}

std::vector<RetrievedContext> retrieve_behavior_snippets(const BehaviorLog& log,
                                                         const RepoSnapshot& snapshot,
                                                         const CompletionRequest& request,
                                                         const BehaviorConfig& cfg) {
    std::string exclude = cfg.exclude_current_file ? request.path : "";
    std::vector<std::string> files = log.recent_files(cfg.recent_files_n, exclude);
    std::vector<CursorEvent> events = log.events_view();

    struct Candidate {
        std::string path;
        LineWindow window;
        int score;
        int file_rank;  // lower = more recent
    };
    std::vector<Candidate> candidates;
    for (std::size_t rank = 0; rank < files.size(); ++rank) {
        const FileRecord* rec = snapshot.find(files[rank]);
        if (!rec) continue;  // visited file no longer exists
        for (const auto& w : sliding_windows(rec->line_count, cfg.window_lines,
                                             cfg.window_stride)) {
            int score = 0;
            for (const auto& e : events)
                if (e.path == rec->path && e.line >= w.start_line && e.line <= w.end_line)
                    ++score;
            if (score > 0)
                candidates.push_back({rec->path, w, score, static_cast<int>(rank)});
        }
    }

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.file_rank != b.file_rank) return a.file_rank < b.file_rank;
        return a.window.start_line < b.window.start_line;
    });

    std::vector<RetrievedContext> out;
    std::vector<Candidate> accepted;
    for (const auto& c : candidates) {
        if (static_cast<int>(out.size()) == cfg.top_k) break;
        bool overlaps = std::any_of(accepted.begin(), accepted.end(), [&](const Candidate& a) {
            return a.path == c.path && a.window.start_line <= c.window.end_line &&
                   c.window.start_line <= a.window.end_line;
        });
        if (overlaps) continue;
        accepted.push_back(c);
        Snippet snip = slice_lines(*snapshot.find(c.path), c.window.start_line, c.window.end_line);
        RetrievedContext ctx;
        ctx.kind = ContextKind::Behavior;
        ctx.content = snip.content;
        ctx.score = c.score;
        ctx.source_path = snip.path;
        ctx.source_start_line = snip.start_line;
        ctx.source_end_line = snip.end_line;
        ctx.token_estimate = count_tokens(ctx.content);
        out.push_back(std::move(ctx));
    }
    return out;
}

}  // namespace repoctx
