#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "repoctx/context.hpp"
#include "repoctx/workspace.hpp"

namespace repoctx {

struct BehaviorConfig {
    int recent_files_n = 5;
    int top_k = 2;
    int window_lines = 30;
    int window_stride = 15;
    bool exclude_current_file = true;
    std::size_t retention_cap = 10000;
};

// Append-only cursor history with a bounded ring buffer. record_event may
// run concurrently with retrieval; retrieval copies a point-in-time view.
class BehaviorLog {
public:
    explicit BehaviorLog(std::size_t retention_cap = 10000) : retention_cap_(retention_cap) {}

    // Out-of-order timestamps are clamped to the running maximum.
    void record_event(CursorEvent event);

    std::size_t size() const;
    std::vector<CursorEvent> events_view() const;
    std::optional<std::int64_t> last_seen(const std::string& path) const;

    // Paths by descending last-seen timestamp, `exclude` omitted, at most n.
    std::vector<std::string> recent_files(int n, const std::string& exclude = "") const;

private:
    mutable std::mutex mutex_;
    std::deque<CursorEvent> events_;
    std::map<std::string, std::int64_t> per_file_last_seen_;
    std::int64_t max_timestamp_ = 0;
    std::size_t retention_cap_;

    void rebuild_last_seen_locked();
};

// Top-K sliding windows over the N most recently visited files, scored by
// event containment. Ties break by file recency, then start line;
// overlapping windows of one file keep only the higher-scored one.
std::vector<RetrievedContext> retrieve_behavior_snippets(const BehaviorLog& log,
                                                         const RepoSnapshot& snapshot,
                                                         const CompletionRequest& request,
                                                         const BehaviorConfig& cfg);

}  // namespace repoctx
