#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "repoctx/chunk.hpp"
#include "repoctx/tokenize.hpp"
#include "repoctx/workspace.hpp"

namespace repoctx {

using SnippetId = std::uint64_t;

struct IndexConfig {
    std::size_t capacity = 3000;  // max files in the cache queue
    int window_lines = 30;
    int window_stride = 15;
    TokenStrategy strategy = TokenStrategy::Cut;
    std::size_t max_file_bytes = 1 << 20;
};

struct UpdateBudget {
    std::size_t max_files_per_cycle = 300;

    static UpdateBudget for_capacity(std::size_t capacity) {
        return {std::max<std::size_t>(1, capacity / 10)};
    }
};

struct IndexStats {
    std::size_t indexed_files = 0;
    std::size_t snippet_count = 0;
    std::int64_t generation = 0;
    double last_cycle_ms = 0.0;
    std::size_t newly_indexed = 0;
    std::size_t refreshed = 0;
    std::size_t evicted = 0;
    std::size_t skipped = 0;
    std::size_t pending = 0;  // candidates left for later cycles
};

// Candidate ordering for index construction: BFS from the target's
// directory (current dir, then its subdirectories level by level, then the
// ancestor chain nearest-first, each ancestor's own files before its
// unvisited subtrees). Files within one directory rank by descending
// longest-common-prefix of the basename against the target's basename,
// ties lexicographic by path. The target itself is excluded.
std::vector<std::string> sort_candidate_files(const RepoSnapshot& snapshot,
                                              const std::string& target);

// Bounded FIFO cache of per-file snippet indexes with an inverted
// token → snippet-id map. One mutator at a time; lookups take a shared
// lock against the last committed generation.
class SnippetIndex {
public:
    explicit SnippetIndex(IndexConfig config = {}) : config_(config) {}

    const IndexConfig& config() const { return config_; }
    UpdateBudget budget() const { return UpdateBudget::for_capacity(config_.capacity); }

    // One refresh cycle: indexes up to budget.max_files_per_cycle files of
    // `ordered_files` that are missing or stale, evicting the oldest queue
    // entries past capacity. Bumps the generation once.
    IndexStats build_or_refresh(const RepoSnapshot& snapshot,
                                const std::vector<std::string>& ordered_files,
                                const UpdateBudget& budget);

    // Initial build: runs cycles until capacity or candidate exhaustion.
    IndexStats build_full(const RepoSnapshot& snapshot,
                          const std::vector<std::string>& ordered_files);

    // Reacts to a file change already applied to the snapshot: re-sorts
    // candidates against `target` and runs one budgeted cycle. Deleted
    // files lose their snippets and postings immediately.
    IndexStats on_file_event(const RepoSnapshot& snapshot, const std::string& changed_path,
                             const std::string& target);

    // Union of the posting lists of the query's tokens.
    std::vector<SnippetId> lookup_candidates(const TokenSet& query) const;

    // Runs `fn` for every candidate of `query` under one shared lock.
    void for_each_candidate(const TokenSet& query,
                            const std::function<void(SnippetId, const Snippet&,
                                                     const TokenSet&)>& fn) const;

    void for_each_snippet(const std::function<void(SnippetId, const Snippet&,
                                                   const TokenSet&)>& fn) const;

    // Runs `fn` on one snippet if the id is still present; returns whether
    // it was.
    bool with_snippet(SnippetId id,
                      const std::function<void(const Snippet&, const TokenSet&)>& fn) const;

    IndexStats stats() const;
    std::size_t file_count() const;
    std::size_t snippet_count() const;
    std::int64_t generation() const;
    bool contains_file(const std::string& path) const;

    // Test hook: capacity bound, posting-list/snippet cross-consistency,
    // per-file uniqueness. Throws std::logic_error on violation.
    void check_invariants() const;

private:
    struct IndexedFile {
        std::string path;
        std::int64_t version = 0;
        std::vector<SnippetId> snippet_ids;
    };
    struct StoredSnippet {
        Snippet snippet;
        TokenSet tokens;
    };

    IndexConfig config_;
    mutable std::shared_mutex mutex_;
    std::deque<IndexedFile> entries_;  // FIFO by insertion
    std::unordered_map<std::string, std::size_t> by_path_;  // path → entries_ index
    std::unordered_map<std::string, std::vector<SnippetId>> inverted_;
    std::unordered_map<SnippetId, StoredSnippet> snippets_;
    std::int64_t generation_ = 0;
    SnippetId next_id_ = 1;
    IndexStats last_stats_;

    void reindex_positions_locked();
    void remove_file_locked(const std::string& path);
    void insert_file_locked(const FileRecord& record);
    void evict_oldest_locked();
    IndexStats cycle_locked(const RepoSnapshot& snapshot,
                            const std::vector<std::string>& ordered_files,
                            const UpdateBudget& budget);
};

}  // namespace repoctx
