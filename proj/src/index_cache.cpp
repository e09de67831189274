#include "repoctx/index_cache.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <map>
#include <set>
#include <stdexcept>

namespace repoctx {

namespace {

std::string dir_of(const std::string& path) {
    auto slash = path.rfind('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash);
}

std::string base_of(const std::string& path) {
    auto slash = path.rfind('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::size_t common_prefix_len(const std::string& a, const std::string& b) {
    std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) ++i;
    return i;
}

struct DirTree {
    std::map<std::string, std::vector<std::string>> files;     // dir → file paths
    std::map<std::string, std::set<std::string>> children;     // dir → child dirs

    explicit DirTree(const RepoSnapshot& snapshot) {
        files[""];  // root always exists
        for (const auto& [path, rec] : snapshot.files()) {
            std::string dir = dir_of(path);
            files[dir].push_back(path);
            // register the whole ancestor chain
            std::string cur = dir;
            while (!cur.empty()) {
                std::string parent = dir_of(cur);
                children[parent].insert(cur);
                files[parent];
                cur = parent;
            }
        }
    }
};

}  // namespace

std::vector<std::string> sort_candidate_files(const RepoSnapshot& snapshot,
                                              const std::string& target) {
    DirTree tree(snapshot);
    std::string target_base = base_of(target);

    std::vector<std::string> dir_order;
    std::set<std::string> visited;
    auto visit = [&](const std::string& dir) {
        if (visited.insert(dir).second) dir_order.push_back(dir);
    };
    auto bfs_subtrees = [&](const std::vector<std::string>& roots) {
        std::deque<std::string> queue(roots.begin(), roots.end());
        while (!queue.empty()) {
            std::string dir = queue.front();
            queue.pop_front();
            if (visited.count(dir)) continue;
            visit(dir);
            auto it = tree.children.find(dir);
            if (it != tree.children.end())
                for (const auto& child : it->second) queue.push_back(child);
        }
    };

    // current directory, then its subtree breadth-first
    std::string start = dir_of(target);
    visit(start);
    {
        std::vector<std::string> roots;
        auto it = tree.children.find(start);
        if (it != tree.children.end()) roots.assign(it->second.begin(), it->second.end());
        bfs_subtrees(roots);
    }
    // ancestor chain, nearest first; each ancestor's own files then its
    // not-yet-visited subtrees
    std::string cur = start;
    while (!cur.empty()) {
        std::string parent = dir_of(cur);
        visit(parent);
        std::vector<std::string> roots;
        auto it = tree.children.find(parent);
        if (it != tree.children.end())
            for (const auto& child : it->second)
                if (!visited.count(child)) roots.push_back(child);
        bfs_subtrees(roots);
        cur = parent;
    }

    std::vector<std::string> out;
    for (const auto& dir : dir_order) {
        auto it = tree.files.find(dir);
        if (it == tree.files.end()) continue;
        std::vector<std::string> names = it->second;
        std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
            std::size_t la = common_prefix_len(base_of(a), target_base);
            std::size_t lb = common_prefix_len(base_of(b), target_base);
            if (la != lb) return la > lb;
            return a < b;
        });
        for (auto& name : names)
            if (name != target) out.push_back(std::move(name));
    }
    return out;
}

void SnippetIndex::reindex_positions_locked() {
    by_path_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) by_path_[entries_[i].path] = i;
}

void SnippetIndex::remove_file_locked(const std::string& path) {
    auto it = by_path_.find(path);
    if (it == by_path_.end()) return;
    IndexedFile& file = entries_[it->second];
    for (SnippetId id : file.snippet_ids) {
        auto sit = snippets_.find(id);
        if (sit == snippets_.end()) continue;
        for (const auto& token : sit->second.tokens.tokens) {
            auto pit = inverted_.find(token);
            if (pit == inverted_.end()) continue;
            auto& list = pit->second;
            list.erase(std::remove(list.begin(), list.end(), id), list.end());
            if (list.empty()) inverted_.erase(pit);
        }
        snippets_.erase(sit);
    }
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(it->second));
    reindex_positions_locked();
}

void SnippetIndex::insert_file_locked(const FileRecord& record) {
    IndexedFile file;
    file.path = record.path;
    file.version = record.version;
    for (auto& snip : chunk_file(record, config_.window_lines, config_.window_stride)) {
        SnippetId id = next_id_++;
        TokenSet tokens = tokenize(snip.content, config_.strategy,
                                   language_from_path(record.path));
        for (const auto& token : tokens.tokens) inverted_[token].push_back(id);
        snippets_[id] = {std::move(snip), std::move(tokens)};
        file.snippet_ids.push_back(id);
    }
    entries_.push_back(std::move(file));
    by_path_[record.path] = entries_.size() - 1;
}

void SnippetIndex::evict_oldest_locked() {
    if (entries_.empty()) return;
    remove_file_locked(entries_.front().path);
}

IndexStats SnippetIndex::cycle_locked(const RepoSnapshot& snapshot,
                                      const std::vector<std::string>& ordered_files,
                                      const UpdateBudget& budget) {
    auto begin = std::chrono::steady_clock::now();
    IndexStats stats;
    std::size_t used = 0;
    for (const auto& path : ordered_files) {
        if (used >= budget.max_files_per_cycle) {
            ++stats.pending;
            continue;
        }
        const FileRecord* rec = snapshot.find(path);
        if (!rec) {
            remove_file_locked(path);
            continue;
        }
        if (rec->content.size() > config_.max_file_bytes) {
            ++stats.skipped;
            continue;
        }
        auto it = by_path_.find(path);
        if (it != by_path_.end()) {
            if (entries_[it->second].version == rec->version) continue;  // up to date
            // stale: re-chunk in place, counted against the budget
            remove_file_locked(path);
            insert_file_locked(*rec);
            ++stats.refreshed;
            ++used;
        } else {
            insert_file_locked(*rec);
            ++stats.newly_indexed;
            ++used;
        }
        while (entries_.size() > config_.capacity) {
            evict_oldest_locked();
            ++stats.evicted;
        }
    }
    ++generation_;
    stats.indexed_files = entries_.size();
    stats.snippet_count = snippets_.size();
    stats.generation = generation_;
    stats.last_cycle_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - begin)
                              .count();
    last_stats_ = stats;
    return stats;
}

IndexStats SnippetIndex::build_or_refresh(const RepoSnapshot& snapshot,
                                          const std::vector<std::string>& ordered_files,
                                          const UpdateBudget& budget) {
    std::unique_lock lock(mutex_);
    return cycle_locked(snapshot, ordered_files, budget);
}

IndexStats SnippetIndex::build_full(const RepoSnapshot& snapshot,
                                    const std::vector<std::string>& ordered_files) {
    std::unique_lock lock(mutex_);
    UpdateBudget per_cycle = budget();
    IndexStats stats;
    while (true) {
        stats = cycle_locked(snapshot, ordered_files, per_cycle);
        if (stats.newly_indexed == 0 && stats.refreshed == 0) break;
        if (entries_.size() >= config_.capacity) break;
        if (stats.pending == 0) break;
    }
    return stats;
}

IndexStats SnippetIndex::on_file_event(const RepoSnapshot& snapshot,
                                       const std::string& changed_path,
                                       const std::string& target) {
    std::unique_lock lock(mutex_);
    if (!snapshot.contains(changed_path)) remove_file_locked(changed_path);
    std::string anchor = snapshot.contains(target) ? target : changed_path;
    std::vector<std::string> ordered = sort_candidate_files(snapshot, anchor);
    // the changed file refreshes first; sort_candidate_files omits the anchor
    if (snapshot.contains(changed_path))
        ordered.insert(ordered.begin(), changed_path);
    return cycle_locked(snapshot, ordered, budget());
}

std::vector<SnippetId> SnippetIndex::lookup_candidates(const TokenSet& query) const {
    std::shared_lock lock(mutex_);
    std::set<SnippetId> ids;
    for (const auto& token : query.tokens) {
        auto it = inverted_.find(token);
        if (it == inverted_.end()) continue;
        ids.insert(it->second.begin(), it->second.end());
    }
    return {ids.begin(), ids.end()};
}

void SnippetIndex::for_each_candidate(
    const TokenSet& query,
    const std::function<void(SnippetId, const Snippet&, const TokenSet&)>& fn) const {
    std::shared_lock lock(mutex_);
    std::set<SnippetId> ids;
    for (const auto& token : query.tokens) {
        auto it = inverted_.find(token);
        if (it == inverted_.end()) continue;
        ids.insert(it->second.begin(), it->second.end());
    }
    for (SnippetId id : ids) {
        auto it = snippets_.find(id);
        if (it != snippets_.end()) fn(id, it->second.snippet, it->second.tokens);
    }
}

void SnippetIndex::for_each_snippet(
    const std::function<void(SnippetId, const Snippet&, const TokenSet&)>& fn) const {
    std::shared_lock lock(mutex_);
    for (const auto& [id, stored] : snippets_) fn(id, stored.snippet, stored.tokens);
}

bool SnippetIndex::with_snippet(
    SnippetId id, const std::function<void(const Snippet&, const TokenSet&)>& fn) const {
    std::shared_lock lock(mutex_);
    auto it = snippets_.find(id);
    if (it == snippets_.end()) return false;
    fn(it->second.snippet, it->second.tokens);
    return true;
}

IndexStats SnippetIndex::stats() const {
    std::shared_lock lock(mutex_);
    IndexStats s = last_stats_;
    s.indexed_files = entries_.size();
    s.snippet_count = snippets_.size();
    s.generation = generation_;
    return s;
}

std::size_t SnippetIndex::file_count() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::size_t SnippetIndex::snippet_count() const {
    std::shared_lock lock(mutex_);
    return snippets_.size();
}

std::int64_t SnippetIndex::generation() const {
    std::shared_lock lock(mutex_);
    return generation_;
}

bool SnippetIndex::contains_file(const std::string& path) const {
    std::shared_lock lock(mutex_);
    return by_path_.count(path) > 0;
}

void SnippetIndex::check_invariants() const {
    std::shared_lock lock(mutex_);
    if (entries_.size() > config_.capacity) throw std::logic_error("capacity exceeded");
    std::set<std::string> seen_paths;
    std::set<SnippetId> file_ids;
    for (const auto& file : entries_) {
        if (!seen_paths.insert(file.path).second)
            throw std::logic_error("duplicate file in queue: " + file.path);
        for (SnippetId id : file.snippet_ids) {
            if (!snippets_.count(id)) throw std::logic_error("dangling snippet id");
            file_ids.insert(id);
        }
    }
    if (file_ids.size() != snippets_.size())
        throw std::logic_error("snippet store does not match queue contents");
    // rebuild the inverted index from the snippet store and compare
    std::map<std::string, std::set<SnippetId>> rebuilt;
    for (const auto& [id, stored] : snippets_)
        for (const auto& token : stored.tokens.tokens) rebuilt[token].insert(id);
    std::map<std::string, std::set<SnippetId>> actual;
    for (const auto& [token, list] : inverted_) {
        if (list.empty()) throw std::logic_error("empty posting list kept for " + token);
        actual[token] = {list.begin(), list.end()};
    }
    if (rebuilt != actual) throw std::logic_error("inverted index out of sync");
}

}  // namespace repoctx
