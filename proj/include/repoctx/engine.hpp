#pragma once

#include <shared_mutex>
#include <string>
#include <vector>

#include "repoctx/behavior.hpp"
#include "repoctx/ckg.hpp"
#include "repoctx/config.hpp"
#include "repoctx/fusion.hpp"
#include "repoctx/index_cache.hpp"
#include "repoctx/similarity.hpp"
#include "repoctx/workspace.hpp"

namespace repoctx {

struct RetrieverTimings {
    double behavior_ms = 0.0;
    double similar_ms = 0.0;
    double symbol_ms = 0.0;
    double total_ms = 0.0;
    bool behavior_timed_out = false;
    bool similar_timed_out = false;
    bool symbol_timed_out = false;
};

struct QueryResponse {
    std::vector<RetrievedContext> contexts;
    FimPrompt prompt;
    RetrieverTimings timings;
};

// Retriever toggles, used by the evaluation harness for ablations.
struct RetrieverToggles {
    bool behavior = true;
    bool similar = true;
    bool symbol = true;
};

// Ties the snapshot, behavior log, snippet index and symbol graph
// together behind one front door. Queries run the three retrievers
// concurrently under a soft deadline; mutations are serialized.
class Engine {
public:
    explicit Engine(EngineConfig config = {});
    ~Engine();

    // Loads the repository from disk and builds the graph and the initial
    // index. Returns the stats of the final index cycle.
    IndexStats init_from_disk(const std::string& repo_path);

    // In-memory initialization for tests and embedding.
    IndexStats init_from_snapshot(RepoSnapshot snapshot);

    void handle_cursor_event(const CursorEvent& event);
    void handle_file_change(const std::string& path, std::string content);
    void handle_file_removal(const std::string& path);

    QueryResponse query(const CompletionRequest& request, RetrieverToggles toggles = {});

    IndexStats index_stats() const { return index_.stats(); }
    std::size_t graph_size() const { return graph_.size(); }
    const RepoSnapshot& snapshot() const { return snapshot_; }
    const EngineConfig& config() const { return cfg_; }
    const CodeKnowledgeGraph& graph() const { return graph_; }
    const SnippetIndex& index() const { return index_; }
    BehaviorLog& behavior_log() { return log_; }

private:
    EngineConfig cfg_;
    RepoSnapshot snapshot_;
    BehaviorLog log_;
    SnippetIndex index_;
    CodeKnowledgeGraph graph_;
    std::string last_target_;
    mutable std::shared_mutex snapshot_mutex_;

    IndexStats bootstrap();
};

}  // namespace repoctx
