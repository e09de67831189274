#include "repoctx/engine.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>

namespace repoctx {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point begin) {
    return std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
}

// One retriever running on its own thread. The slot outlives the thread,
// so a retriever that misses the deadline finishes harmlessly in the
// background and its result is discarded.
struct RetrieverSlot {
    std::mutex mutex;
    std::condition_variable done_cv;
    bool done = false;
    std::vector<RetrievedContext> result;
    double elapsed_ms = 0.0;
};

std::shared_ptr<RetrieverSlot> launch(std::function<std::vector<RetrievedContext>()> fn) {
    auto slot = std::make_shared<RetrieverSlot>();
    std::thread([slot, fn = std::move(fn)] {
        auto begin = Clock::now();
        std::vector<RetrievedContext> result;
        try {
            result = fn();
        } catch (const std::exception&) {
            // a failed retriever contributes nothing
        }
        std::lock_guard lock(slot->mutex);
        slot->result = std::move(result);
        slot->elapsed_ms = ms_since(begin);
        slot->done = true;
        slot->done_cv.notify_all();
    }).detach();
    return slot;
}

// Waits until `deadline`; on timeout the slot's result is abandoned.
std::vector<RetrievedContext> collect(const std::shared_ptr<RetrieverSlot>& slot,
                                      Clock::time_point deadline, double& elapsed_ms,
                                      bool& timed_out) {
    std::unique_lock lock(slot->mutex);
    if (!slot->done_cv.wait_until(lock, deadline, [&] { return slot->done; })) {
        timed_out = true;
        return {};
    }
    elapsed_ms = slot->elapsed_ms;
    return std::move(slot->result);
}

}  // namespace

Engine::Engine(EngineConfig config) : cfg_(std::move(config)), log_(cfg_.behavior.retention_cap),
                                      index_(cfg_.index) {
    cfg_.validate();
}

Engine::~Engine() = default;

IndexStats Engine::bootstrap() {
    graph_.build(snapshot_);
    // anchor the initial ordering on the lexicographically first file
    std::string target = last_target_;
    if (target.empty() && !snapshot_.files().empty())
        target = snapshot_.files().begin()->first;
    std::vector<std::string> ordered =
        target.empty() ? std::vector<std::string>{} : sort_candidate_files(snapshot_, target);
    if (!target.empty()) ordered.push_back(target);  // the anchor itself is indexable
    return index_.build_full(snapshot_, ordered);
}

IndexStats Engine::init_from_disk(const std::string& repo_path) {
    std::unique_lock lock(snapshot_mutex_);
    snapshot_ = RepoSnapshot();
    snapshot_.load_from_disk(repo_path, cfg_.index.max_file_bytes);
    return bootstrap();
}

IndexStats Engine::init_from_snapshot(RepoSnapshot snapshot) {
    std::unique_lock lock(snapshot_mutex_);
    snapshot_ = std::move(snapshot);
    return bootstrap();
}

void Engine::handle_cursor_event(const CursorEvent& event) {
    log_.record_event(event);
}

void Engine::handle_file_change(const std::string& path, std::string content) {
    std::unique_lock lock(snapshot_mutex_);
    const FileRecord& rec = snapshot_.apply_file_change(path, std::move(content));
    graph_.incremental_update(rec, language_from_path(rec.path));
    std::string target = last_target_.empty() ? rec.path : last_target_;
    index_.on_file_event(snapshot_, rec.path, target);
}

void Engine::handle_file_removal(const std::string& path) {
    std::unique_lock lock(snapshot_mutex_);
    if (!snapshot_.remove_file(path)) return;
    graph_.remove_file(path);
    std::string target = last_target_.empty() ? path : last_target_;
    index_.on_file_event(snapshot_, path, target);
}

QueryResponse Engine::query(const CompletionRequest& request, RetrieverToggles toggles) {
    auto begin = Clock::now();
    auto deadline = begin + std::chrono::milliseconds(cfg_.retriever_deadline_ms);
    {
        std::unique_lock lock(snapshot_mutex_);
        last_target_ = request.path;
    }

    std::shared_ptr<RetrieverSlot> behavior_slot, similar_slot, symbol_slot;
    if (toggles.behavior)
        behavior_slot = launch([this, request] {
            std::shared_lock lock(snapshot_mutex_);
            return retrieve_behavior_snippets(log_, snapshot_, request, cfg_.behavior);
        });
    if (toggles.similar)
        similar_slot = launch([this, request] {
            return query_similar(index_, request, cfg_.similarity);
        });
    if (toggles.symbol)
        symbol_slot = launch([this, request] {
            auto scenario = detect_scenario(request);
            if (!scenario) return std::vector<RetrievedContext>{};
            return retrieve_symbols(graph_, *scenario, request.path, cfg_.max_symbol_entries);
        });

    QueryResponse response;
    std::vector<RetrievedContext> behavior_ctx, similar_ctx, symbol_ctx;
    if (symbol_slot)
        symbol_ctx = collect(symbol_slot, deadline, response.timings.symbol_ms,
                             response.timings.symbol_timed_out);
    if (similar_slot)
        similar_ctx = collect(similar_slot, deadline, response.timings.similar_ms,
                              response.timings.similar_timed_out);
    if (behavior_slot)
        behavior_ctx = collect(behavior_slot, deadline, response.timings.behavior_ms,
                               response.timings.behavior_timed_out);

    response.contexts = fuse(symbol_ctx, similar_ctx, behavior_ctx, cfg_.budgets);
    response.prompt = render_fim(request, response.contexts, cfg_.budgets, cfg_.fim);
    response.timings.total_ms = ms_since(begin);
    double slowest = std::max({response.timings.behavior_ms, response.timings.similar_ms,
                               response.timings.symbol_ms});
    if (response.timings.total_ms < slowest) response.timings.total_ms = slowest;
    return response;
}

}  // namespace repoctx
