#include "repoctx/fusion.hpp"

#include <algorithm>
#include <cctype>

namespace repoctx {

std::string context_kind_name(ContextKind kind) {
    switch (kind) {
        case ContextKind::Symbol: return "symbol";
        case ContextKind::Similar: return "similar";
        default: return "behavior";
    }
}

std::size_t count_tokens(const std::string& text) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (std::isalnum(c) || c == '_') {
            while (i < text.size()) {
                unsigned char d = static_cast<unsigned char>(text[i]);
                if (!(std::isalnum(d) || d == '_')) break;
                ++i;
            }
        } else {
            ++i;  // one token per punctuation character
        }
        ++count;
    }
    return count;
}

std::size_t TokenBudgets::cap_for(ContextKind kind) const {
    switch (kind) {
        case ContextKind::Symbol: return max_symbol_tokens;
        case ContextKind::Similar: return max_similar_tokens;
        default: return max_behavior_tokens;
    }
}

bool TokenBudgets::valid() const {
    return max_input_tokens >= 64 &&
           max_symbol_tokens + max_similar_tokens + max_behavior_tokens + reserved_for_file <=
               max_input_tokens &&
           reserved_for_file >= 32;
}

TokenBudgets TokenBudgets::default_4k() { return {}; }

TokenBudgets TokenBudgets::extended_8k() {
    TokenBudgets b;
    b.max_input_tokens = 8000;
    b.max_symbol_tokens = 1600;
    b.max_similar_tokens = 2400;
    b.max_behavior_tokens = 1600;
    b.reserved_for_file = 2400;
    return b;
}

std::vector<RetrievedContext> fuse(const std::vector<RetrievedContext>& symbol_ctx,
                                   const std::vector<RetrievedContext>& similar_ctx,
                                   const std::vector<RetrievedContext>& behavior_ctx,
                                   const TokenBudgets& budgets) {
    std::vector<RetrievedContext> out;
    std::size_t total_budget = budgets.max_input_tokens > budgets.reserved_for_file
                                   ? budgets.max_input_tokens - budgets.reserved_for_file
                                   : 0;
    std::size_t total_used = 0;
    auto admit = [&](const std::vector<RetrievedContext>& items, ContextKind kind) {
        std::size_t cap = budgets.cap_for(kind);
        std::size_t used = 0;
        for (const auto& item : items) {
            if (item.kind != kind) continue;
            std::size_t cost = item.token_estimate ? item.token_estimate
                                                   : count_tokens(item.content);
            if (used + cost > cap) continue;  // a later, smaller item may still fit
            if (total_used + cost > total_budget) continue;
            used += cost;
            total_used += cost;
            out.push_back(item);
            out.back().token_estimate = cost;
        }
    };
    admit(symbol_ctx, ContextKind::Symbol);
    admit(similar_ctx, ContextKind::Similar);
    admit(behavior_ctx, ContextKind::Behavior);
    return out;
}

namespace {

// Keeps at most `max_tokens` counted tokens from the tail of `text`,
// cutting at a token boundary.
std::string keep_tail_tokens(const std::string& text, std::size_t max_tokens) {
    if (max_tokens == 0) return "";
    if (count_tokens(text) <= max_tokens) return text;
    // token start offsets
    std::vector<std::size_t> starts;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        starts.push_back(i);
        if (std::isalnum(c) || c == '_') {
            while (i < text.size()) {
                unsigned char d = static_cast<unsigned char>(text[i]);
                if (!(std::isalnum(d) || d == '_')) break;
                ++i;
            }
        } else {
            ++i;
        }
    }
    if (starts.size() <= max_tokens) return text;
    return text.substr(starts[starts.size() - max_tokens]);
}

std::string keep_head_tokens(const std::string& text, std::size_t max_tokens) {
    if (max_tokens == 0) return "";
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (count == max_tokens) return text.substr(0, i);
        ++count;
        if (std::isalnum(c) || c == '_') {
            while (i < text.size()) {
                unsigned char d = static_cast<unsigned char>(text[i]);
                if (!(std::isalnum(d) || d == '_')) break;
                ++i;
            }
        } else {
            ++i;
        }
    }
    return text;
}

std::string render_context_block(const RetrievedContext& ctx, LanguageId lang) {
    std::string leader = comment_leader(lang);
    std::string block = leader + " [" + context_kind_name(ctx.kind) + "] " + ctx.source_path +
                        ":" + std::to_string(ctx.source_start_line) + "-" +
                        std::to_string(ctx.source_end_line) + "\n";
    for (const auto& line : split_lines(ctx.content)) block += leader + " " + line + "\n";
    return block;
}

}  // namespace

FimPrompt render_fim(const CompletionRequest& request,
                     const std::vector<RetrievedContext>& fused, const TokenBudgets& budgets,
                     const FimTemplate& tmpl) {
    FimPrompt prompt;
    std::size_t marker_cost = count_tokens(tmpl.prefix_marker) +
                              count_tokens(tmpl.suffix_marker) +
                              count_tokens(tmpl.middle_marker);

    std::vector<std::pair<std::string, std::string>> context_blocks;
    std::size_t context_cost = 0;
    for (const auto& ctx : fused) {
        std::string block = render_context_block(ctx, request.language);
        context_cost += count_tokens(block);
        context_blocks.emplace_back("context:" + context_kind_name(ctx.kind), std::move(block));
    }

    std::size_t file_cost = count_tokens(request.prefix) + count_tokens(request.suffix);
    std::size_t budget = budgets.max_input_tokens;
    std::string prefix = request.prefix;
    std::string suffix = request.suffix;

    if (marker_cost + file_cost > budget) {
        // the file alone does not fit: drop every context, keep the text
        // nearest the cursor
        context_blocks.clear();
        context_cost = 0;
        prompt.contexts_dropped = true;
    }
    std::size_t available = budget > marker_cost + context_cost
                                ? budget - marker_cost - context_cost
                                : 0;
    if (file_cost > available) {
        prompt.truncated = true;
        std::size_t prefix_tokens = count_tokens(prefix);
        std::size_t suffix_tokens = count_tokens(suffix);
        // prefix first: it carries the cursor-adjacent text
        std::size_t prefix_budget = std::min(prefix_tokens, available);
        std::size_t suffix_budget = std::min(suffix_tokens, available - prefix_budget);
        prefix = keep_tail_tokens(prefix, prefix_budget);
        suffix = keep_head_tokens(suffix, suffix_budget);
    }

    auto push = [&](const std::string& label, const std::string& text) {
        prompt.segments.push_back({label, text});
        prompt.text += text;
    };
    for (const auto& [label, block] : context_blocks) push(label, block);
    if (tmpl.style == "spm") {
        push("suffix_marker", tmpl.suffix_marker);
        push("suffix", suffix);
        push("prefix_marker", tmpl.prefix_marker);
        push("prefix", prefix);
        push("middle_marker", tmpl.middle_marker);
    } else {
        push("prefix_marker", tmpl.prefix_marker);
        push("prefix", prefix);
        push("suffix_marker", tmpl.suffix_marker);
        push("suffix", suffix);
        push("middle_marker", tmpl.middle_marker);
    }
    return prompt;
}

}  // namespace repoctx
