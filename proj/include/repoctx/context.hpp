#pragma once

#include <string>

namespace repoctx {

enum class ContextKind { Symbol, Similar, Behavior };

std::string context_kind_name(ContextKind kind);

// A ranked, typed context item ready for prompt fusion.
struct RetrievedContext {
    ContextKind kind = ContextKind::Similar;
    std::string content;
    double score = 0.0;
    std::string source_path;
    int source_start_line = 0;
    int source_end_line = 0;
    std::size_t token_estimate = 0;
};

}  // namespace repoctx
