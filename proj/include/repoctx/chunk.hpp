#pragma once

#include <vector>

#include "repoctx/workspace.hpp"

namespace repoctx {

struct LineWindow {
    int start_line = 1;  // 1-based inclusive
    int end_line = 1;
};

// Sliding windows over [1, line_count]: starts at 1, 1+stride, ...;
// generation stops after the first window reaching the end of the file,
// with that window clamped to end_line = line_count. An empty file yields
// no windows; a file shorter than the window yields exactly one.
std::vector<LineWindow> sliding_windows(std::size_t line_count, int window_lines,
                                        int window_stride);

std::vector<Snippet> chunk_file(const FileRecord& record, int window_lines, int window_stride);

}  // namespace repoctx
