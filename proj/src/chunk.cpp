#include "repoctx/chunk.hpp"

namespace repoctx {

std::vector<LineWindow> sliding_windows(std::size_t line_count, int window_lines,
                                        int window_stride) {
    std::vector<LineWindow> out;
    if (line_count == 0 || window_lines < 1 || window_stride < 1) return out;
    int last = static_cast<int>(line_count);
    for (int start = 1; start <= last; start += window_stride) {
        int end = start + window_lines - 1;
        if (end >= last) {
            out.push_back({start, last});
            break;
        }
        out.push_back({start, end});
    }
    return out;
}

std::vector<Snippet> chunk_file(const FileRecord& record, int window_lines, int window_stride) {
    std::vector<Snippet> out;
    for (const auto& w : sliding_windows(record.line_count, window_lines, window_stride))
        out.push_back(slice_lines(record, w.start_line, w.end_line));
    return out;
}

}  // namespace repoctx
