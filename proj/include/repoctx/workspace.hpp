#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace repoctx {

enum class LanguageId { Go, Python, TypeScript, Unknown };

LanguageId language_from_name(const std::string& name);
std::string language_name(LanguageId lang);
LanguageId language_from_path(const std::string& path);

// "//" for Go/TypeScript, "#" for Python.
std::string comment_leader(LanguageId lang);

struct FileRecord {
    std::string path;
    std::string content;
    std::int64_t version = 0;
    std::size_t line_count = 0;
};

enum class EventKind { Browse, Edit };

struct CursorEvent {
    std::int64_t timestamp_ms = 0;
    std::string path;
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    EventKind kind = EventKind::Browse;
};

struct Snippet {
    std::string path;
    int start_line = 1;  // 1-based, inclusive
    int end_line = 1;    // 1-based, inclusive
    std::string content;
    std::int64_t source_version = 0;
};

struct CursorPos {
    int line = 1;
    int column = 1;
};

struct TokenBudgets;  // fusion.hpp

struct CompletionRequest {
    std::string path;
    CursorPos cursor;
    std::string prefix;
    std::string suffix;
    LanguageId language = LanguageId::Unknown;
};

// Splits on '\n'; a trailing newline does not produce a phantom empty line.
std::vector<std::string> split_lines(const std::string& content);
std::size_t count_lines(const std::string& content);

// Collapses "." components and rejects anything that escapes the root.
// Returns std::nullopt for absolute paths, empty paths, or ".." escapes.
std::optional<std::string> normalize_rel_path(const std::string& path);

enum class FileChangeKind { Created, Modified, Removed };

struct FileChange {
    FileChangeKind kind;
    std::string path;
    std::int64_t version;
};

class RepoSnapshot {
public:
    RepoSnapshot() = default;
    explicit RepoSnapshot(std::string root) : root_(std::move(root)) {}

    const std::string& root() const { return root_; }
    const std::map<std::string, FileRecord>& files() const { return files_; }

    const FileRecord* find(const std::string& path) const;
    bool contains(const std::string& path) const { return find(path) != nullptr; }
    LanguageId language_of(const std::string& path) const;

    // Creates or updates a record, bumping its version; removal uses
    // remove_file. Throws std::invalid_argument on paths escaping the root.
    const FileRecord& apply_file_change(const std::string& path, std::string new_content);
    bool remove_file(const std::string& path);

    // Change notifications go to every subscriber, in subscription order.
    void subscribe(std::function<void(const FileChange&)> listener);

    // Loads every UTF-8 decodable file under `root` (skips binary and
    // oversized files). Returns the number of files loaded.
    std::size_t load_from_disk(const std::string& root, std::size_t max_file_bytes = 1 << 20);

private:
    std::string root_;
    std::map<std::string, FileRecord> files_;
    std::vector<std::function<void(const FileChange&)>> listeners_;

    void notify(const FileChange& change);
};

// Lines [start_line, end_line] of the record, both 1-based inclusive.
// Throws std::out_of_range when the range exceeds line_count.
Snippet slice_lines(const FileRecord& record, int start_line, int end_line);

}  // namespace repoctx
