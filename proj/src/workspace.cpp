#include "repoctx/workspace.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace repoctx {

namespace fs = std::filesystem;

LanguageId language_from_name(const std::string& name) {
    if (name == "go") return LanguageId::Go;
    if (name == "python" || name == "py") return LanguageId::Python;
    if (name == "typescript" || name == "ts" || name == "tsx") return LanguageId::TypeScript;
    return LanguageId::Unknown;
}

std::string language_name(LanguageId lang) {
    switch (lang) {
        case LanguageId::Go: return "go";
        case LanguageId::Python: return "python";
        case LanguageId::TypeScript: return "typescript";
        default: return "unknown";
    }
}

LanguageId language_from_path(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot == std::string::npos) return LanguageId::Unknown;
    std::string ext = path.substr(dot + 1);
    if (ext == "go") return LanguageId::Go;
    if (ext == "py") return LanguageId::Python;
    if (ext == "ts" || ext == "tsx") return LanguageId::TypeScript;
    return LanguageId::Unknown;
}

std::string comment_leader(LanguageId lang) {
    return lang == LanguageId::Python ? "#" : "//";
}

std::vector<std::string> split_lines(const std::string& content) {
    std::vector<std::string> lines;
    if (content.empty()) return lines;
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t nl = content.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(content.substr(pos));
            break;
        }
        lines.push_back(content.substr(pos, nl - pos));
        pos = nl + 1;
        // trailing newline: no phantom empty last line
        if (pos == content.size()) break;
    }
    return lines;
}

std::size_t count_lines(const std::string& content) {
    if (content.empty()) return 0;
    std::size_t n = std::count(content.begin(), content.end(), '\n');
    if (content.back() != '\n') ++n;
    return n;
}

std::optional<std::string> normalize_rel_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return std::nullopt;
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        std::size_t sep = path.find('/', pos);
        std::string part = sep == std::string::npos ? path.substr(pos)
                                                    : path.substr(pos, sep - pos);
        if (part == "..") {
            if (parts.empty()) return std::nullopt;  // escapes the root
            parts.pop_back();
        } else if (!part.empty() && part != ".") {
            parts.push_back(part);
        }
        if (sep == std::string::npos) break;
        pos = sep + 1;
    }
    if (parts.empty()) return std::nullopt;
    std::string out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out += "/" + parts[i];
    return out;
}

const FileRecord* RepoSnapshot::find(const std::string& path) const {
    auto it = files_.find(path);
    return it == files_.end() ? nullptr : &it->second;
}

LanguageId RepoSnapshot::language_of(const std::string& path) const {
    return language_from_path(path);
}

const FileRecord& RepoSnapshot::apply_file_change(const std::string& path,
                                                  std::string new_content) {
    auto normalized = normalize_rel_path(path);
    if (!normalized) throw std::invalid_argument("path escapes repository root: " + path);

    auto it = files_.find(*normalized);
    bool created = it == files_.end();
    FileRecord& rec = files_[*normalized];
    rec.path = *normalized;
    rec.content = std::move(new_content);
    rec.version += 1;  // even an identical rewrite bumps the version
    rec.line_count = count_lines(rec.content);
    notify({created ? FileChangeKind::Created : FileChangeKind::Modified, rec.path, rec.version});
    return rec;
}

bool RepoSnapshot::remove_file(const std::string& path) {
    auto it = files_.find(path);
    if (it == files_.end()) return false;
    std::int64_t version = it->second.version;
    files_.erase(it);
    notify({FileChangeKind::Removed, path, version});
    return true;
}

void RepoSnapshot::subscribe(std::function<void(const FileChange&)> listener) {
    listeners_.push_back(std::move(listener));
}

void RepoSnapshot::notify(const FileChange& change) {
    for (auto& l : listeners_) l(change);
}

namespace {

bool looks_binary(const std::string& content) {
    std::size_t probe = std::min<std::size_t>(content.size(), 8000);
    for (std::size_t i = 0; i < probe; ++i)
        if (content[i] == '\0') return true;
    return false;
}

}  // namespace

std::size_t RepoSnapshot::load_from_disk(const std::string& root, std::size_t max_file_bytes) {
    root_ = root;
    std::size_t loaded = 0;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(root, ec), end; it != end && !ec; it.increment(ec)) {
        if (!it->is_regular_file(ec)) continue;
        auto size = it->file_size(ec);
        if (ec || size > max_file_bytes) continue;
        std::string rel = fs::relative(it->path(), root, ec).generic_string();
        if (ec) continue;
        if (rel.find("/.") != std::string::npos || rel.rfind(".", 0) == 0) continue;
        std::ifstream in(it->path(), std::ios::binary);
        if (!in) continue;
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string content = buf.str();
        if (looks_binary(content)) continue;
        auto normalized = normalize_rel_path(rel);
        if (!normalized) continue;
        FileRecord& rec = files_[*normalized];
        rec.path = *normalized;
        rec.content = std::move(content);
        rec.version = 1;
        rec.line_count = count_lines(rec.content);
        ++loaded;
    }
    return loaded;
}

Snippet slice_lines(const FileRecord& record, int start_line, int end_line) {
    if (start_line < 1 || end_line < start_line ||
        static_cast<std::size_t>(end_line) > record.line_count)
        throw std::out_of_range("slice_lines: range outside file");
    auto lines = split_lines(record.content);
    std::string content;
    for (int i = start_line; i <= end_line; ++i) {
        content += lines[static_cast<std::size_t>(i - 1)];
        if (i != end_line) content += '\n';
    }
    return Snippet{record.path, start_line, end_line, std::move(content), record.version};
}

}  // namespace repoctx
