#include "geyser/kvfile.hpp"

#include <fstream>
#include <sstream>

#include "geyser/errors.hpp"

namespace geyser {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

KvFile KvFile::parse(std::string_view text) {
    KvFile kv;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                              std::string(stripped) + "'");
        const std::string_view key = trim(stripped.substr(0, eq));
        const std::string_view value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        kv.entries_.emplace_back(std::string(key), std::string(value));
    }
    return kv;
}

KvFile KvFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool KvFile::has(std::string_view key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return true;
    return false;
}

std::string KvFile::get(std::string_view key, std::string_view fallback) const {
    std::string out(fallback);
    for (const auto& [k, v] : entries_)
        if (k == key) out = v;
    return out;
}

} // namespace geyser
