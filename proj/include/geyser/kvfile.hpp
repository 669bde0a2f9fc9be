#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace geyser {

/// Parsed key=value file: one pair per line, '#' comments and blank lines
/// ignored, whitespace trimmed around keys and values. Later duplicates win
/// in get(); original order is preserved for serialization.
class KvFile {
public:
    static KvFile parse(std::string_view text);       // throws ConfigError
    static KvFile load(const std::string& path);      // throws ConfigError

    bool has(std::string_view key) const;
    /// Last value for key, or fallback when absent.
    std::string get(std::string_view key, std::string_view fallback = "") const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string_view trim(std::string_view s);

} // namespace geyser
