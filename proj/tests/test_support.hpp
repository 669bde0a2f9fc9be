#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
    return (std::filesystem::path(GEYSER_FIXTURE_DIR) / name).string();
}

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Unique scratch directory under the build tree, wiped on construction.
struct ScratchDir {
    explicit ScratchDir(const std::string& name)
        : path((std::filesystem::temp_directory_path() / ("geyser_test_" + name)).string()) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    std::string file(const std::string& name) const {
        return (std::filesystem::path(path) / name).string();
    }
    std::string path;
};

} // namespace testsupport
