#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "aplr/types.hpp"

namespace test {

inline aplr::EncodedMatrix make_matrix(const std::vector<std::string>& names,
                                       const std::vector<std::vector<double>>& rows) {
    aplr::EncodedMatrix m(rows.size(), names);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j) m(i, j) = rows[i][j];
    return m;
}

inline aplr::EncodedMatrix column_matrix(const std::vector<double>& col,
                                         const std::string& name = "x0") {
    aplr::EncodedMatrix m(col.size(), {name});
    for (std::size_t i = 0; i < col.size(); ++i) m(i, 0) = col[i];
    return m;
}

// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("aplr_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace test
