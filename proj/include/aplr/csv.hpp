#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace aplr {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC-4180 reader: quoted fields, escaped quotes, CRLF or LF line endings.
/// Requires a header row and rectangular rows (ragged row -> data_error).
CsvTable read_csv(const std::filesystem::path& path);

/// Writes RFC-4180 CSV, quoting only fields that need it. LF line endings.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Doubles formatted with shortest round-trip representation.
std::string format_double(double v);

}  // namespace aplr
