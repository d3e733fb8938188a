#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmqkd::io {

/// Shortest round-trip decimal representation (std::to_chars); parsing it
/// back and re-formatting reproduces the same bytes.
std::string formatDouble(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const CsvTable&) const = default;
};

std::string toCsvString(const CsvTable& table);
CsvTable parseCsvString(const std::string& text);
void writeCsvFile(const CsvTable& table, const std::string& path);

}  // namespace pmqkd::io
