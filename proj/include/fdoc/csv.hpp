#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace fdoc {

// All numeric output goes through this: 12 significant digits, C locale, so
// identical inputs produce byte-identical files.
std::string format_sig(double v);

// Opens for writing and emits the schema comment line "# fdoc <name> v1".
std::ofstream open_csv(const std::string& path, const std::string& schema_name);

void write_csv_row(std::ofstream& out, const std::vector<std::string>& cells);
void write_csv_row(std::ofstream& out, const std::vector<double>& cells);

// Reads a CSV produced by this library: skips '#' comment lines, returns the
// header row and data rows as strings.
struct CsvContent {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvContent read_csv(const std::string& path);

}  // namespace fdoc
