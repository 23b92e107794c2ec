#include "fdoc/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fdoc {

std::string format_sig(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_csv(const std::string& path, const std::string& schema_name) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "# fdoc " << schema_name << " v1\n";
    return out;
}

void write_csv_row(std::ofstream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

void write_csv_row(std::ofstream& out, const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << format_sig(cells[i]);
    }
    out << '\n';
}

CsvContent read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    CsvContent content;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header_seen) {
            content.header = cells;
            header_seen = true;
        } else {
            content.rows.push_back(cells);
        }
    }
    return content;
}

}  // namespace fdoc
