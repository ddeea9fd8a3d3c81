#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "krigmean/errors.hpp"

namespace krigmean::csv {

/// One parsed CSV file: a header row plus string cells, no quoting rules
/// beyond plain comma separation (all files this project emits are plain).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

/// Strips one trailing '\r' so both LF and CRLF inputs parse the same.
inline std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Table table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = chomp(line);
        if (first) {
            table.header = split_row(line);
            first = false;
        } else {
            table.rows.push_back(split_row(line));
        }
    }
    if (first) throw EmptyInput(path);
    return table;
}

/// Parses a full cell as a double; returns false on trailing garbage,
/// empty cells or locale surprises.
inline bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* begin = cell.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    return end == begin + cell.size();
}

/// Formats with 10 significant digits, the precision used by every CSV
/// this project writes.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path), path_(path) {
        if (!out_) throw IoError("cannot open " + path + " for writing");
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        if (!out_) throw IoError("write failed: " + path_);
    }

private:
    std::ofstream out_;
    std::string path_;
};

}  // namespace krigmean::csv
