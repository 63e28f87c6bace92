// io.hpp — CSV and JSON emission, number formatting, config-file parsing.
// CSV is the primary exchange format: headers always emitted, '.' decimal
// separator, values printed with 17 significant digits so they round-trip.

#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"   // vendored nlohmann/json

namespace platonet {

using Json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void comment(const std::string& text) { os_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& columns) { row_strings(columns); }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

    void row(const std::vector<double>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << format_double(cells[i]);
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Parses the CSV dialect emitted by CsvWriter ('#' comments, one header row).
inline CsvTable parse_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            t.columns = cells;
            have_header = true;
        } else {
            std::vector<double> vals;
            vals.reserve(cells.size());
            for (auto& c : cells) vals.push_back(std::stod(c));
            t.rows.push_back(std::move(vals));
        }
    }
    return t;
}

} // namespace platonet
