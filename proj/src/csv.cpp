#include "bcwave/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bcwave {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static bool parse_row(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(cell, &pos);
            out.push_back(v);
        } catch (const std::exception&) {
            return false;
        }
    }
    return !out.empty();
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    std::vector<double> row;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (parse_row(line, row)) {
            table.rows.push_back(row);
        } else if (first) {
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) table.header.push_back(cell);
        }
        first = false;
    }
    return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

void write_field_csv(const std::string& path, const std::vector<std::vector<double>>& field,
                     double h) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    if (field.empty()) return;
    out << "t/x";
    for (std::size_t i = 0; i < field.front().size(); ++i)
        out << "," << format_double(double(i) * h);
    out << "\n";
    for (std::size_t j = 0; j < field.size(); ++j) {
        out << format_double(double(j) * h);
        for (double v : field[j]) out << "," << format_double(v);
        out << "\n";
    }
}

} // namespace bcwave
