#pragma once

#include <string>
#include <vector>

namespace bcwave {

/// Floats are printed with 17 significant digits everywhere so that runs are
/// byte-reproducible and diffable.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV. A first line that fails to parse as numbers is kept
/// as the header.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Matrix layout used for wave fields: first row "t/x", x_0 ... x_N; every
/// following row starts with t_j.
void write_field_csv(const std::string& path, const std::vector<std::vector<double>>& field,
                     double h);

} // namespace bcwave
