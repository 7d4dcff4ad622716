#pragma once

#include <string>
#include <vector>

namespace finsler {

// Rectangular numeric table with a header row; serializes as RFC 4180 CSV
// with numbers printed to 17 significant digits.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
    std::string to_csv() const;
};

}  // namespace finsler
