#include "finsler/table.hpp"

#include <cstdio>
#include <sstream>

#include "finsler/error.hpp"

namespace finsler {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw InvalidArgument("table row has " + std::to_string(row.size()) + " cells, expected " +
                              std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << quote(columns[i]);
    os << "\r\n";
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            os << (i ? "," : "") << buf;
        }
        os << "\r\n";
    }
    return os.str();
}

}  // namespace finsler
