#include "fjq/csv.hpp"

#include "fjq/numeric.hpp"

#include <ostream>

namespace fjq::csv {

std::string number(double x) {
    std::string s = format_double(x);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {
void write_row(const std::vector<std::string>& row, std::ostream& out) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << escape(row[i]);
    }
    out << "\r\n";
}
}  // namespace

void write(const Table& table, std::ostream& out) {
    write_row(table.header, out);
    for (const auto& row : table.rows) write_row(row, out);
}

}  // namespace fjq::csv
