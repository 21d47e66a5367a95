#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fjq::csv {

inline constexpr std::string_view schema_version = "fjq-csv-1";

/// Shortest round-trip decimal, always with a '.' or exponent ("1.0", "0.4").
std::string number(double x);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string escape(std::string_view field);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write(const Table& table, std::ostream& out);

}  // namespace fjq::csv
