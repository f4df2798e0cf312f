#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mglcop::io {

// RFC 4180 table with a mandatory header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Throws ValidationError naming the column if it is absent.
    std::size_t column(const std::string& name) const;
    bool has(const std::string& name) const;
    std::vector<double> numeric(const std::string& name) const;
};

Table parse_csv(std::istream& in);
Table read_csv(const std::string& path);

std::string read_file(const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);
// "fnv1a64:" followed by 16 hex digits.
std::string checksum(std::string_view bytes);

// Quotes a field when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);
// Shortest decimal form that round-trips the double.
std::string format_double(double v);

}  // namespace mglcop::io
