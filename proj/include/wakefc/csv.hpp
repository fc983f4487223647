#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wakefc {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const; // throws when absent
    bool operator==(const Table&) const = default;
};

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);
double parse_double(std::string_view s);

/// Header row first, CRLF line ends, fields quoted only when they contain a
/// comma, quote or line break.
void write_csv(std::ostream& os, const Table& t);
std::string to_csv(const Table& t);

Table parse_csv(std::string_view text);

void write_csv_file(const std::string& path, const Table& t);
Table read_csv_file(const std::string& path);

} // namespace wakefc
