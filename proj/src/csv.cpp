#include "wakefc/csv.hpp"

#include "wakefc/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace wakefc {

std::size_t Table::column(std::string_view name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw DomainError("table has no column " + std::string(name));
    }
    return static_cast<std::size_t>(it - header.begin());
}

std::string format_double(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view s)
{
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw DomainError("not a number: '" + std::string(s) + "'");
    }
    return x;
}

namespace {

void write_field(std::ostream& os, const std::string& f)
{
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
        os << f;
        return;
    }
    os << '"';
    for (char c : f) {
        if (c == '"') {
            os << '"';
        }
        os << c;
    }
    os << '"';
}

void write_record(std::ostream& os, const std::vector<std::string>& rec)
{
    for (std::size_t i = 0; i < rec.size(); ++i) {
        if (i) {
            os << ',';
        }
        write_field(os, rec[i]);
    }
    os << "\r\n";
}

} // namespace

void write_csv(std::ostream& os, const Table& t)
{
    write_record(os, t.header);
    for (const auto& r : t.rows) {
        if (r.size() != t.header.size()) {
            throw DomainError("csv: row width does not match the header");
        }
        write_record(os, r);
    }
}

std::string to_csv(const Table& t)
{
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

Table parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t i = 0;
    const auto end_record = [&] {
        rec.push_back(std::move(field));
        field.clear();
        records.push_back(std::move(rec));
        rec.clear();
        field_started = false;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
            } else {
                field += c;
            }
            ++i;
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            rec.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\r' || c == '\n') {
            end_record();
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
        } else {
            field += c;
            field_started = true;
        }
        ++i;
    }
    if (quoted) {
        throw DomainError("csv: unterminated quoted field");
    }
    if (field_started || !rec.empty()) {
        end_record();
    }
    if (records.empty()) {
        throw DomainError("csv: missing header row");
    }
    Table t;
    t.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.header.size()) {
            throw DomainError("csv: record " + std::to_string(r + 1) + " has the wrong number of fields");
        }
        t.rows.push_back(std::move(records[r]));
    }
    return t;
}

void write_csv_file(const std::string& path, const Table& t)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot open " + path + " for writing");
    }
    write_csv(f, t);
    if (!f) {
        throw Error("write to " + path + " failed");
    }
}

Table read_csv_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

} // namespace wakefc
