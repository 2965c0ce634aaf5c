#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nlperf {

// Minimal CSV support for the toolkit's file formats: comma-separated,
// header row required, no quoting (fields may not contain commas).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column, or nullopt.
    std::optional<std::size_t> column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in, const std::string& origin = "<stream>");
CsvTable read_csv_file(const std::string& path);

std::string to_csv_string(const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Strict double parse of a whole field; throws std::runtime_error on garbage.
double parse_double(const std::string& field, const std::string& context);

}  // namespace nlperf
