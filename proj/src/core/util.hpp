#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace semdiff {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace util {

// RFC-4180 field quoting; only quotes when needed so output stays stable.
std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

// Fixed-precision float formatting used by every tabular export
// (shortest round-trip form keeps outputs deterministic across runs).
std::string fmt_double(double v);

uint64_t fnv1a64(std::string_view data);
uint64_t fnv1a64_file(const std::filesystem::path& p);
std::string hex64(uint64_t v);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Parses one RFC-4180 record (no embedded newlines inside quoted fields).
std::vector<std::string> csv_parse_line(std::string_view line);

// Reads a CSV file: first row is the header, rows become field vectors.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  size_t col(std::string_view name) const;  // throws on unknown column
};
CsvTable read_csv(const std::filesystem::path& p);

}  // namespace util
}  // namespace semdiff
