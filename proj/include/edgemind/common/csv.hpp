#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace edgemind::csv {

// Line-oriented reader for the plain comma-separated files this project
// writes. No quoting: fields never contain commas.
class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);

  // Validates the header row against `expected`; throws SchemaError.
  void expect_header(const std::vector<std::string>& expected);

  // Next non-empty record, or false at end of file.
  bool next(std::vector<std::string>& fields);

  std::size_t line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

  [[noreturn]] void fail(const std::string& what) const;

  std::int64_t to_int(const std::string& field, std::string_view name) const;
  double to_double(const std::string& field, std::string_view name) const;

 private:
  std::ifstream in_;
  std::string source_;
  std::size_t line_ = 0;
};

std::vector<std::string> split(std::string_view line, char sep = ',');

// Shortest round-trip representation of a double.
std::string format_double(double v);

}  // namespace edgemind::csv
