#include "edgemind/common/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "edgemind/common/errors.hpp"

namespace edgemind::csv {

Reader::Reader(const std::filesystem::path& path) : in_(path), source_(path.string()) {
  if (!in_) throw SchemaError("cannot open " + source_);
}

void Reader::expect_header(const std::vector<std::string>& expected) {
  std::vector<std::string> header;
  if (!next(header)) throw SchemaError(source_ + ": missing header");
  if (header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw SchemaError(source_ + ": header must be '" + want + "'");
  }
}

bool Reader::next(std::vector<std::string>& fields) {
  std::string raw;
  while (std::getline(in_, raw)) {
    ++line_;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    fields = split(raw);
    return true;
  }
  return false;
}

void Reader::fail(const std::string& what) const { throw ParseError(source_, line_, what); }

std::int64_t Reader::to_int(const std::string& field, std::string_view name) const {
  std::int64_t v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end) fail("bad integer for " + std::string(name) + ": '" + field + "'");
  return v;
}

double Reader::to_double(const std::string& field, std::string_view name) const {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    fail("bad number for " + std::string(name) + ": '" + field + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace edgemind::csv
