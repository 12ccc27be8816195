#include "output.hpp"

#include <cmath>
#include <cstdio>

#include "ksreg/errors.hpp"

namespace ksreg::cli {

namespace {

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::ConfigInvalid, "cannot write '" + path.string() + "'");
  return out;
}

void join(std::ofstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::string>& units)
    : out_(open(path)), columns_(header.size()) {
  join(out_, header);
  join(out_, units);
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (const auto& c : cells) s.push_back(c.is_text ? c.text : format_double(c.number));
  s.resize(columns_);
  join(out_, s);
}

void write_json(const std::filesystem::path& path, const Json& j) {
  auto out = open(path);
  out << j.dump(2) << '\n';
}

}  // namespace ksreg::cli
