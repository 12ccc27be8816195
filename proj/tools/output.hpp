#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace ksreg::cli {

using Json = nlohmann::ordered_json;

// Header row, units row, then data rows. Numbers use 17 significant digits; text cells are
// written verbatim.
class CsvWriter {
 public:
  struct Cell {
    Cell(double v) : number(v) {}
    Cell(int v) : number(v) {}
    Cell(long v) : number(static_cast<double>(v)) {}
    Cell(std::size_t v) : number(static_cast<double>(v)) {}
    Cell(const char* s) : text(s), is_text(true) {}
    Cell(std::string s) : text(std::move(s)), is_text(true) {}
    double number = 0.0;
    std::string text;
    bool is_text = false;
  };

  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
            const std::vector<std::string>& units);
  void row(const std::vector<Cell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

std::string format_double(double x);

// NaN and infinities become null.
Json number(double x);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace ksreg::cli
