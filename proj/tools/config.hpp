#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ksreg::cli {

// Flat "key = value" configuration. Blank lines and lines starting with '#' are ignored.
// Every malformed line, duplicate key or unknown key raises ConfigInvalid.
class Config {
 public:
  Config() = default;
  static Config parse(const std::string& text, const std::string& origin);
  static Config load(const std::string& path);

  // Rejects keys outside the allowed set.
  void restrict_to(const std::set<std::string>& allowed, const std::string& command) const;

  bool empty() const { return values_.empty(); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  double number(const std::string& key, double fallback) const;
  double required_number(const std::string& key) const;
  // Positive and finite.
  double positive(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  // Comma-separated numbers.
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const;

 private:
  std::map<std::string, std::string> values_;
  std::string origin_ = "<defaults>";
};

}  // namespace ksreg::cli
