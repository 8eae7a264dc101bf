#pragma once

#include <map>
#include <string>
#include <vector>

namespace sgvem {

/// Flat `key = value` text configuration. Blank lines and lines whose first
/// non-blank character is '#' are skipped; keys are single tokens, values
/// run to the end of the line with surrounding blanks trimmed.
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  /// Accepts true/false, on/off, yes/no, 1/0.
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated reals.
  std::vector<double> get_double_list(const std::string& key) const;
  /// Comma-separated integers.
  std::vector<int> get_int_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace sgvem
