#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qlrt/model.hpp"

namespace qlrt {

// Flat `key = value` configuration with `#` comments. Keys are consumed by
// typed getters; finish() rejects anything left over, so misspelled keys
// fail before any computation starts.
class ConfigMap {
 public:
  static ConfigMap from_file(const std::string& path);
  static ConfigMap from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);  // CLI overlay
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  double get_double(const std::string& key, double fallback);
  double require_double(const std::string& key);
  int get_int(const std::string& key, int fallback);
  int require_int(const std::string& key);
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback);
  std::vector<double> require_doubles(const std::string& key);
  std::vector<int> get_ints(const std::string& key,
                            const std::vector<int>& fallback);
  // "lo:hi,lo:hi,..." with per-entry defaults of [-10, 10]
  Box get_box(const std::string& key, int dim);

  // Throws ConfigError naming the first unconsumed key.
  void finish() const;

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
  const std::string& fetch(const std::string& key);
};

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& key);

}  // namespace qlrt
