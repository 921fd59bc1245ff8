#include "qlrt/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qlrt/errors.hpp"

namespace qlrt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw ConfigError("key '" + key + "': not a number: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& key) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    out.push_back(parse_double(part, key));
  }
  return out;
}

ConfigMap ConfigMap::from_string(const std::string& text) {
  ConfigMap m;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    }
    if (m.values_.count(key) != 0) {
      throw ConfigError("config: duplicate key '" + key + "'");
    }
    m.values_[key] = value;
  }
  return m;
}

ConfigMap ConfigMap::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return from_string(buf.str());
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool ConfigMap::has(const std::string& key) const {
  return values_.count(key) != 0;
}

const std::string& ConfigMap::fetch(const std::string& key) {
  consumed_.insert(key);
  return values_.at(key);
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) {
  return has(key) ? fetch(key) : fallback;
}

std::string ConfigMap::require_string(const std::string& key) {
  if (!has(key)) throw ConfigError("missing required key '" + key + "'");
  return fetch(key);
}

double ConfigMap::get_double(const std::string& key, double fallback) {
  return has(key) ? parse_double(fetch(key), key) : fallback;
}

double ConfigMap::require_double(const std::string& key) {
  return parse_double(require_string(key), key);
}

int ConfigMap::get_int(const std::string& key, int fallback) {
  if (!has(key)) return fallback;
  const double v = parse_double(fetch(key), key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError("key '" + key + "': expected an integer");
  }
  return i;
}

int ConfigMap::require_int(const std::string& key) {
  if (!has(key)) throw ConfigError("missing required key '" + key + "'");
  return get_int(key, 0);
}

std::uint64_t ConfigMap::get_seed(const std::string& key,
                                  std::uint64_t fallback) {
  if (!has(key)) return fallback;
  const std::string s = fetch(key);
  try {
    return std::stoull(s);
  } catch (...) {
    throw ConfigError("key '" + key + "': expected an unsigned integer");
  }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const std::string s = fetch(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false");
}

std::vector<double> ConfigMap::get_doubles(const std::string& key,
                                           const std::vector<double>& fallback) {
  return has(key) ? parse_double_list(fetch(key), key) : fallback;
}

std::vector<double> ConfigMap::require_doubles(const std::string& key) {
  return parse_double_list(require_string(key), key);
}

std::vector<int> ConfigMap::get_ints(const std::string& key,
                                     const std::vector<int>& fallback) {
  if (!has(key)) return fallback;
  std::vector<int> out;
  for (double v : parse_double_list(fetch(key), key)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw ConfigError("key '" + key + "': expected integers");
    }
    out.push_back(i);
  }
  return out;
}

Box ConfigMap::get_box(const std::string& key, int dim) {
  Box box(static_cast<std::size_t>(dim), Interval{});
  if (!has(key)) return box;
  const auto parts = split(fetch(key), ',');
  if (static_cast<int>(parts.size()) != dim) {
    throw ConfigError("key '" + key + "': expected " + std::to_string(dim) +
                      " lo:hi intervals");
  }
  for (int j = 0; j < dim; ++j) {
    const auto& p = parts[static_cast<std::size_t>(j)];
    const auto colon = p.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("key '" + key + "': interval must look like lo:hi");
    }
    box[static_cast<std::size_t>(j)].lo =
        parse_double(trim(p.substr(0, colon)), key);
    box[static_cast<std::size_t>(j)].hi =
        parse_double(trim(p.substr(colon + 1)), key);
    if (box[static_cast<std::size_t>(j)].lo >
        box[static_cast<std::size_t>(j)].hi) {
      throw ConfigError("key '" + key + "': empty interval");
    }
  }
  return box;
}

void ConfigMap::finish() const {
  for (const auto& [key, value] : values_) {
    if (consumed_.count(key) == 0) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

}  // namespace qlrt
