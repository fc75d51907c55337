#include "xebsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "xebsim/errors.hpp"

namespace xebsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  cfg.text_ = text;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    std::size_t comment = t.find('#');
    if (comment != std::string::npos) t = trim(t.substr(0, comment));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(origin, lineno, "malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError(origin, lineno, "empty section name");
      if (cfg.sections_.count(section)) {
        throw ConfigError(origin, lineno, "duplicate section [" + section + "]");
      }
      cfg.sections_[section] = {};
      cfg.section_lines_[section] = lineno;
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(origin, lineno, "expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin, lineno, "empty key");
    if (section.empty()) throw ConfigError(origin, lineno, "key outside any [section]");
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) throw ConfigError(origin, lineno, "duplicate key '" + key + "'");
    sec[key] = {value, lineno};
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) throw ConfigError(origin_ + ": missing section [" + section + "]");
  auto k = s->second.find(key);
  if (k == s->second.end()) {
    throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
  }
  return k->second;
}

int Config::line_of(const std::string& section, const std::string& key) const {
  return entry(section, key).line;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  return entry(section, key).value;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  try {
    std::size_t pos = 0;
    double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin_, e.line, "expected a number for '" + key + "'");
  }
}

long long Config::get_int(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  try {
    std::size_t pos = 0;
    long long v = std::stoll(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin_, e.line, "expected an integer for '" + key + "'");
  }
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin_, e.line, "expected an unsigned integer for '" + key + "'");
  }
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(origin_, e.line, "expected true/false for '" + key + "'");
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
  const Entry& e = entry(section, key);
  std::vector<double> out;
  for (const std::string& tok : split_ws(e.value)) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError(origin_, e.line, "expected numbers for '" + key + "'");
    }
  }
  if (out.empty()) throw ConfigError(origin_, e.line, "empty list for '" + key + "'");
  return out;
}

std::vector<int> Config::get_int_list(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  std::vector<int> out;
  for (const std::string& tok : split_ws(e.value)) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError(origin_, e.line, "expected integers for '" + key + "'");
    }
  }
  if (out.empty()) throw ConfigError(origin_, e.line, "empty list for '" + key + "'");
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& section,
                                                 const std::string& key) const {
  return split_ws(entry(section, key).value);
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}
double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}
long long Config::get_int_or(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}
std::uint64_t Config::get_u64_or(const std::string& section, const std::string& key,
                                 std::uint64_t fallback) const {
  return has(section, key) ? get_u64(section, key) : fallback;
}
bool Config::get_bool_or(const std::string& section, const std::string& key,
                         bool fallback) const {
  return has(section, key) ? get_bool(section, key) : fallback;
}

void Config::enforce_schema(const std::map<std::string, std::set<std::string>>& schema) const {
  for (const auto& [section, keys] : sections_) {
    auto it = schema.find(section);
    if (it == schema.end()) {
      throw ConfigError(origin_, section_lines_.at(section), "unknown section [" + section + "]");
    }
    for (const auto& [key, e] : keys) {
      if (!it->second.count(key) && !it->second.count("!" + key)) {
        throw ConfigError(origin_, e.line,
                          "unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
  for (const auto& [section, keys] : schema) {
    for (const std::string& key : keys) {
      if (key.rfind('!', 0) != 0) continue;
      const std::string required = key.substr(1);
      if (!has(section, required)) {
        throw ConfigError(origin_ + ": missing required key '" + required + "' in [" + section +
                          "]");
      }
    }
  }
}

std::uint64_t Config::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text_) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<int> resolve_depths(const Config& config, const std::string& section) {
  const bool has_list = config.has(section, "depths");
  const bool has_log = config.has(section, "depths_log");
  if (has_list == has_log) {
    throw ConfigError(config.origin() + ": [" + section +
                      "] needs exactly one of 'depths' or 'depths_log'");
  }
  if (has_list) {
    std::vector<int> depths = config.get_int_list(section, "depths");
    for (std::size_t i = 1; i < depths.size(); ++i) {
      if (depths[i] <= depths[i - 1]) {
        throw ConfigError(config.origin(), config.line_of(section, "depths"),
                          "depths must be strictly increasing");
      }
    }
    return depths;
  }
  std::vector<int> spec = config.get_int_list(section, "depths_log");
  if (spec.size() != 3 || spec[0] < 1 || spec[1] < spec[0] || spec[2] < 2) {
    throw ConfigError(config.origin(), config.line_of(section, "depths_log"),
                      "depths_log needs: start stop count (start >= 1, count >= 2)");
  }
  std::vector<int> depths;
  const double lo = std::log(static_cast<double>(spec[0]));
  const double hi = std::log(static_cast<double>(spec[1]));
  for (int i = 0; i < spec[2]; ++i) {
    const double t = spec[2] == 1 ? 0.0 : static_cast<double>(i) / (spec[2] - 1);
    const int m = static_cast<int>(std::lround(std::exp(lo + t * (hi - lo))));
    if (depths.empty() || m > depths.back()) depths.push_back(m);
  }
  return depths;
}

}  // namespace xebsim
