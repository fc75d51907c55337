#ifndef XEBSIM_CONFIG_HPP_
#define XEBSIM_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace xebsim {

// Key/value configuration document with [section] headers, `key = value`
// lines and `#` comments. Values are scalars or whitespace-separated lists.
// Every entry remembers its line for diagnostics; schema validation rejects
// unknown sections and keys.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  long long get_int(const std::string& section, const std::string& key) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;
  std::vector<int> get_int_list(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& section,
                                           const std::string& key) const;

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;
  std::uint64_t get_u64_or(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;

  // Throws ConfigError (with the offending line) on unknown sections/keys or
  // missing required keys. Schema format: section -> allowed keys; keys
  // prefixed '!' are required.
  void enforce_schema(const std::map<std::string, std::set<std::string>>& schema) const;

  int line_of(const std::string& section, const std::string& key) const;
  const std::string& origin() const { return origin_; }
  const std::string& text() const { return text_; }
  std::uint64_t content_hash() const;  // FNV-1a of the raw text

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };

  const Entry& entry(const std::string& section, const std::string& key) const;

  std::string origin_;
  std::string text_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::map<std::string, int> section_lines_;
};

// Expand a depth specification: either an explicit strictly increasing list
// ("depths") or "depths_log = start stop count" producing a log-spaced grid
// of unique integers.
std::vector<int> resolve_depths(const Config& config, const std::string& section);

}  // namespace xebsim

#endif  // XEBSIM_CONFIG_HPP_
