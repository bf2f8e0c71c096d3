#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dprl {

// Flat key = value text: one pair per line, '#' starts a comment, blank
// lines ignored. Lists are comma separated; integer lists also accept
// "a:b" (inclusive range) and real lists "lo:hi:k" (k log-spaced points).
class KvConfig {
 public:
  static KvConfig from_file(const std::string& path);
  static KvConfig from_string(const std::string& text);

  bool has(const std::string& key) const;
  std::vector<std::string> keys() const;  // insertion order

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;

  std::vector<std::string> get_string_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::int64_t> get_int_list(const std::string& key) const;

 private:
  const std::string& raw(const std::string& key) const;
  std::vector<std::string> order_;
  std::map<std::string, std::string> values_;
};

std::string trim(const std::string& s);
double parse_double(const std::string& text);      // whole-token, finite
std::int64_t parse_int(const std::string& text);   // whole-token
bool parse_bool(const std::string& text);          // true/false/yes/no/1/0

}  // namespace dprl
