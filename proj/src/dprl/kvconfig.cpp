#include "dprl/kvconfig.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dprl/common.hpp"

namespace dprl {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text) {
  const std::string token = trim(text);
  require(!token.empty(), ErrorCode::parse_error, "empty numeric value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  require(end == token.c_str() + token.size() && errno != ERANGE &&
              std::isfinite(v),
          ErrorCode::parse_error, "not a finite real: '" + token + "'");
  return v;
}

std::int64_t parse_int(const std::string& text) {
  const std::string token = trim(text);
  require(!token.empty(), ErrorCode::parse_error, "empty integer value");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(token.c_str(), &end, 10);
  require(end == token.c_str() + token.size() && errno != ERANGE,
          ErrorCode::parse_error, "not an integer: '" + token + "'");
  return static_cast<std::int64_t>(v);
}

bool parse_bool(const std::string& text) {
  const std::string token = trim(text);
  if (token == "true" || token == "yes" || token == "1") return true;
  if (token == "false" || token == "no" || token == "0") return false;
  fail(ErrorCode::parse_error, "not a boolean: '" + token + "'");
}

KvConfig KvConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io_error, "cannot open config: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

KvConfig KvConfig::from_string(const std::string& text) {
  KvConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require(!key.empty(), ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": empty key");
    require(config.values_.find(key) == config.values_.end(),
            ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": duplicate key '" + key +
                "'");
    config.order_.push_back(key);
    config.values_[key] = value;
  }
  return config;
}

bool KvConfig::has(const std::string& key) const {
  return values_.find(key) != values_.end();
}

std::vector<std::string> KvConfig::keys() const { return order_; }

const std::string& KvConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  require(it != values_.end(), ErrorCode::schema_error,
          "missing config key '" + key + "'");
  return it->second;
}

std::string KvConfig::get_string(const std::string& key) const {
  return raw(key);
}

std::string KvConfig::get_string(const std::string& key,
                                 const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

double KvConfig::get_double(const std::string& key) const {
  return parse_double(raw(key));
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? parse_double(raw(key)) : fallback;
}

std::int64_t KvConfig::get_int(const std::string& key) const {
  return parse_int(raw(key));
}

std::int64_t KvConfig::get_int(const std::string& key,
                               std::int64_t fallback) const {
  return has(key) ? parse_int(raw(key)) : fallback;
}

bool KvConfig::get_bool(const std::string& key) const {
  return parse_bool(raw(key));
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? parse_bool(raw(key)) : fallback;
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string current;
  std::istringstream in(value);
  while (std::getline(in, current, ',')) {
    current = trim(current);
    if (!current.empty()) items.push_back(current);
  }
  return items;
}

}  // namespace

std::vector<std::string> KvConfig::get_string_list(
    const std::string& key) const {
  return split_list(raw(key));
}

std::vector<double> KvConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : split_list(raw(key))) {
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_double(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    require(c2 != std::string::npos, ErrorCode::parse_error,
            "real ranges need lo:hi:count, got '" + item + "'");
    const double lo = parse_double(item.substr(0, c1));
    const double hi = parse_double(item.substr(c1 + 1, c2 - c1 - 1));
    const std::int64_t count = parse_int(item.substr(c2 + 1));
    require(lo > 0.0 && hi > lo && count >= 2, ErrorCode::parse_error,
            "log range needs 0 < lo < hi and count >= 2: '" + item + "'");
    for (std::int64_t i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
    }
  }
  return out;
}

std::vector<std::int64_t> KvConfig::get_int_list(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const std::string& item : split_list(raw(key))) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    const std::int64_t lo = parse_int(item.substr(0, colon));
    const std::int64_t hi = parse_int(item.substr(colon + 1));
    require(hi >= lo, ErrorCode::parse_error,
            "integer range needs lo <= hi: '" + item + "'");
    for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

}  // namespace dprl
