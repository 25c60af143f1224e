#pragma once

// Parameter parsing for the command-line surface: typed values from text,
// flat key=value files, and named usage errors.

#include "krein/numerics.hpp"
#include "krein/point_interaction.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace krein::config {

/// Malformed or unknown parameter; carries the offending key.
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : "parameter '" + key + "': " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool parse_double_text(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  if (!parse_double_text(trim(text), v) || !std::isfinite(v))
    throw UsageError(key, "expected a finite number, got '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw UsageError(key, "expected an integer, got '" + text + "'");
  return v;
}

/// Complex numbers written as "re+imi": "1", "-2.5", "i", "-i", "0.5i", "1-2i", "3e-1+1e2i".
inline cplx parse_complex(const std::string& key, const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  auto fail = [&]() -> cplx { throw UsageError(key, "expected a complex number like 1-2i, got '" + text + "'"); };
  if (s.empty()) return fail();
  if (s.back() != 'i') {
    double re = 0.0;
    if (!parse_double_text(s, re)) return fail();
    return {re, 0.0};
  }
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re_text = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_text = split == std::string::npos ? s : s.substr(split);
  if (im_text.empty() || im_text == "+") im_text = "1";
  if (im_text == "-") im_text = "-1";
  double re = 0.0, im = 0.0;
  if (!re_text.empty() && !parse_double_text(re_text, re)) return fail();
  if (!parse_double_text(im_text, im)) return fail();
  if (!std::isfinite(re) || !std::isfinite(im)) return fail();
  return {re, im};
}

inline std::string format_complex(cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

/// Sweep range "start:stop:count" (count >= 1); a bare number is a single point.
inline point::SweepAxis parse_axis(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  const auto c1 = t.find(':');
  if (c1 == std::string::npos) return {parse_double(key, t), parse_double(key, t), 1};
  const auto c2 = t.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError(key, "expected start:stop:count, got '" + text + "'");
  point::SweepAxis a;
  a.start = parse_double(key, t.substr(0, c1));
  a.stop = parse_double(key, t.substr(c1 + 1, c2 - c1 - 1));
  const long long n = parse_integer(key, t.substr(c2 + 1));
  if (n < 1 || n > 100000) throw UsageError(key, "sweep count must be between 1 and 100000");
  a.count = static_cast<int>(n);
  return a;
}

/// Reads "key = value" lines; '#' starts a comment, blank lines are ignored.
inline std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config", "cannot read file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config", path + ":" + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError("config", path + ":" + std::to_string(number) + ": empty key");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

struct ParamSpec {
  std::string key;
  std::string default_value;
  std::string help;
};

/// Resolved parameters of one command, in declaration order.
class Settings {
 public:
  Settings() = default;
  explicit Settings(std::vector<std::pair<std::string, std::string>> values) : values_(std::move(values)) {}

  const std::vector<std::pair<std::string, std::string>>& values() const { return values_; }

  const std::string& text(const std::string& key) const {
    for (const auto& [k, v] : values_)
      if (k == key) return v;
    throw UsageError(key, "unknown parameter");
  }
  double number(const std::string& key) const { return parse_double(key, text(key)); }
  double positive(const std::string& key) const {
    const double v = number(key);
    if (!(v > 0.0)) throw UsageError(key, "must be positive");
    return v;
  }
  int integer(const std::string& key, long long min_value, long long max_value = 1000000000LL) const {
    const long long v = parse_integer(key, text(key));
    if (v < min_value || v > max_value)
      throw UsageError(key, "must be between " + std::to_string(min_value) + " and " + std::to_string(max_value));
    return static_cast<int>(v);
  }
  std::uint64_t seed(const std::string& key) const {
    const long long v = parse_integer(key, text(key));
    if (v < 0) throw UsageError(key, "seed must be non-negative");
    return static_cast<std::uint64_t>(v);
  }
  cplx complex(const std::string& key) const { return parse_complex(key, text(key)); }
  point::SweepAxis axis(const std::string& key) const { return parse_axis(key, text(key)); }

 private:
  std::vector<std::pair<std::string, std::string>> values_;
};

/// Defaults, then file entries, then explicit flags (flags win). Unknown keys are usage errors.
inline Settings resolve(const std::vector<ParamSpec>& specs,
                        const std::vector<std::pair<std::string, std::string>>& file_values,
                        const std::map<std::string, std::string>& flag_values) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : specs) out.emplace_back(s.key, s.default_value);
  auto assign = [&](const std::string& key, const std::string& value) {
    for (auto& [k, v] : out)
      if (k == key) {
        v = value;
        return;
      }
    throw UsageError(key, "unknown parameter");
  };
  for (const auto& [k, v] : file_values) assign(k, v);
  for (const auto& [k, v] : flag_values) assign(k, v);
  return Settings(std::move(out));
}

}  // namespace krein::config
