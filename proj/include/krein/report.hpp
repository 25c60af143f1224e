#pragma once

// Check records, numeric tables and their JSON / CSV serialisation.
// JSON keys appear in a fixed order; CSV numbers use 17 significant digits.

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace krein {

enum class Relation { at_most, at_least, equal, info };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::at_most:
      return "<=";
    case Relation::at_least:
      return ">=";
    case Relation::equal:
      return "==";
    case Relation::info:
      return "info";
  }
  return "?";
}

/// One verified quantity. `info` records are reported but never fail.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::at_most;
  bool pass = false;

  static Check at_most(std::string name, double value, double tol) {
    return {std::move(name), value, tol, Relation::at_most, std::isfinite(value) && value <= tol};
  }
  static Check at_least(std::string name, double value, double bound) {
    return {std::move(name), value, bound, Relation::at_least, std::isfinite(value) && value >= bound};
  }
  static Check equal(std::string name, double value, double expected) {
    return {std::move(name), value, expected, Relation::equal, value == expected};
  }
  static Check flag(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, Relation::equal, ok}; }
  static Check info(std::string name, double value) { return {std::move(name), value, 0.0, Relation::info, true}; }
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table " + name + ": row width mismatch");
    rows.push_back(std::move(row));
  }
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::optional<std::uint64_t> seed;
  std::vector<Check> checks;
  std::vector<Table> tables;
  std::vector<std::string> notes;
  std::optional<double> wall_time_s;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(Check c) { checks.push_back(std::move(c)); }

  /// Appends another report's checks and tables with a name prefix.
  void absorb(const Report& other, const std::string& prefix) {
    for (auto c : other.checks) {
      c.name = prefix + c.name;
      checks.push_back(std::move(c));
    }
    for (auto t : other.tables) {
      t.name = prefix + t.name;
      tables.push_back(std::move(t));
    }
    for (const auto& n : other.notes) notes.push_back(prefix + n);
  }
};

/// Scientific notation with 17 significant digits.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << csv_escape(t.columns[c]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      std::visit(
          [&os](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>)
              os << format_double(v);
            else if constexpr (std::is_same_v<V, std::int64_t>)
              os << v;
            else
              os << csv_escape(v);
          },
          row[c]);
    }
    os << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json json_number(double v) {
  if (v == 0.0) return 0.0;
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline nlohmann::ordered_json to_json(const Report& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["command"] = r.command;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  j["seed"] = r.seed ? ordered_json(*r.seed) : ordered_json(nullptr);
  j["pass"] = r.pass();
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["residual"] = json_number(c.residual);
    e["relation"] = to_string(c.relation);
    e["tolerance"] = json_number(c.tolerance);
    e["pass"] = c.pass;
    checks.push_back(e);
  }
  j["checks"] = checks;
  ordered_json tables = ordered_json::array();
  for (const auto& t : r.tables) {
    ordered_json e;
    e["name"] = t.name;
    e["columns"] = t.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json jr = ordered_json::array();
      for (const auto& cell : row)
        std::visit(
            [&jr](const auto& v) {
              using V = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<V, double>)
                jr.push_back(json_number(v));
              else
                jr.push_back(v);
            },
            cell);
      rows.push_back(jr);
    }
    e["rows"] = rows;
    tables.push_back(e);
  }
  j["tables"] = tables;
  j["notes"] = r.notes;
  if (r.wall_time_s) j["wall_time_s"] = *r.wall_time_s;
  return j;
}

inline std::string to_json_text(const Report& r) { return to_json(r).dump(2) + "\n"; }

inline std::string sanitize_file_stem(std::string s) {
  for (char& ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')) ch = '_';
  return s;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

enum class Format { json, csv, both };

/// Writes `<stem>.json` and/or one `<stem>_<table>.csv` per table; returns the paths written.
inline std::vector<std::filesystem::path> emit(const Report& r, const std::filesystem::path& dir,
                                               const std::string& stem, Format format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  if (format != Format::csv) {
    const auto p = dir / (stem + ".json");
    write_text_file(p, to_json_text(r));
    written.push_back(p);
  }
  if (format != Format::json) {
    for (const auto& t : r.tables) {
      const auto p = dir / (stem + "_" + sanitize_file_stem(t.name) + ".csv");
      write_text_file(p, to_csv(t));
      written.push_back(p);
    }
  }
  return written;
}

}  // namespace krein
