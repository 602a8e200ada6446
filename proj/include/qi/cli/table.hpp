#pragma once

// Flat result tables and their CSV / JSON-lines encodings. Both encodings are
// produced from the same rows, so a JSON line mirrors one CSV record.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qi::cli {

using Cell = std::variant<std::monostate, std::string, double, std::int64_t, std::vector<double>>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Shortest decimal text that round-trips to the same double.
inline std::string formatDouble(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Fixed-point text, used where output only needs to be stable (SVG geometry).
inline std::string formatFixed(double x, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

/// Quotes a field when it contains a comma, quote or line break (RFC 4180).
inline std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string cellText(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double x) const { return formatDouble(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(const std::vector<double>& v) const {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += formatDouble(v[i]);
      }
      return out;
    }
  };
  return std::visit(Visitor{}, c);
}

inline void writeCsv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csvField(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csvField(cellText(row[i]));
    os << '\n';
  }
}

inline nlohmann::ordered_json cellJson(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(double x) const { return x; }
    nlohmann::ordered_json operator()(std::int64_t x) const { return x; }
    nlohmann::ordered_json operator()(const std::vector<double>& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

inline nlohmann::ordered_json rowJson(const Table& t, const std::vector<Cell>& row) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i) obj[t.columns[i]] = cellJson(row[i]);
  return obj;
}

inline void writeJsonLines(std::ostream& os, const Table& t) {
  for (const auto& row : t.rows) os << rowJson(t, row).dump() << '\n';
}

}  // namespace qi::cli
