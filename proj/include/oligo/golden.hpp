// Copyright 2026 The oligo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oligo/benchmark_io.hpp"
#include "oligo/errors.hpp"
#include "oligo/report.hpp"

namespace oligo {

/// A printed table: a header row "row,<case>..." then one row per key.
struct GoldenTable {
  std::vector<std::string> columns;
  std::vector<std::string> keys;
  std::vector<std::vector<std::string>> cells;

  std::optional<std::size_t> row_index(std::string_view key) const {
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (keys[i] == key) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> column_index(std::string_view col) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == col) return i;
    return std::nullopt;
  }
  const std::string& at(std::string_view key, std::string_view col) const {
    const auto r = row_index(key);
    const auto c = column_index(col);
    if (!r || !c) fail(ErrorKind::ShapeMismatch, "no cell (" + std::string(key) + ", " + std::string(col) + ")");
    return cells[*r][*c];
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

inline GoldenTable parse_golden(const std::string& text) {
  GoldenTable g;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = detail::split_csv_line(line);
    if (header) {
      if (f.empty() || f[0] != "row") fail(ErrorKind::ShapeMismatch, "line 1: header must start with 'row'");
      g.columns.assign(f.begin() + 1, f.end());
      header = false;
      continue;
    }
    if (f.size() != g.columns.size() + 1)
      fail(ErrorKind::ShapeMismatch, "line " + std::to_string(lineno) + ": expected " +
                                         std::to_string(g.columns.size() + 1) + " fields");
    g.keys.push_back(f[0]);
    g.cells.emplace_back(f.begin() + 1, f.end());
  }
  if (header) fail(ErrorKind::ShapeMismatch, "empty table");
  return g;
}

inline GoldenTable load_golden(const std::string& path) { return parse_golden(detail::read_file(path)); }

/// Rounding-aware tolerance for a printed cell.
inline double golden_tolerance(RowKind kind, double printed) {
  switch (kind) {
    case RowKind::Percent: return 0.02;
    case RowKind::Money: return std::max(5.0, 0.015 * std::abs(printed));
    case RowKind::Parameter: return 0.01;
  }
  return 0.0;
}

inline RowKind row_kind_for_key(std::string_view key) {
  if (key.starts_with("param_")) return RowKind::Parameter;
  if (key == "total" || key == "oligopoly_output" || key == "price_discrimination" || key == "externality" ||
      (key.size() == 2 && key[0] == 'W'))
    return RowKind::Money;
  return RowKind::Percent;
}

/// A printed cell replaced by the value its accounting identity implies.
struct Erratum {
  std::string table;
  std::string column;
  std::string key;
  double printed = 0.0;
  double corrected = 0.0;
  std::string identity;
};

inline std::vector<Erratum> parse_errata(const std::string& text) {
  std::vector<Erratum> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto f = detail::split_csv_line(line);
    if (f.size() != 6) fail(ErrorKind::ShapeMismatch, "errata rows need 6 fields");
    out.push_back({f[0], f[1], f[2], std::stod(f[3]), std::stod(f[4]), f[5]});
  }
  return out;
}

inline std::vector<Erratum> load_errata(const std::string& path) { return parse_errata(detail::read_file(path)); }

struct CellDiff {
  std::string key;
  std::string column;
  std::string printed;
  std::string emitted;
  double difference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool erratum = false;  // compared against the corrected value
};

struct GoldenDiff {
  std::string table;
  std::vector<CellDiff> cells;

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.pass ? 0 : 1;
    return n;
  }
  bool pass() const { return failures() == 0; }
  double max_ratio() const {
    double m = 0.0;
    for (const auto& c : cells)
      if (c.tolerance > 0.0) m = std::max(m, c.difference / c.tolerance);
    return m;
  }
};

inline std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

/// Cell-by-cell comparison of an emitted table with a printed one. Shapes
/// must agree exactly: same columns and same row keys in the same order.
inline GoldenDiff diff_golden(const TableModel& emitted, const GoldenTable& golden,
                              const std::vector<Erratum>& errata = {}, const std::string& table_name = "") {
  if (emitted.columns != golden.columns)
    fail(ErrorKind::ShapeMismatch, "column labels differ from the golden table");
  if (emitted.rows.size() != golden.keys.size())
    fail(ErrorKind::ShapeMismatch, "emitted " + std::to_string(emitted.rows.size()) + " rows, golden has " +
                                       std::to_string(golden.keys.size()));
  GoldenDiff d;
  d.table = table_name.empty() ? emitted.name : table_name;
  for (std::size_t i = 0; i < emitted.rows.size(); ++i) {
    const auto& row = emitted.rows[i];
    if (row.key != golden.keys[i])
      fail(ErrorKind::ShapeMismatch, "row " + std::to_string(i + 1) + " is '" + row.key + "', golden has '" +
                                         golden.keys[i] + "'");
    for (std::size_t j = 0; j < golden.columns.size(); ++j) {
      const Cell& cell = row.cells[j];
      CellDiff c;
      c.key = row.key;
      c.column = golden.columns[j];
      c.printed = golden.cells[i][j];
      c.emitted = cell.value && cell.text.empty() ? format_full(*cell.value) : cell.text;
      const auto printed = parse_number(c.printed);
      if (!printed || !cell.value || !cell.text.empty()) {
        // symbolic cells such as "n/a", "inf", "1" compare as text
        c.pass = c.printed == cell.text || (printed && cell.value && !cell.text.empty() && *printed == *cell.value);
        d.cells.push_back(c);
        continue;
      }
      double reference = *printed;
      for (const auto& e : errata) {
        if (e.table == d.table && e.column == c.column && e.key == c.key) {
          reference = e.corrected;
          c.erratum = true;
        }
      }
      c.tolerance = golden_tolerance(row.kind, reference);
      c.difference = std::abs(*cell.value - reference);
      c.pass = c.difference <= c.tolerance + 1e-9;
      d.cells.push_back(c);
    }
  }
  return d;
}

inline GoldenDiff diff_golden_text(const std::string& emitted_delimited, const GoldenTable& golden,
                                   const std::vector<Erratum>& errata = {}, const std::string& table_name = "") {
  const GoldenTable e = parse_golden(emitted_delimited);
  TableModel t;
  t.name = table_name;
  t.columns = e.columns;
  for (std::size_t i = 0; i < e.keys.size(); ++i) {
    TableRow r;
    r.key = e.keys[i];
    r.kind = row_kind_for_key(r.key);
    for (const auto& s : e.cells[i]) {
      Cell c;
      if (auto v = parse_number(s)) {
        c.value = v;
        if (r.key == "param_n" && *v == 1.0) c.text = s;
      } else {
        c.text = s;
      }
      r.cells.push_back(c);
    }
    t.rows.push_back(std::move(r));
  }
  return diff_golden(t, golden, errata, table_name);
}

inline std::string render_diff(const GoldenDiff& d, bool failures_only = true) {
  std::ostringstream os;
  for (const auto& c : d.cells) {
    if (failures_only && c.pass && !c.erratum) continue;
    os << d.table << "," << c.column << "," << c.key << "," << c.printed << "," << c.emitted << ","
       << (c.pass ? (c.erratum ? "ERRATUM" : "ok") : "FAIL") << "\n";
  }
  os << d.table << ": " << d.cells.size() << " cells, " << d.failures() << " failures\n";
  return os.str();
}

}  // namespace oligo
