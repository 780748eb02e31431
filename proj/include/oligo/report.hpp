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
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oligo/errors.hpp"
#include "oligo/model.hpp"
#include "oligo/policy.hpp"

namespace oligo {

enum class RowKind { Percent, Money, Parameter };

inline std::string_view to_string(RowKind k) {
  switch (k) {
    case RowKind::Percent: return "percent";
    case RowKind::Money: return "money";
    case RowKind::Parameter: return "parameter";
  }
  return "?";
}

inline RowKind parse_row_kind(std::string_view s) {
  if (s == "percent") return RowKind::Percent;
  if (s == "money") return RowKind::Money;
  if (s == "parameter") return RowKind::Parameter;
  fail(ErrorKind::ConfigError, "unknown row kind '" + std::string(s) + "'");
}

/// A cell holds a number in display units (percent for hats, million $ for
/// welfare) or, when the value is undefined or symbolic, only text.
struct Cell {
  std::optional<double> value;
  std::string text;  // "n/a", "inf", or empty
  bool exogenous = false;
};

struct TableRow {
  std::string key;    // stable identifier, e.g. "E_R", "W3", "param_n"
  std::string label;  // display label
  std::string panel;
  RowKind kind = RowKind::Percent;
  std::vector<Cell> cells;
};

struct TableModel {
  std::string name;
  std::vector<std::string> columns;
  std::vector<TableRow> rows;

  const TableRow* find(std::string_view key) const {
    for (const auto& r : rows)
      if (r.key == key) return &r;
    return nullptr;
  }
};

struct Precision {
  int percent = 2;
  int money = 1;
  int parameter = 2;
};

/// Half-away-from-zero rounding to a fixed number of decimals, with negative
/// zero printed as zero.
inline std::string format_fixed(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  double r = std::round(v * scale) / scale;
  if (r == 0.0) r = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
  return buf;
}

inline std::string format_full(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline int decimals_for(RowKind k, const Precision& p) {
  switch (k) {
    case RowKind::Percent: return p.percent;
    case RowKind::Money: return p.money;
    case RowKind::Parameter: return p.parameter;
  }
  return 2;
}

namespace detail {

inline Cell num(double v, bool exo = false) { return {v, "", exo}; }

inline std::string hat_label(std::string_view sym) {
  // combining circumflex after the leading symbol
  std::string s(sym);
  const std::size_t cut = s.find('_');
  const std::string head = cut == std::string::npos ? s : s.substr(0, cut);
  const std::string tail = cut == std::string::npos ? "" : s.substr(cut);
  return head + "̂" + tail;
}

}  // namespace detail

/// Assembles the panels selected by `spec` for results in column order.
inline TableModel build_table(const std::string& name, const std::vector<ScenarioResult>& results,
                              const TableSpec& spec) {
  using detail::num;
  TableModel t;
  t.name = name;
  for (const auto& r : results) t.columns.push_back(r.label);

  auto add = [&](std::string key, std::string label, std::string panel, RowKind kind, auto cell_of) {
    TableRow row{std::move(key), std::move(label), std::move(panel), kind, {}};
    for (const auto& r : results) row.cells.push_back(cell_of(r));
    t.rows.push_back(std::move(row));
  };

  if (spec.panel_a) {
    for (Instrument in : kInstruments) {
      bool any = false;
      for (const auto& r : results) any = any || component(r.shock, in) != 0.0;
      if (!any) continue;
      add(std::string(to_string(in)), detail::hat_label(to_string(in)), "A", RowKind::Percent,
          [in](const ScenarioResult& r) {
            const bool resolved = std::find(r.free.begin(), r.free.end(), in) != r.free.end();
            return num(100.0 * component(r.shock, in), !resolved);
          });
    }
  }
  if (spec.parameters) {
    auto ov = [](const ScenarioResult& r) { return r.overrides; };
    add("param_gamma", "gamma", "P", RowKind::Parameter, [&](const ScenarioResult& r) {
      return num(r.params.gamma, ov(r).gamma || ov(r).gamma_rule ||
                                     ov(r).mode == MarketMode::ForcePerfectCompetition);
    });
    add("param_sigma_E", "sigma_E", "P", RowKind::Parameter,
        [&](const ScenarioResult& r) { return num(r.params.sigma_E, ov(r).sigma_E.has_value()); });
    add("param_n", "n", "P", RowKind::Parameter, [&](const ScenarioResult& r) {
      const bool forced = ov(r).mode.has_value();
      if (r.params.n.is_infinite()) return Cell{std::nullopt, "inf", forced};
      if (r.params.n.value() == 1.0) return Cell{1.0, "1", forced};
      return num(r.params.n.value(), forced);
    });
    add("param_eps_ER", "eps_ER", "P", RowKind::Parameter,
        [&](const ScenarioResult& r) { return num(r.params.eps_ER, ov(r).eps_ER.has_value()); });
    add("param_eps_EX", "eps_EX", "P", RowKind::Parameter,
        [&](const ScenarioResult& r) { return num(r.params.eps_EX); });
  }
  if (spec.panels_bc) {
    static constexpr Hat order[] = {Hat::gamma, Hat::p_EX, Hat::p_ER, Hat::p_X, Hat::K_X, Hat::K_E,
                                    Hat::E,     Hat::E_R,  Hat::E_X,  Hat::X,   Hat::Z};
    for (Hat h : order) {
      add(std::string(to_string(h)), h == Hat::gamma ? "γ̂" : detail::hat_label(to_string(h)), "B",
          RowKind::Percent, [h](const ScenarioResult& r) { return num(100.0 * r.displacement[h]); });
    }
    add("Pi_E", "Π̂_E", "B", RowKind::Percent, [](const ScenarioResult& r) {
      if (!r.displacement.Pi_E) return Cell{std::nullopt, "n/a", false};
      return num(100.0 * *r.displacement.Pi_E);
    });
    add("T", "T̂", "B", RowKind::Percent, [](const ScenarioResult& r) { return num(100.0 * r.displacement.T); });
    add("total", "Total", "C", RowKind::Money, [](const ScenarioResult& r) { return num(r.welfare.total); });
    add("oligopoly_output", "Oligopoly output", "C", RowKind::Money,
        [](const ScenarioResult& r) { return num(r.welfare.three_term.oligopoly_output); });
    add("price_discrimination", "Price discrimination", "C", RowKind::Money,
        [](const ScenarioResult& r) { return num(r.welfare.three_term.price_discrimination); });
    add("externality", "Externality", "C", RowKind::Money,
        [](const ScenarioResult& r) { return num(r.welfare.three_term.externality); });
  }
  if (spec.six_term) {
    if (!spec.panels_bc)
      add("total", "Total", "W", RowKind::Money, [](const ScenarioResult& r) { return num(r.welfare.total); });
    for (int i = 0; i < 6; ++i) {
      const std::string key = "W" + std::to_string(i + 1);
      add(key, key, "W", RowKind::Money, [i](const ScenarioResult& r) { return num(r.welfare.six_term.W[i]); });
    }
  }
  return t;
}

inline std::string_view panel_title(std::string_view panel) {
  if (panel == "A") return "Panel A: exogenous policy change (%)";
  if (panel == "P") return "Parameters";
  if (panel == "B") return "Panel B: endogenous change (%)";
  if (panel == "C") return "Panel C: welfare change (million 2012$)";
  if (panel == "W") return "Welfare terms (million 2012$)";
  return "";
}

inline std::string render_cell(const Cell& c, RowKind kind, const Precision& p, bool mark_exogenous) {
  std::string s = c.value && c.text.empty() ? format_fixed(*c.value, decimals_for(kind, p)) : c.text;
  if (mark_exogenous && c.exogenous) s += "*";
  return s;
}

/// Fixed-width text layout. Exogenous cells carry a trailing '*'.
inline std::string render_paper_table(const TableModel& t, const Precision& p) {
  std::vector<std::vector<std::string>> body;
  std::size_t label_w = 0;
  std::size_t cell_w = 0;
  for (const auto& c : t.columns) cell_w = std::max(cell_w, c.size());
  for (const auto& r : t.rows) {
    std::vector<std::string> line;
    for (const auto& c : r.cells) {
      line.push_back(render_cell(c, r.kind, p, true));
      cell_w = std::max(cell_w, line.back().size());
    }
    body.push_back(std::move(line));
  }
  auto width = [](const std::string& s) {
    // count code points, ignoring combining marks
    std::size_t w = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto ch = static_cast<unsigned char>(s[i]);
      if ((ch & 0xC0) == 0x80) continue;
      if (ch == 0xCC && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) >= 0x80 &&
          static_cast<unsigned char>(s[i + 1]) <= 0xBF)
        continue;
      ++w;
    }
    return w;
  };
  for (const auto& r : t.rows) label_w = std::max(label_w, width(r.label));
  label_w = std::max<std::size_t>(label_w, 4);
  cell_w += 2;

  std::ostringstream os;
  auto pad_left = [](const std::string& s, std::size_t w) {
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
  };
  auto pad_right = [&](const std::string& s, std::size_t w) {
    const std::size_t vw = width(s);
    return vw >= w ? s : s + std::string(w - vw, ' ');
  };
  os << t.name << "\n";
  os << pad_right("Case", label_w);
  for (const auto& c : t.columns) os << pad_left(c, cell_w);
  os << "\n";
  std::string panel;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    if (r.panel != panel) {
      panel = r.panel;
      os << panel_title(panel) << "\n";
    }
    os << pad_right(r.label, label_w);
    for (const auto& s : body[i]) os << pad_left(s, cell_w);
    os << "\n";
  }
  return os.str();
}

/// Comma-separated values at full precision; undefined cells keep their text.
inline std::string render_delimited(const TableModel& t, char sep = ',') {
  std::ostringstream os;
  os << "row";
  for (const auto& c : t.columns) os << sep << c;
  os << "\n";
  for (const auto& r : t.rows) {
    os << r.key;
    for (const auto& c : r.cells) os << sep << (c.value && c.text.empty() ? format_full(*c.value) : c.text);
    os << "\n";
  }
  return os.str();
}

/// Same layout as the golden files, rounded per row kind.
inline std::string render_delimited_rounded(const TableModel& t, const Precision& p, char sep = ',') {
  std::ostringstream os;
  os << "row";
  for (const auto& c : t.columns) os << sep << c;
  os << "\n";
  for (const auto& r : t.rows) {
    os << r.key;
    for (const auto& c : r.cells) os << sep << render_cell(c, r.kind, p, false);
    os << "\n";
  }
  return os.str();
}

inline nlohmann::json table_to_json(const TableModel& t) {
  nlohmann::json j;
  j["table"] = t.name;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json row;
    row["key"] = r.key;
    row["label"] = r.label;
    row["panel"] = r.panel;
    row["kind"] = std::string(to_string(r.kind));
    row["cells"] = nlohmann::json::array();
    for (const auto& c : r.cells) {
      nlohmann::json cj;
      cj["value"] = c.value ? nlohmann::json(*c.value) : nlohmann::json(nullptr);
      if (!c.text.empty()) cj["text"] = c.text;
      cj["exogenous"] = c.exogenous;
      row["cells"].push_back(cj);
    }
    j["rows"].push_back(row);
  }
  return j;
}

inline TableModel table_from_json(const nlohmann::json& j) {
  try {
    TableModel t;
    t.name = j.at("table").get<std::string>();
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& rj : j.at("rows")) {
      TableRow r;
      r.key = rj.at("key").get<std::string>();
      r.label = rj.at("label").get<std::string>();
      r.panel = rj.at("panel").get<std::string>();
      r.kind = parse_row_kind(rj.at("kind").get<std::string>());
      for (const auto& cj : rj.at("cells")) {
        Cell c;
        if (!cj.at("value").is_null()) c.value = cj.at("value").get<double>();
        if (cj.contains("text")) c.text = cj.at("text").get<std::string>();
        c.exogenous = cj.at("exogenous").get<bool>();
        r.cells.push_back(std::move(c));
      }
      if (r.cells.size() != t.columns.size())
        fail(ErrorKind::ShapeMismatch, "row '" + r.key + "' has the wrong number of cells");
      t.rows.push_back(std::move(r));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("malformed table record: ") + e.what());
  }
}

/// One record per result with every field at full precision (fractions, not
/// percent), for downstream tools.
inline nlohmann::json result_to_json(const ScenarioResult& r) {
  nlohmann::json j;
  j["label"] = r.label;
  nlohmann::json shock;
  for (Instrument in : kInstruments) shock[std::string(to_string(in))] = component(r.shock, in);
  j["shock"] = shock;
  nlohmann::json hats;
  for (Hat h : kHats) hats[std::string(to_string(h))] = r.displacement[h];
  hats["Pi_E"] = r.displacement.Pi_E ? nlohmann::json(*r.displacement.Pi_E) : nlohmann::json(nullptr);
  hats["T"] = r.displacement.T;
  hats["A"] = r.displacement.A;
  hats["B"] = r.displacement.B;
  hats["C"] = r.displacement.C;
  j["displacement"] = hats;
  const auto& w = r.welfare;
  j["welfare"] = {{"total", w.total},
                  {"two_term", {{"market_power", w.two_term.market_power}, {"externality", w.two_term.externality}}},
                  {"three_term",
                   {{"oligopoly_output", w.three_term.oligopoly_output},
                    {"price_discrimination", w.three_term.price_discrimination},
                    {"externality", w.three_term.externality}}},
                  {"six_term", w.six_term.W}};
  const auto& t = r.theorems;
  j["theorems"] = {{"psi", t.psi},
                   {"omega", t.omega},
                   {"t1_applicable", t.t1_applicable},
                   {"t1_branch", std::string(to_string(t.t1_branch))},
                   {"t1_holds", t.t1_holds},
                   {"t2_necessary_holds", t.t2_necessary_holds},
                   {"t2_threshold", t.t2_threshold},
                   {"t2_sufficient_holds", t.t2_sufficient_holds}};
  const auto& p = r.params;
  j["params"] = {{"mode", std::string(to_string(p.mode))},
                 {"n", p.n.is_infinite() ? nlohmann::json("inf") : nlohmann::json(p.n.value())},
                 {"gamma", p.gamma},
                 {"delta", p.economy.delta},
                 {"eps_ER", p.eps_ER},
                 {"eps_EX", p.eps_EX},
                 {"sigma_U", p.sigma_U},
                 {"sigma_X", p.sigma_X},
                 {"sigma_E", p.sigma_E},
                 {"omega_E", p.omega_E},
                 {"rho_Z", p.rho_Z},
                 {"K_E", p.K_E},
                 {"K_X", p.K_X},
                 {"Pi_E", p.Pi_E},
                 {"T", p.T}};
  j["constraint_residual"] = r.constraint_residual;
  return j;
}

}  // namespace oligo
