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

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oligo/errors.hpp"
#include "oligo/model.hpp"

namespace oligo {

using json = nlohmann::json;

namespace detail {

/// Translates a byte offset into "line L, column C" for diagnostics.
inline std::string text_position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, source + ": " + text_position(text, e.byte) + ": malformed document");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Field order of the benchmark document.
inline const std::vector<std::string>& benchmark_keys() {
  static const std::vector<std::string> keys = {"E_R", "E_X", "p_ER", "p_EX", "t_ER", "t_EX",
                                                "gamma", "delta", "Z", "mu", "t_Z", "I",
                                                "t_KE", "t_KX", "q_K", "sigma_E", "eps_ER"};
  return keys;
}

/// Reads a benchmark document. Each value is a number or
/// {"fraction_of": "<plain numeric key>", "rate": r}. gamma and q_K may be
/// omitted; every other key is required and unknown keys are rejected.
inline BenchmarkEconomy parse_benchmark(const json& doc, const std::string& source = "benchmark") {
  if (!doc.is_object()) fail(ErrorKind::ConfigError, source + ": expected an object");
  const auto& keys = benchmark_keys();
  for (const auto& [k, v] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      fail(ErrorKind::ConfigError, source + ": field '" + k + "': unknown key");
  }
  std::map<std::string, double> plain;
  for (const auto& [k, v] : doc.items())
    if (v.is_number()) plain[k] = v.get<double>();

  auto value = [&](const std::string& k) -> std::optional<double> {
    if (!doc.contains(k)) return std::nullopt;
    const json& v = doc.at(k);
    if (v.is_number()) return v.get<double>();
    if (v.is_object()) {
      for (const auto& [kk, vv] : v.items())
        if (kk != "fraction_of" && kk != "rate")
          fail(ErrorKind::ConfigError, source + ": field '" + k + "." + kk + "': unknown key");
      if (!v.contains("fraction_of") || !v.contains("rate") || !v.at("fraction_of").is_string() ||
          !v.at("rate").is_number())
        fail(ErrorKind::ConfigError, source + ": field '" + k + "': needs string fraction_of and numeric rate");
      const std::string base = v.at("fraction_of").get<std::string>();
      auto it = plain.find(base);
      if (it == plain.end())
        fail(ErrorKind::ConfigError, source + ": field '" + k + "': fraction_of must name a numeric field");
      return v.at("rate").get<double>() * it->second;
    }
    fail(ErrorKind::ConfigError, source + ": field '" + k + "': expected a number or a fraction object");
  };
  auto required = [&](const std::string& k) {
    auto v = value(k);
    if (!v) fail(ErrorKind::ConfigError, source + ": field '" + k + "': missing");
    return *v;
  };

  BenchmarkEconomy b;
  b.E_R = required("E_R");
  b.E_X = required("E_X");
  b.p_ER = required("p_ER");
  b.p_EX = required("p_EX");
  b.t_ER = required("t_ER");
  b.t_EX = required("t_EX");
  b.gamma = value("gamma");
  b.delta = required("delta");
  b.Z = required("Z");
  b.mu = required("mu");
  b.t_Z = required("t_Z");
  b.I = required("I");
  b.t_KE = required("t_KE");
  b.t_KX = required("t_KX");
  b.q_K = value("q_K").value_or(1.0);
  b.sigma_E = required("sigma_E");
  b.eps_ER = required("eps_ER");
  check_benchmark(b);
  return b;
}

inline BenchmarkEconomy parse_benchmark_text(const std::string& text, const std::string& source = "benchmark") {
  return parse_benchmark(detail::parse_json_text(text, source), source);
}

inline BenchmarkEconomy load_benchmark(const std::string& path) {
  return parse_benchmark_text(detail::read_file(path), path);
}

inline json benchmark_to_json(const BenchmarkEconomy& b) {
  json j;
  j["E_R"] = b.E_R;
  j["E_X"] = b.E_X;
  j["p_ER"] = b.p_ER;
  j["p_EX"] = b.p_EX;
  j["t_ER"] = b.t_ER;
  j["t_EX"] = b.t_EX;
  if (b.gamma) j["gamma"] = *b.gamma;
  j["delta"] = b.delta;
  j["Z"] = b.Z;
  j["mu"] = b.mu;
  j["t_Z"] = b.t_Z;
  j["I"] = b.I;
  j["t_KE"] = b.t_KE;
  j["t_KX"] = b.t_KX;
  j["q_K"] = b.q_K;
  j["sigma_E"] = b.sigma_E;
  j["eps_ER"] = b.eps_ER;
  return j;
}

#ifdef OLIGO_DATA_DIR
inline std::string default_benchmark_path() { return std::string(OLIGO_DATA_DIR) + "/benchmark_us2019.json"; }
inline std::string printed_benchmark_path() {
  return std::string(OLIGO_DATA_DIR) + "/benchmark_table1_printed.json";
}
#endif

}  // namespace oligo
