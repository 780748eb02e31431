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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "oligo/cli.hpp"

namespace oligo {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(CliTest, Calibrate) {
  const auto r = cli({"calibrate"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("8.97"), std::string::npos) << r.out;
  const auto m = cli({"calibrate", "--mode", "force_monopoly", "--format", "structured-records"});
  EXPECT_EQ(m.code, 0) << m.err;
  const auto j = nlohmann::json::parse(m.out);
  EXPECT_FALSE(j.empty());
  EXPECT_EQ(cli({"calibrate", "--mode", "duopoly"}).code, 2);
}

TEST(CliTest, SolveAndScenario) {
  const auto s = cli({"solve", "--shock", "t_Z=10", "--format", "delimited"});
  EXPECT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("row,custom"), std::string::npos) << s.out;
  const auto t = cli({"scenario", "--case", "table-2"});
  EXPECT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("-28.31"), std::string::npos) << t.out;
  const auto j = cli({"scenario", "--case", "case-2.0", "--format", "structured-records"});
  EXPECT_EQ(j.code, 0) << j.err;
  EXPECT_NO_THROW((void)nlohmann::json::parse(j.out));
}

TEST(CliTest, Precision) {
  const auto r = cli({"solve", "--shock", "t_Z=10", "--format", "delimited", "--precision", "4"});
  EXPECT_EQ(r.code, 0);
  const auto p = cli({"scenario", "--case", "case-1.0", "--precision", "4"});
  EXPECT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("-3.27"), std::string::npos);
}

TEST(CliTest, Deterministic) {
  for (const char* f : {"paper-table", "delimited", "structured-records"}) {
    const auto a = cli({"scenario", "--case", "table-4", "--case", "table-D2", "--format", f});
    const auto b = cli({"scenario", "--case", "table-4", "--case", "table-D2", "--format", f});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out) << f;
  }
}

TEST(CliTest, ErrorsNameTheScenario) {
  const auto bench = std::filesystem::temp_directory_path() / "oligo_label.json";
  {
    std::ofstream f(bench);
    f << R"({"E_R": 11428, "E_X": 56734, "p_ER": 20.84, "p_EX": 15.24, "t_ER": 0, "t_EX": 0.61,
             "delta": 2.33, "Z": 5147, "mu": 42, "t_Z": 15, "I": 19036, "t_KE": 0.123, "t_KX": 0.201,
             "sigma_E": 0.3, "eps_ER": -0.5})";
  }
  const auto r = cli({"scenario", "--benchmark", bench.string(), "--case", "table-2"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("table-2"), std::string::npos) << r.err;
  std::filesystem::remove(bench);
}

TEST(CliTest, Sweep) {
  const auto r = cli({"sweep", "--param", "sigma_E", "--values", "0.1,0.3,0.6", "--format", "delimited"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sigma_E=0.6"), std::string::npos) << r.out;
  EXPECT_EQ(cli({"sweep", "--param", "mu", "--values", "1"}).code, 2);
}

TEST(CliTest, GoldensAndOracle) {
  const auto g = cli({"goldens"});
  EXPECT_EQ(g.code, 0) << g.out << g.err;
  EXPECT_NE(g.out.find("ERRATUM"), std::string::npos);
  const auto o = cli({"oracle", "--case", "1.0"});
  EXPECT_EQ(o.code, 0) << o.out << o.err;
}

TEST(CliTest, GoldenFailureExitsOne) {
  const auto dir = std::filesystem::temp_directory_path() / "oligo_cli_golden";
  std::filesystem::create_directories(dir);
  for (const auto& e : std::filesystem::directory_iterator(OLIGO_GOLDEN_DIR))
    std::filesystem::copy_file(e.path(), dir / e.path().filename(), std::filesystem::copy_options::overwrite_existing);
  {
    std::ofstream f(dir / "table2.csv", std::ios::app);
    f << "extra,0,0,0,0\n";
  }
  EXPECT_EQ(cli({"goldens", "--golden-dir", dir.string()}).code, 1);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, ErrorExitCodes) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"bogus"}).code, 2);
  EXPECT_EQ(cli({"solve"}).code, 2);
  EXPECT_EQ(cli({"solve", "--shock", "t_Q=1"}).code, 2);
  EXPECT_EQ(cli({"scenario"}).code, 2);
  EXPECT_EQ(cli({"scenario", "--case", "9.9"}).code, 2);
  EXPECT_EQ(cli({"scenario", "--case", "1.0", "--format", "xml"}).code, 2);
  EXPECT_EQ(cli({"scenario", "--config", "/nonexistent/run.json"}).code, 2);
  EXPECT_EQ(cli({"solve", "--benchmark", "/nonexistent.json", "--shock", "t_Z=1"}).code, 2);
  // a free instrument whose base tax is zero cannot be resolved
  const auto bench = std::filesystem::temp_directory_path() / "oligo_zero_ter.json";
  {
    std::ofstream f(bench);
    f << R"({"E_R": 11428, "E_X": 56734, "p_ER": 20.84, "p_EX": 15.24, "t_ER": 0, "t_EX": 0.61,
             "delta": 2.33, "Z": 5147, "mu": 42, "t_Z": 15, "I": 19036, "t_KE": 0.123, "t_KX": 0.201,
             "sigma_E": 0.3, "eps_ER": -0.5})";
  }
  const auto r = cli({"scenario", "--benchmark", bench.string(), "--case", "2.0"});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("zero base"), std::string::npos) << r.err;
  std::filesystem::remove(bench);
}

TEST(CliTest, ConfigDrivenRunWritesFile) {
  const auto dir = std::filesystem::temp_directory_path() / "oligo_cli_cfg";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "run.json");
    f << R"({"format": "delimited", "out": "result.csv", "scenarios": ["case-3.0"]})";
  }
  const auto r = cli({"scenario", "--config", (dir / "run.json").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "result.csv");
  std::string head;
  std::getline(in, head);
  EXPECT_EQ(head, "row,3.0");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace oligo
