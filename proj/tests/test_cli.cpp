// Copyright 2026 The qgd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "fixtures.hpp"

namespace qgd {
namespace {

struct Run {
  int code;
  std::string out, err;
};

Run qgd_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qgd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(QGD_FIXTURE_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("qgd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, Version) {
  const auto r = qgd_cli({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("qgd 0.1.0"), std::string::npos);
  EXPECT_NE(r.out.find("connectivity_presets"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(qgd_cli({}).code, 2);
  EXPECT_EQ(qgd_cli({"decompose", "--target", "ccz"}).code, 2);
  EXPECT_EQ(qgd_cli({"decompose", "--target", "ccz", "--connectivity", "triangle"}).code, 2);
  EXPECT_EQ(qgd_cli({"decompose", "--target", "ccz", "--connectivity", "triangle", "--cz-count", "6", "--cz-depth",
                     "6"})
                .code,
            2);
  EXPECT_EQ(qgd_cli({"decompose", "--target", "ccz", "--connectivity", "hexagon", "--cz-count", "1"}).code, 2);
  EXPECT_EQ(qgd_cli({"decompose", "--target", "toffoli", "--connectivity", "triangle", "--cz-count", "1"}).code, 2);
  EXPECT_EQ(qgd_cli({"decompose", "--target", "ccz", "--connectivity", "pair", "--cz-count", "1"}).code, 2);
  EXPECT_EQ(qgd_cli({"decompose", "--target", "ccz", "--connectivity", "triangle", "--cz-count", "1", "--restarts",
                     "0", "--out", path("x.jsonl")})
                .code,
            2);
  EXPECT_EQ(qgd_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(qgd_cli({"--help"}).code, 0);
}

TEST_F(CliTest, MalformedFileReportsLine) {
  { std::ofstream(path("graph.json")) << "{\n  \"n_qubits\": 3,\n  \"edges\": [[0, 1],, [1, 2]]\n}\n"; }
  const auto r = qgd_cli({"decompose", "--target", "ccz", "--connectivity", path("graph.json"), "--cz-count", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("graph.json:3:"), std::string::npos) << r.err;
}

TEST_F(CliTest, EnvironmentOverrides) {
  ::setenv("QGD_WORKERS", "many", 1);
  EXPECT_EQ(qgd_cli({"registry"}).code, 2);
  ::setenv("QGD_WORKERS", "2", 1);
  ::setenv("QGD_SEED", "11", 1);
  const auto r = qgd_cli({"decompose", "--target", "cz", "--connectivity", "pair", "--cz-count", "1", "--out",
                          path("r.jsonl")});
  ::unsetenv("QGD_WORKERS");
  ::unsetenv("QGD_SEED");
  EXPECT_EQ(r.code, 0);
  const auto manifest = nlohmann::json::parse(slurp(path("r.jsonl.manifest.json")));
  EXPECT_EQ(manifest["job"]["base_seed"], 11);
}

TEST_F(CliTest, DecomposeTrivialAndImpossible) {
  const auto ok = qgd_cli({"decompose", "--target", "cz", "--connectivity", "pair", "--cz-count", "1", "--out",
                           path("cz.jsonl"), "--circuit-out", path("cz.json"), "--trace", path("trace.csv")});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto results = read_results(path("cz.jsonl"));
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].cz_count, 1);
  const auto manifest = nlohmann::json::parse(slurp(path("cz.jsonl.manifest.json")));
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 40u);
  EXPECT_EQ(manifest["totals"]["results"], 1);
  EXPECT_EQ(qgd_cli({"verify", "--circuit", path("cz.json"), "--target", "cz"}).code, 0);
  EXPECT_EQ(slurp(path("trace.csv")).rfind("sweep,objective\n", 0), 0u);

  const auto none = qgd_cli({"decompose", "--target", "ccz", "--connectivity", "line3", "--cz-count", "0",
                             "--restarts", "10", "--out", path("none.jsonl")});
  EXPECT_EQ(none.code, 1);
  EXPECT_TRUE(std::filesystem::exists(path("none.jsonl")));
  EXPECT_TRUE(slurp(path("none.jsonl")).empty());
}

TEST_F(CliTest, FixedStructureAndEscalation) {
  const auto fixed = qgd_cli({"decompose", "--target", "ccz", "--connectivity", "triangle", "--structure",
                              fixture("structure_ccz_triangle_6.json"), "--out", path("f.jsonl")});
  EXPECT_EQ(fixed.code, 0) << fixed.err;
  EXPECT_NE(fixed.out.find("[matches record]"), std::string::npos);
  const auto inline_s = qgd_cli({"decompose", "--target", "cz", "--connectivity", "pair", "--structure", "[[0,1]]",
                                 "--out", path("i.jsonl")});
  EXPECT_EQ(inline_s.code, 0) << inline_s.err;
  const auto esc = qgd_cli({"decompose", "--target", "cz", "--connectivity", "line3", "--cz-count", "0",
                            "--escalate-to", "3", "--ancilla", "2", "--restarts", "10", "--out", path("e.jsonl")});
  EXPECT_EQ(esc.code, 0) << esc.err;
  EXPECT_NE(esc.out.find("count 0:"), std::string::npos);
  EXPECT_NE(esc.out.find("count 1:"), std::string::npos);
}

TEST_F(CliTest, ResultsAreIndependentOfWorkers) {
  for (const char* w : {"1", "3"}) {
    const auto r = qgd_cli({"decompose", "--target", "ccz", "--connectivity", "triangle", "--cz-count", "6",
                            "--restarts", "8", "--all-restarts", "--max-structures", "40", "--all-solutions",
                            "--workers", w, "--seed", "4", "--out", path(std::string("w") + w + ".jsonl")});
    EXPECT_EQ(r.code, 0) << r.err;
  }
  EXPECT_FALSE(slurp(path("w1.jsonl")).empty());
  EXPECT_EQ(slurp(path("w1.jsonl")), slurp(path("w3.jsonl")));
}

TEST_F(CliTest, VerifyFixtures) {
  const auto tb = qgd_cli({"verify", "--circuit", fixture("textbook_ccz.json"), "--target", "ccz"});
  EXPECT_EQ(tb.code, 0);
  EXPECT_NE(tb.out.find("cz_count 6\n"), std::string::npos);
  EXPECT_NE(tb.out.find("cz_depth 6\n"), std::string::npos);

  const auto bent = qgd_cli({"verify", "--circuit", fixture("textbook_ccz_perturbed.json"), "--target", "ccz"});
  EXPECT_EQ(bent.code, 1);
  // An R_Z offset d on one wire leaves |tr| = D cos(d/2), so f = 2D (1 - cos(d/2)).
  const double d = testing::kPerturbation;
  std::istringstream is(bent.out.substr(bent.out.find("infidelity ") + 11));
  double f = 0.0;
  is >> f;
  EXPECT_NEAR(f, 16.0 * (1.0 - std::cos(d / 2)), 1e-9);

  EXPECT_EQ(qgd_cli({"verify", "--circuit", fixture("identity_1q.json"), "--target", "i"}).code, 0);
  EXPECT_EQ(qgd_cli({"verify", "--circuit", fixture("prune_inert.json"), "--target", fixture("target_inert.json")}).code,
            0);
  EXPECT_EQ(qgd_cli({"verify", "--circuit", fixture("prune_inert.json"), "--target", "cz", "--ancilla", "1:1"}).code,
            2);
  EXPECT_EQ(qgd_cli({"verify", "--circuit", fixture("identity_1q.json"), "--target", "ccz"}).code, 2);
  EXPECT_EQ(qgd_cli({"verify", "--circuit", path("missing.json"), "--target", "ccz"}).code, 2);
}

TEST_F(CliTest, PruneInertAndMinimal) {
  const auto inert = qgd_cli({"prune", "--circuit", fixture("prune_inert.json"), "--target",
                              fixture("target_inert.json"), "--runs", "1500", "--out", path("p.json"), "--report",
                              path("report.jsonl")});
  EXPECT_EQ(inert.code, 0) << inert.err;
  const auto reduced = circuit_from_json(read_json_file(path("p.json")));
  EXPECT_EQ(reduced.circuit.rotation_count(), 3);
  std::ifstream rep(path("report.jsonl"));
  int rows = 0;
  for (std::string line; std::getline(rep, line);) ++rows;
  EXPECT_EQ(rows, 4);

  const auto minimal = qgd_cli({"prune", "--circuit", fixture("prune_pinned.json"), "--target",
                                fixture("target_rz_half_pi.json"), "--runs", "1500"});
  EXPECT_EQ(minimal.code, 0);
  EXPECT_NE(minimal.out.find("no removable gates"), std::string::npos);
}

TEST_F(CliTest, RegistryListAndCheck) {
  const auto list = qgd_cli({"registry"});
  EXPECT_EQ(list.code, 0);
  EXPECT_NE(list.out.find("ccz square4 8 4"), std::string::npos);
  EXPECT_NE(list.out.find("cccz fully4 14 8"), std::string::npos);
  EXPECT_NE(list.out.find("cccz line4 18 12"), std::string::npos);
  EXPECT_NE(list.out.find("cccz paw 14 -"), std::string::npos);

  ASSERT_EQ(qgd_cli({"decompose", "--target", "ccz", "--connectivity", "triangle", "--structure",
                     fixture("structure_ccz_triangle_6.json"), "--out", path("r.jsonl")})
                .code,
            0);
  const auto check = qgd_cli({"registry", "--check", path("r.jsonl")});
  EXPECT_EQ(check.code, 0);
  EXPECT_NE(check.out.find("ccz triangle count 6 depth 6: matches record"), std::string::npos) << check.out;
  { std::ofstream(path("bad.jsonl")) << "{}\n"; }
  EXPECT_EQ(qgd_cli({"registry", "--check", path("bad.jsonl")}).code, 2);
}

TEST_F(CliTest, ResumeReusesJournal) {
  const std::vector<std::string> args{"decompose", "--target", "ccz", "--connectivity", "triangle", "--cz-count", "6",
                                      "--restarts", "4", "--max-structures", "5", "--out", path("r.jsonl")};
  ASSERT_EQ(qgd_cli(args).code, 1);
  auto again = args;
  again.push_back("--resume");
  const auto r = qgd_cli(again);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("resumed 20 finished tasks"), std::string::npos) << r.out;
}

}  // namespace
}  // namespace qgd
