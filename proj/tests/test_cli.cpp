// Copyright 2026 The pptcost Authors
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

// Runs the pptcost executable end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pptcost/ensembles.hpp"
#include "pptcost/io/json.hpp"

#ifndef PPTCOST_CLI
#error "PPTCOST_CLI must name the pptcost executable"
#endif

using namespace pptcost;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
  json out_json() const { return json::parse(out); }
  json err_json() const { return json::parse(err); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("pptcost_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Outcome run(const std::string& args, const std::string& env = {}) const {
    const fs::path o = dir_ / "stdout.txt", e = dir_ / "stderr.txt";
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" PPTCOST_CLI "' " + args +
                            " > '" + o.string() + "' 2> '" + e.string() + "'";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
  }

  void write_qutrit() const {
    ASSERT_EQ(run("fixtures qutrit --out '" + dir_.string() + "'").code, 0);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, fixtures_write_the_qutrit_pair) {
  const Outcome r = run("fixtures qutrit --out '" + dir_.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out_json().at("schema_version"), 1);
  const auto rho = io::density_from_json(io::read_file(path("rho.json")));
  const auto sigma = io::density_from_json(io::read_file(path("sigma.json")));
  EXPECT_EQ(rho.matrix(), qutrit_rho().matrix());
  EXPECT_EQ(sigma.matrix(), qutrit_sigma().matrix());
  EXPECT_TRUE(fs::exists(path("instance.json")));

  ASSERT_EQ(run("fixtures pure-vs-complement --d 3 --out '" + dir_.string() + "'").code, 0);
  EXPECT_EQ(io::read_file(path("rho1.json")).at("dims"), json({3, 3}));
}

TEST_F(CliTest, psuc_modes_on_the_qutrit_pair) {
  write_qutrit();
  const std::string states = " --rho0 '" + path("rho.json") + "' --rho1 '" + path("sigma.json") + "'";
  const Outcome g = run("psuc --mode global" + states);
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_NEAR(g.out_json().at("report").at("value").get<double>(), 0.9135, 5e-5);

  const Outcome d = run("psuc --mode ea-dual --k 2" + states);
  ASSERT_EQ(d.code, 0) << d.err;
  const json j = d.out_json();
  EXPECT_EQ(j.at("command"), "psuc");
  EXPECT_LE(j.at("report").at("value").get<double>(), 0.9125 + 1e-3);
  EXPECT_TRUE(j.at("certificate").contains("A"));
  EXPECT_EQ(j.at("config").at("solver").at("tol_gap"), 1e-8);
}

TEST_F(CliTest, cost_of_identical_states_is_zero) {
  io::write_file(path("a.json"), io::to_json(random_density({2, 2, 0, 1, 1}).op()));
  const Outcome r = run("cost --rho0 '" + path("a.json") + "' --rho1 '" + path("a.json") + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.out_json();
  EXPECT_EQ(j.at("hierarchy").at("k_min"), 1);
  EXPECT_EQ(j.at("hierarchy").at("ebits"), 0.0);
  EXPECT_TRUE(j.at("sandwich_holds").get<bool>());
}

TEST_F(CliTest, certify_round_trips_a_certificate) {
  write_qutrit();
  const std::string states = " --rho0 '" + path("rho.json") + "' --rho1 '" + path("sigma.json") + "'";
  const Outcome r = run("certify --k 2 --emit-cert '" + path("cert.json") + "'" + states);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out_json().at("gap").at("gap_proven").get<bool>());

  const Outcome v = run("certify --cert '" + path("cert.json") + "'" + states);
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_TRUE(v.out_json().at("bound").at("valid").get<bool>());
  EXPECT_LE(v.out_json().at("bound").at("value").get<double>(), 0.9125 + 1e-3);
}

TEST_F(CliTest, distance_reports_a_witness) {
  const CMatrix phi = max_entangled(2).matrix();
  const Povm m({BipartiteOperator(phi, {2, 2}),
                BipartiteOperator(CMatrix::Identity(4, 4) - phi, {2, 2})});
  io::write_file(path("m.json"), io::to_json(m));
  const Outcome r = run("distance --type spectral --povm '" + path("m.json") + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.out_json().at("report").at("value").get<double>(), 0.5, 1e-6);
  EXPECT_EQ(r.out_json().at("report").at("witness").size(), 2u);

  const Outcome bad = run("distance --type relative --r-max 0.5 --povm '" + path("m.json") + "'");
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(bad.err_json().at("error"), "infeasible");
}

TEST_F(CliTest, sample_writes_seeded_states) {
  const Outcome r = run("sample --d 2 --rank 1 --count 3 --seed 5 --out '" + dir_.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"state_000.json", "state_001.json", "state_002.json"}) {
    ASSERT_TRUE(fs::exists(path(f))) << f;
  }
  const auto rho = io::density_from_json(io::read_file(path("state_001.json")));
  EXPECT_EQ(rho.matrix(), random_density({2, 2, 1, 5, 3}, 1).matrix());
}

TEST_F(CliTest, sweep_emits_csv) {
  const Outcome r = run("sweep --n 2 --d 2 --rank0 1 --seed 7");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("instance,k,delta,k_min,eta_l,eta_u,spectral_bound_ebits"),
            std::string::npos);
  EXPECT_NE(r.out.find("# instances 2"), std::string::npos);
  EXPECT_NE(r.out.find("# schema_version 1"), std::string::npos);
  const Outcome again = run("sweep --n 2 --d 2 --rank0 1 --seed 7");
  EXPECT_EQ(again.out, r.out);
}

TEST_F(CliTest, batch_with_no_files) {
  const Outcome r = run("batch --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out_json().at("report").at("count"), 0);
}

TEST_F(CliTest, environment_overrides_solver_tolerance) {
  write_qutrit();
  const Outcome r = run("psuc --mode ppt --rho0 '" + path("rho.json") + "' --rho1 '" +
                        path("sigma.json") + "'",
                        "PPTCOST_SOLVER_TOL=1e-7");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out_json().at("config").at("solver").at("tol_feas"), 1e-7);
}

TEST_F(CliTest, exit_codes) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 64);
  EXPECT_EQ(run("psuc --mode nonsense --rho0 x --rho1 y").code, 64);

  std::ofstream(path("junk.json")) << "not json";
  const Outcome r = run("psuc --rho0 '" + path("junk.json") + "' --rho1 '" + path("junk.json") + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err_json().at("error"), "invalid_input");

  io::write_file(path("a.json"), io::to_json(random_density({2, 2, 0, 1, 1}).op()));
  const Outcome priors = run("cost --p0 0.7 --rho0 '" + path("a.json") + "' --rho1 '" +
                         path("a.json") + "'");
  EXPECT_EQ(priors.code, 1);
}
