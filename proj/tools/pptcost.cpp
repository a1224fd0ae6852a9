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

// pptcost: command-line front end. Exit codes: 0 success, 1 invalid input,
// 2 solver failure, 64 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pptcost/batch.hpp"
#include "pptcost/certify.hpp"
#include "pptcost/cost.hpp"
#include "pptcost/discrimination.hpp"
#include "pptcost/distances.hpp"
#include "pptcost/ensembles.hpp"
#include "pptcost/io/json.hpp"

namespace {

using json = nlohmann::json;
using namespace pptcost;
namespace fs = std::filesystem;

constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;
constexpr int kExitUsage = 64;

/// Options shared by every subcommand.
struct Common {
  RunConfig cfg;
  std::optional<double> tol;
  std::string out;
  std::string dump_sdp;
  std::string format;

  json sdp_dump = json::array();
  std::mutex dump_mutex;

  void add_to(CLI::App* sub) {
    sub->add_option("--tol", tol, "Solver gap and feasibility tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", cfg.solver.max_iters, "Interior-point iteration cap")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "Write the report to this file (or directory)");
    sub->add_option("--dump-sdp", dump_sdp,
                    "Write the standard form of every solved program to this JSON file");
    sub->add_option("--parallelism", cfg.parallelism, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--eps-zero", cfg.eps_zero, "Deviation counted as zero")
        ->check(CLI::PositiveNumber);
    sub->add_option("--eps-eq", cfg.eps_eq, "Optimality slack in band mode")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-bisect", cfg.tol_bisect, "Bisection tolerance")
        ->check(CLI::PositiveNumber);
  }

  /// Applies the environment and flags, in that order, then validates.
  void finalize() {
    cfg.apply_environment();
    if (tol) cfg.solver.tol_gap = cfg.solver.tol_feas = *tol;
    if (format == "csv") cfg.output_format = OutputFormat::Csv;
    cfg.validate();
    if (!dump_sdp.empty()) {
      cfg.solver.on_standard_form = [this](const sdp::StandardForm& f) {
        std::lock_guard<std::mutex> lock(dump_mutex);
        sdp_dump.push_back(io::to_json(f));
      };
    }
  }

  json envelope(const std::string& command) const {
    return {{"schema_version", io::kSchemaVersion},
            {"command", command},
            {"config", to_json(cfg)}};
  }

  void emit_text(const std::string& text) const {
    if (out.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream f(out);
    if (!f) throw InvalidInput("cannot write " + out);
    f << text;
  }

  void emit(const json& j) const { emit_text(j.dump(2) + "\n"); }

  void flush_dump() const {
    if (!dump_sdp.empty()) io::write_file(dump_sdp, sdp_dump);
  }
};

DiscriminationInstance load_instance(const std::string& rho0, const std::string& rho1,
                                     double p0) {
  return DiscriminationInstance(io::density_from_json(io::read_file(rho0)),
                                io::density_from_json(io::read_file(rho1)), p0);
}

int report_error(const std::string& kind, const std::string& what, int code) {
  json e{{"schema_version", io::kSchemaVersion}, {"error", kind}, {"message", what}};
  std::cerr << e.dump() << '\n';
  return code;
}

CostMethod parse_method(const std::string& m) {
  if (m == "hierarchy") return CostMethod::Hierarchy;
  if (m == "bounds") return CostMethod::Bounds;
  return CostMethod::All;
}

int run(int argc, char** argv) {
  CLI::App app{"Entanglement cost of optimal PPT state discrimination"};
  app.require_subcommand(1);
  Common common;

  std::string rho0, rho1, mode = "global", type = "spectral", method = "all",
                          povm_path, cert_path, emit_cert, fixture, optimality = "face";
  double p0 = 0.5, margin = 1e-4;
  std::optional<double> r_max;
  int k = 2, full_cap = 144, n = 20, d = 4, rank0 = 3, count = 1;
  int da = 0, db = 0;
  std::string rank = "full";
  std::uint64_t seed = 7;
  std::vector<std::string> files;

  auto states = [&](CLI::App* s) {
    s->add_option("--rho0", rho0, "First state (matrix JSON)")->required()->check(CLI::ExistingFile);
    s->add_option("--rho1", rho1, "Second state (matrix JSON)")->required()->check(CLI::ExistingFile);
    s->add_option("--p0", p0, "Prior of rho0")->check(CLI::Range(0.0, 1.0));
  };
  auto optimality_flag = [&](CLI::App* s) {
    s->add_option("--optimality", optimality, "How bound programs impose optimality")
        ->check(CLI::IsMember({"face", "band"}));
  };

  auto* psuc = app.add_subcommand("psuc", "Success probabilities");
  states(psuc);
  psuc->add_option("--mode", mode)
      ->check(CLI::IsMember({"global", "ppt", "ea-reduced", "ea-full", "ea-dual"}));
  psuc->add_option("--k", k, "Schmidt rank of the resource")->check(CLI::PositiveNumber);
  psuc->add_option("--full-cap", full_cap, "Largest side of the assisted space");
  common.add_to(psuc);

  auto* distance = app.add_subcommand("distance", "PPT-distance of a POVM");
  distance->add_option("--type", type)
      ->check(CLI::IsMember({"spectral", "relative", "trace", "frobenius"}));
  distance->add_option("--povm", povm_path, "POVM (array of matrix JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  distance->add_option("--r-max", r_max, "Upper bracket of the bisection")
      ->check(CLI::NonNegativeNumber);
  common.add_to(distance);

  auto* cost = app.add_subcommand("cost", "Entanglement cost and its bounds");
  states(cost);
  cost->add_option("--method", method)->check(CLI::IsMember({"hierarchy", "bounds", "all"}));
  optimality_flag(cost);
  common.add_to(cost);

  auto* sweep = app.add_subcommand("sweep", "Cost analysis of seeded random pairs");
  sweep->add_option("--n", n, "Number of instances")->check(CLI::NonNegativeNumber);
  sweep->add_option("--d", d, "Local dimension")->check(CLI::Range(2, 8));
  sweep->add_option("--rank0", rank0, "Rank of rho0")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Seed");
  sweep->add_option("--format", common.format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--method", method)->check(CLI::IsMember({"hierarchy", "bounds", "all"}));
  optimality_flag(sweep);
  common.add_to(sweep);

  auto* sample = app.add_subcommand("sample", "Write seeded random density matrices");
  sample->add_option("--d", d, "Local dimension of both parties")->check(CLI::PositiveNumber);
  sample->add_option("--dA", da, "Dimension of A (overrides --d)")->check(CLI::PositiveNumber);
  sample->add_option("--dB", db, "Dimension of B (overrides --d)")->check(CLI::PositiveNumber);
  sample->add_option("--rank", rank, "Rank, or \"full\"");
  sample->add_option("--count", count, "Number of states")->check(CLI::NonNegativeNumber);
  sample->add_option("--seed", seed, "Seed");
  common.add_to(sample);

  auto* certify = app.add_subcommand("certify", "Certified bounds for the assisted problem");
  states(certify);
  certify->add_option("--k", k, "Schmidt rank of the resource")->check(CLI::PositiveNumber);
  certify->add_option("--cert", cert_path, "Verify this dual certificate instead of solving")
      ->check(CLI::ExistingFile);
  certify->add_option("--emit-cert", emit_cert, "Save the computed dual certificate");
  certify->add_option("--margin", margin, "Required gap")->check(CLI::NonNegativeNumber);
  common.add_to(certify);

  auto* fixtures = app.add_subcommand("fixtures", "Write built-in state pairs");
  fixtures->add_option("name", fixture)
      ->required()
      ->check(CLI::IsMember({"qutrit", "pure-vs-complement"}));
  fixtures->add_option("--d", d, "Local dimension for pure-vs-complement")
      ->check(CLI::Range(2, 8));
  common.add_to(fixtures);

  auto* batch = app.add_subcommand("batch", "Cost analysis of instance files");
  batch->add_option("files", files, "Instance JSON files {rho0, rho1, p0}");
  batch->add_option("--format", common.format)->check(CLI::IsMember({"csv", "json"}));
  batch->add_option("--method", method)->check(CLI::IsMember({"hierarchy", "bounds", "all"}));
  optimality_flag(batch);
  common.add_to(batch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    common.cfg.optimality =
        optimality == "band" ? OptimalityMode::Band : OptimalityMode::Face;
    common.finalize();
    const RunConfig& cfg = common.cfg;
    int code = 0;

    if (psuc->parsed()) {
      const auto inst = load_instance(rho0, rho1, p0);
      json j = common.envelope("psuc");
      j["mode"] = mode;
      if (mode == "global") {
        j["report"] = io::to_json(helstrom_value(inst));
      } else if (mode == "ppt") {
        j["report"] = io::to_json(psuc_ppt(inst, cfg.solver));
      } else if (mode == "ea-reduced") {
        j["k"] = k;
        j["report"] = io::to_json(ea_psuc_reduced(inst, k, cfg.solver));
      } else if (mode == "ea-full") {
        j["k"] = k;
        DiscriminationOptions o;
        o.solver = cfg.solver;
        o.full_side_cap = full_cap;
        j["report"] = io::to_json(ea_psuc_full(inst, k, o));
      } else {
        j["k"] = k;
        const DualReport r = ea_psuc_dual(inst, k, cfg.solver);
        j["report"] = io::to_json(r.report);
        j["certificate"] = io::to_json(r.certificate);
      }
      common.emit(j);
    } else if (distance->parsed()) {
      const Povm m = io::povm_from_json(io::read_file(povm_path));
      json j = common.envelope("distance");
      j["type"] = type;
      if (type == "relative") {
        RelativeDistanceOptions o;
        o.solver = cfg.solver;
        o.r_max = r_max;
        o.tol_bisect = cfg.tol_bisect;
        j["report"] = io::to_json(relative_spectral_ppt_distance(m, o));
      } else {
        const SchattenOrder p = type == "trace"       ? SchattenOrder::Trace
                                : type == "frobenius" ? SchattenOrder::Frobenius
                                                      : SchattenOrder::Spectral;
        j["report"] = io::to_json(schatten_ppt_distance(m, p, cfg.solver));
      }
      common.emit(j);
    } else if (cost->parsed()) {
      const auto inst = load_instance(rho0, rho1, p0);
      const InstanceResult r = analyze_instance(inst, cfg, parse_method(method));
      if (!r.ok()) {
        common.flush_dump();
        return report_error(r.exit_code == 1 ? "invalid_input" : "solver_failure", r.error,
                            r.exit_code);
      }
      json j = common.envelope("cost");
      j["method"] = method;
      if (r.hierarchy) j["hierarchy"] = io::to_json(*r.hierarchy);
      if (r.bounds) j["bounds"] = io::to_json(*r.bounds);
      if (const auto s = r.sandwich_holds()) j["sandwich_holds"] = *s;
      common.emit(j);
    } else if (sweep->parsed()) {
      if (common.format.empty()) common.cfg.output_format = OutputFormat::Csv;
      std::vector<InstanceResult> rows(n);
      const CostMethod cm = parse_method(method);
      parallel_for(n, cfg.parallelism, [&](int i) {
        try {
          rows[i] = analyze_instance(sweep_instance(d, rank0, seed, i), cfg, cm,
                                     "sweep_" + std::to_string(i));
        } catch (const InvalidInput& e) {
          rows[i].error = e.what();
          rows[i].exit_code = kExitInvalid;
        }
      });
      const BatchReport b = aggregate(std::move(rows));
      if (common.cfg.output_format == OutputFormat::Csv) {
        std::ostringstream os;
        os << "# schema_version " << io::kSchemaVersion << "\n";
        os << "# config " << to_json(common.cfg).dump() << "\n";
        os << "# sweep d=" << d << " rank0=" << rank0 << " seed=" << seed << " n=" << n
           << "\n";
        write_csv(os, b);
        common.emit_text(os.str());
      } else {
        json j = common.envelope("sweep");
        j["sweep"] = {{"d", d}, {"rank0", rank0}, {"seed", seed}, {"n", n}};
        j["report"] = to_json(b);
        common.emit(j);
      }
      if (b.failures) code = kExitSolver;
    } else if (sample->parsed()) {
      if (common.out.empty()) throw InvalidInput("sample needs --out DIR");
      SampleSpec spec;
      spec.dA = da ? da : d;
      spec.dB = db ? db : d;
      if (rank == "full") {
        spec.rank = 0;
      } else {
        try {
          spec.rank = std::stoi(rank);
        } catch (const std::exception&) {
          throw InvalidInput("--rank must be an integer or \"full\"");
        }
        if (spec.rank < 1) throw InvalidInput("--rank must be positive");
      }
      spec.seed = seed;
      spec.count = count;
      spec.validate();
      fs::create_directories(common.out);
      json j = common.envelope("sample");
      j["spec"] = {{"dA", spec.dA}, {"dB", spec.dB}, {"rank", spec.effective_rank()},
                   {"seed", spec.seed}, {"count", spec.count}};
      json written = json::array();
      for (int i = 0; i < spec.count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "state_%03d.json", i);
        const fs::path p = fs::path(common.out) / name;
        io::write_file(p.string(), io::to_json(random_density(spec, i).op()));
        written.push_back(p.string());
      }
      j["files"] = written;
      std::cout << j.dump(2) << '\n';
    } else if (certify->parsed()) {
      const auto inst = load_instance(rho0, rho1, p0);
      json j = common.envelope("certify");
      const double tol_cert = 100 * cfg.solver.tol_feas;
      if (!cert_path.empty()) {
        const DualCertificate c = io::certificate_from_json(io::read_file(cert_path));
        j["k"] = c.k;
        j["bound"] = io::to_json(verify_dual(c, inst, tol_cert));
      } else {
        j["k"] = k;
        const DualReport dual = ea_psuc_dual(inst, k, cfg.solver);
        if (!emit_cert.empty()) io::write_file(emit_cert, io::to_json(dual.certificate));
        GapReport g;
        g.margin = margin;
        g.upper = verify_dual(dual.certificate, inst, tol_cert);
        g.lower = verify_primal_global(helstrom_povm(inst), inst, tol_cert);
        g.gap_proven =
            g.upper.valid && g.lower.valid && g.lower.value - g.upper.value > margin;
        j["gap"] = io::to_json(g);
      }
      common.emit(j);
    } else if (fixtures->parsed()) {
      if (common.out.empty()) throw InvalidInput("fixtures needs --out DIR");
      fs::create_directories(common.out);
      const bool qutrit = fixture == "qutrit";
      const DiscriminationInstance inst = qutrit ? qutrit_pair() : pure_vs_complement(d);
      const std::string n0 = qutrit ? "rho.json" : "rho0.json";
      const std::string n1 = qutrit ? "sigma.json" : "rho1.json";
      const fs::path dir(common.out);
      io::write_file((dir / n0).string(), io::to_json(inst.rho0.op()));
      io::write_file((dir / n1).string(), io::to_json(inst.rho1.op()));
      io::write_file((dir / "instance.json").string(), instance_to_json(inst));
      json j = common.envelope("fixtures");
      j["fixture"] = fixture;
      j["files"] = {(dir / n0).string(), (dir / n1).string(),
                    (dir / "instance.json").string()};
      std::cout << j.dump(2) << '\n';
    } else if (batch->parsed()) {
      const BatchReport b = run_batch(files, cfg, parse_method(method));
      if (cfg.output_format == OutputFormat::Csv) {
        std::ostringstream os;
        os << "# schema_version " << io::kSchemaVersion << "\n";
        os << "# config " << to_json(cfg).dump() << "\n";
        write_csv(os, b);
        common.emit_text(os.str());
      } else {
        json j = common.envelope("batch");
        j["report"] = to_json(b);
        common.emit(j);
      }
    }
    common.flush_dump();
    return code;
  } catch (const InvalidInput& e) {
    common.flush_dump();
    return report_error("invalid_input", e.what(), kExitInvalid);
  } catch (const Infeasible& e) {
    common.flush_dump();
    return report_error("infeasible", e.what(), kExitSolver);
  } catch (const Error& e) {
    common.flush_dump();
    return report_error("solver_failure", e.what(), kExitSolver);
  } catch (const fs::filesystem_error& e) {
    return report_error("invalid_input", e.what(), kExitInvalid);
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
