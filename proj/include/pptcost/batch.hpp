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

// Run configuration and batch cost analysis over many instances. Results are
// stored by input position, so the worker count never changes the output.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "pptcost/cost.hpp"
#include "pptcost/errors.hpp"
#include "pptcost/io/json.hpp"
#include "pptcost/qmat.hpp"

namespace pptcost {

enum class OutputFormat { Json, Csv };

struct RunConfig {
  SolverConfig solver;
  double eps_zero = 1e-6;
  double eps_eq = 1e-7;
  double tol_bisect = 1e-4;
  int parallelism = 1;
  OutputFormat output_format = OutputFormat::Json;
  OptimalityMode optimality = OptimalityMode::Face;

  void validate() const {
    solver.validate();
    if (!(eps_zero > 0.0) || !(eps_eq > 0.0) || !(tol_bisect > 0.0)) {
      throw InvalidInput("eps_zero, eps_eq and tol_bisect must be positive");
    }
    if (parallelism < 1) throw InvalidInput("parallelism must be >= 1");
  }

  /// PPTCOST_SOLVER_TOL, when set, replaces both solver tolerances.
  void apply_environment() {
    const char* v = std::getenv("PPTCOST_SOLVER_TOL");
    if (!v || !*v) return;
    char* end = nullptr;
    const double t = std::strtod(v, &end);
    if (end == v || *end != '\0' || !(t > 0.0)) {
      throw InvalidInput(std::string("PPTCOST_SOLVER_TOL is not a positive number: ") + v);
    }
    solver.tol_gap = solver.tol_feas = t;
  }

  CostOptions cost_options() const {
    CostOptions o;
    o.solver = solver;
    o.eps_zero = eps_zero;
    o.eps_eq = eps_eq;
    o.optimality = optimality;
    return o;
  }
};

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"solver", io::to_json(c.solver)},
          {"eps_zero", c.eps_zero},
          {"eps_eq", c.eps_eq},
          {"tol_bisect", c.tol_bisect},
          {"parallelism", c.parallelism},
          {"output_format", c.output_format == OutputFormat::Json ? "json" : "csv"},
          {"optimality", c.optimality == OptimalityMode::Face ? "face" : "band"}};
}

enum class CostMethod { Hierarchy, Bounds, All };

struct InstanceResult {
  std::string name;
  std::optional<HierarchyReport> hierarchy;
  std::optional<BoundsReport> bounds;
  std::string error;  // empty on success
  int exit_code = 0;  // 1 domain error, 2 solver failure

  bool ok() const { return error.empty(); }

  /// log2 ceil(eta_l) <= ebits <= every available upper bound.
  std::optional<bool> sandwich_holds() const {
    if (!hierarchy || !hierarchy->k_min || !bounds) return std::nullopt;
    const double e = hierarchy->ebits, slack = 1e-12;
    bool ok = bounds->eta_l_ebits <= e + slack && e <= bounds->spectral_bound_ebits + slack &&
              e <= bounds->rank_bound_ebits + slack;
    if (bounds->eta_u_ebits) ok = ok && e <= *bounds->eta_u_ebits + slack;
    return ok;
  }
  std::optional<bool> lower_tight() const {
    if (!hierarchy || !hierarchy->k_min || !bounds) return std::nullopt;
    return snapped_ceil(bounds->eta_l) == double(*hierarchy->k_min);
  }
};

/// Runs every analysis requested by method, capturing library errors.
inline InstanceResult analyze_instance(const DiscriminationInstance& inst,
                                       const RunConfig& cfg,
                                       CostMethod method = CostMethod::All,
                                       std::string name = {}) {
  InstanceResult r;
  r.name = std::move(name);
  const CostOptions opt = cfg.cost_options();
  try {
    if (method != CostMethod::Bounds) r.hierarchy = cost_hierarchy(inst, opt);
    if (method != CostMethod::Hierarchy) r.bounds = cost_bounds(inst, opt);
  } catch (const InvalidInput& e) {
    r.error = e.what();
    r.exit_code = 1;
  } catch (const Error& e) {
    r.error = e.what();
    r.exit_code = 2;
  }
  return r;
}

/// Calls task(i) for i in [0, n) on up to `workers` threads.
inline void parallel_for(int n, int workers, const std::function<void(int)>& task) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int count = std::min(workers, n);
  for (int w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct BatchReport {
  std::vector<InstanceResult> rows;
  int failures = 0;
  int with_k_min = 0;
  double fraction_k_min_le_2 = 0.0;  // over instances with a k_min
  int with_bounds = 0;
  double lower_tight_fraction = 0.0;  // ceil(eta_l) == k_min
  int sandwich_violations = 0;
};

inline BatchReport aggregate(std::vector<InstanceResult> rows) {
  BatchReport b;
  int le2 = 0, tight = 0;
  for (const auto& r : rows) {
    if (!r.ok()) ++b.failures;
    if (r.hierarchy && r.hierarchy->k_min) {
      ++b.with_k_min;
      if (*r.hierarchy->k_min <= 2) ++le2;
    }
    if (const auto t = r.lower_tight()) {
      ++b.with_bounds;
      if (*t) ++tight;
    }
    if (const auto s = r.sandwich_holds(); s && !*s) ++b.sandwich_violations;
  }
  if (b.with_k_min) b.fraction_k_min_le_2 = double(le2) / b.with_k_min;
  if (b.with_bounds) b.lower_tight_fraction = double(tight) / b.with_bounds;
  b.rows = std::move(rows);
  return b;
}

/// An instance file is {"rho0": matrix, "rho1": matrix, "p0": number}.
inline DiscriminationInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rho0") || !j.contains("rho1")) {
    throw InvalidInput("instance JSON needs \"rho0\" and \"rho1\"");
  }
  const double p0 = j.contains("p0") ? j.at("p0").get<double>() : 0.5;
  return DiscriminationInstance(io::density_from_json(j.at("rho0")),
                                io::density_from_json(j.at("rho1")), p0);
}

inline nlohmann::json instance_to_json(const DiscriminationInstance& inst) {
  return {{"rho0", io::to_json(inst.rho0.op())},
          {"rho1", io::to_json(inst.rho1.op())},
          {"p0", inst.p0}};
}

/// Cost analysis of every instance file; a failing file is recorded and the
/// batch moves on.
inline BatchReport run_batch(const std::vector<std::string>& paths, const RunConfig& cfg,
                             CostMethod method = CostMethod::All) {
  cfg.validate();
  std::vector<InstanceResult> rows(paths.size());
  parallel_for(static_cast<int>(paths.size()), cfg.parallelism, [&](int i) {
    try {
      const auto inst = instance_from_json(io::read_file(paths[i]));
      rows[i] = analyze_instance(inst, cfg, method, paths[i]);
    } catch (const InvalidInput& e) {
      rows[i].name = paths[i];
      rows[i].error = e.what();
      rows[i].exit_code = 1;
    }
  });
  return aggregate(std::move(rows));
}

inline nlohmann::json to_json(const InstanceResult& r) {
  nlohmann::json j{{"name", r.name}};
  if (r.hierarchy) j["hierarchy"] = io::to_json(*r.hierarchy);
  if (r.bounds) j["bounds"] = io::to_json(*r.bounds);
  if (!r.ok()) j["error"] = r.error;
  if (const auto s = r.sandwich_holds()) j["sandwich_holds"] = *s;
  if (const auto t = r.lower_tight()) j["lower_bound_tight"] = *t;
  return j;
}

inline nlohmann::json to_json(const BatchReport& b) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : b.rows) rows.push_back(to_json(r));
  return {{"instances", rows},
          {"count", b.rows.size()},
          {"failures", b.failures},
          {"with_k_min", b.with_k_min},
          {"fraction_k_min_le_2", b.fraction_k_min_le_2},
          {"with_bounds", b.with_bounds},
          {"lower_bound_tight_fraction", b.lower_tight_fraction},
          {"sandwich_violations", b.sandwich_violations}};
}

/// One CSV row per (instance, k) with the instance-level columns repeated,
/// followed by "#" tally lines.
inline void write_csv(std::ostream& out, const BatchReport& b) {
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return std::string(buf);
  };
  out << "instance,k,delta,k_min,eta_l,eta_u,spectral_bound_ebits,"
         "rank_eta,distance_r,error\n";
  for (std::size_t i = 0; i < b.rows.size(); ++i) {
    const InstanceResult& r = b.rows[i];
    std::string tail;
    tail += r.hierarchy && r.hierarchy->k_min ? std::to_string(*r.hierarchy->k_min) : "";
    tail += ",";
    if (r.bounds) {
      tail += num(r.bounds->eta_l) + ",";
      tail += (r.bounds->eta_u ? num(*r.bounds->eta_u) : r.bounds->eta_u_status) + ",";
      tail += num(r.bounds->spectral_bound_ebits) + "," +
              std::to_string(r.bounds->rank_eta) + "," + num(r.bounds->distance_r);
    } else {
      tail += ",,,,";
    }
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n') c = ';';
    tail += "," + err;
    if (r.hierarchy && !r.hierarchy->deviations.empty()) {
      for (const auto& [k, d] : r.hierarchy->deviations) {
        out << i << "," << k << "," << num(d) << "," << tail << "\n";
      }
    } else {
      out << i << ",,," << tail << "\n";
    }
  }
  out << "# instances " << b.rows.size() << "\n";
  out << "# failures " << b.failures << "\n";
  out << "# fraction_k_min_le_2 " << num(b.fraction_k_min_le_2) << " of "
      << b.with_k_min << "\n";
  out << "# lower_bound_tight_fraction " << num(b.lower_tight_fraction) << " of "
      << b.with_bounds << "\n";
  out << "# sandwich_violations " << b.sandwich_violations << "\n";
}

}  // namespace pptcost
