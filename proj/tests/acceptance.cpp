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

// Release checks. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pptcost/batch.hpp"
#include "pptcost/certify.hpp"
#include "pptcost/cost.hpp"
#include "pptcost/distances.hpp"
#include "pptcost/ensembles.hpp"
#include "support.hpp"

using namespace pptcost;
namespace t = pptcost::testing;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    v.pass = false;
    v.detail += fmt(" (over the %.0f s budget)", budget_s);
  }
  if (!v.pass) ++failures;
  std::printf("criterion %d: %s  %s [%.1f s]\n", id, v.pass ? "PASS" : "FAIL",
              v.detail.c_str(), secs);
  std::fflush(stdout);
}

// Shared by criteria 3 and 8.
std::vector<InstanceResult> sweep_rows;

// Shared by criteria 4 and 5.
std::vector<DiscriminationInstance> small_instances() {
  std::vector<DiscriminationInstance> out;
  for (int i = 0; i < 10; ++i) out.push_back(t::random_instance({2, 2}, 4, i, 1 + i % 3, 0));
  return out;
}

Verdict qutrit_gap() {
  const auto q = qutrit_pair();
  const double dual = ea_psuc_dual(q, 2).report.value;
  const double h = helstrom_value(q).value;
  const GapReport g = certified_gap(q, 2);
  const bool ok = dual <= 0.9125 + 1e-3 && h >= 0.9135 - 1e-3 && g.gap_proven;
  return {ok, fmt("dual(k=2)=%.6f helstrom=%.6f certified upper=%.6f lower=%.6f gap_proven=%d",
                  dual, h, g.upper.value, g.lower.value, int(g.gap_proven))};
}

Verdict qutrit_hierarchy() {
  const HierarchyReport r = cost_hierarchy(qutrit_pair());
  const double d2 = r.deviations.at(1).second, d3 = r.deviations.at(2).second;
  const bool ok = r.k_min == 3 && d2 >= 5e-4 && d3 <= 1e-6 && r.eta == 3;
  return {ok, fmt("k_min=%d eta=%d delta(2)=%.3e delta(3)=%.3e", r.k_min.value_or(-1), r.eta,
                  d2, d3)};
}

Verdict convergence_sweep() {
  RunConfig cfg;
  int le2 = 0, bad_tail = 0, bad_mono = 0, wrong_eta = 0;
  double worst_tail = 0.0, worst_rise = 0.0;
  for (int i = 0; i < 20; ++i) {
    InstanceResult r =
        analyze_instance(sweep_instance(4, 3, 7, i), cfg, CostMethod::All, fmt("sweep_%d", i));
    if (!r.ok()) throw SolverFailed(r.name + ": " + r.error);
    const HierarchyReport& h = *r.hierarchy;
    if (h.eta != 5) ++wrong_eta;
    const double tail = h.deviations.back().second;
    worst_tail = std::max(worst_tail, tail);
    if (tail > 1e-6) ++bad_tail;
    for (std::size_t k = 1; k < h.deviations.size(); ++k) {
      const double rise = h.deviations[k].second - h.deviations[k - 1].second;
      worst_rise = std::max(worst_rise, rise);
      if (rise > 2e-8) ++bad_mono;
    }
    if (h.k_min && *h.k_min <= 2) ++le2;
    sweep_rows.push_back(std::move(r));
  }
  const bool ok = wrong_eta == 0 && bad_tail == 0 && bad_mono == 0 && le2 >= 12;
  return {ok, fmt("eta=5 on %d/20, max delta(5)=%.2e, max rise=%.2e, k_min<=2 on %d/20",
                  20 - wrong_eta, worst_tail, worst_rise, le2)};
}

Verdict oracle_equivalence() {
  double worst = 0.0;
  for (const auto& inst : small_instances()) {
    for (int k : {2, 3}) {
      worst = std::max(worst,
                       std::abs(ea_psuc_full(inst, k).value - ea_psuc_reduced(inst, k).value));
    }
  }
  return {worst <= 1e-6, fmt("max |full - reduced| = %.2e over 10 instances, k=2,3", worst)};
}

Verdict duality() {
  const SolverConfig cfg;
  const double tol_cert = 100 * cfg.tol_feas;
  double worst = 0.0, worst_violation = 0.0;
  int invalid = 0;
  for (const auto& inst : small_instances()) {
    for (int k : {2, 3}) {
      const double primal = ea_psuc_reduced(inst, k, cfg).value;
      const DualReport d = ea_psuc_dual(inst, k, cfg);
      worst = std::max(worst, std::abs(primal - d.report.value));
      const CertifiedBound b = verify_dual(d.certificate, inst, tol_cert);
      worst_violation = std::max(worst_violation, b.worst_violation);
      if (!b.valid) ++invalid;
    }
  }
  return {worst <= 1e-6 && invalid == 0,
          fmt("max |primal - dual| = %.2e, %d invalid certificates, worst violation %.2e",
              worst, invalid, worst_violation)};
}

Verdict pure_state_cost() {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const HierarchyReport h = cost_hierarchy(t::random_instance({3, 3}, 6, i, 1, 0));
    worst = std::max(worst, h.ebits);
  }
  double pvc = 0.0;
  for (int d : {2, 3}) pvc = std::max(pvc, cost_hierarchy(pure_vs_complement(d)).ebits);
  return {worst <= 1.0 + 1e-9 && pvc <= 1.0 + 1e-9,
          fmt("max ebits %.4f over 10 rank-1 instances, %.4f for pure-vs-complement d=2,3",
              worst, pvc)};
}

Verdict orthogonal_pairs() {
  // The threshold log2(d-1) counts the local dimension d = 3.
  const double limit = std::log2(3.0 - 1.0);
  int over = 0;
  std::string ks;
  for (int i = 0; i < 10; ++i) {
    const int r0 = 1 + i % 4;
    const HierarchyReport h = cost_hierarchy(orthogonal_mixed_pair(3, r0, 7, i));
    if (h.ebits > limit + 1e-9) ++over;
    ks += fmt("%s%d", i ? "," : "", h.k_min.value_or(-1));
  }
  return {over == 0, fmt("k_min per instance [%s], %d/10 above %.0f ebit", ks.c_str(), over,
                         limit)};
}

Verdict sandwich() {
  if (sweep_rows.size() != 20) return {false, "sweep from criterion 3 unavailable"};
  int holds = 0, tight = 0, with_eta_u = 0;
  for (const auto& r : sweep_rows) {
    if (r.sandwich_holds().value_or(false)) ++holds;
    if (r.lower_tight().value_or(false)) ++tight;
    if (r.bounds->eta_u) ++with_eta_u;
  }
  return {holds == 20 && tight >= 10,
          fmt("sandwich holds on %d/20 (eta_u feasible on %d), lower bound tight on %d/20",
              holds, with_eta_u, tight)};
}

Verdict distance_axioms() {
  Rng rng(9, 0);
  double faithful = 0.0;
  for (int i = 0; i < 5; ++i) {
    faithful = std::max(
        faithful, schatten_ppt_distance(random_ppt_povm({2, 2}, rng), SchattenOrder::Spectral).value);
  }
  auto spectral = [](const Povm& m) {
    return schatten_ppt_distance(m, SchattenOrder::Spectral).value;
  };
  const Povm m = t::entangled_povm(rng);
  const double base = spectral(m);
  double lu = 0.0;
  for (int i = 0; i < 5; ++i) {
    lu = std::max(lu, std::abs(spectral(t::conjugate(t::local_unitary({2, 2}, rng), m)) - base));
  }
  const Povm m0 = t::entangled_povm(rng), m1 = t::entangled_povm(rng);
  const double d0 = spectral(m0), d1 = spectral(m1);
  double convex_excess = -1.0;
  for (double a : {0.25, 0.5, 0.75}) {
    convex_excess =
        std::max(convex_excess, spectral(t::mix(a, m0, m1)) - (a * d0 + (1.0 - a) * d1));
  }
  const double xi = 0.5 * (1.0 + t::max_pt_norm(m1)), zeta = 0.5 * (1.0 + t::max_pt_norm(m0));
  const double joint = spectral(t::tensor(m0, m1));
  const double sub_rhs = xi * d0 + zeta * d1;
  const bool ok = faithful <= 1e-6 && lu <= 1e-6 && convex_excess <= 1e-6 &&
                  joint <= sub_rhs + 1e-6;
  return {ok, fmt("faithful max %.1e, LU drift %.1e (D=%.4f), convexity excess %.1e, "
                  "subadditivity %.4f <= %.4f",
                  faithful, lu, base, convex_excess, joint, sub_rhs)};
}

Verdict structural_lemmas() {
  Rng rng(10, 0);
  const Dims dims[] = {{2, 2}, {2, 3}, {3, 3}};
  double lo = 1.0, hi = -1.0;
  for (int i = 0; i < 50; ++i) {
    const Dims d = dims[i % 3];
    const DensityMatrix psi = pure_state(random_pure_vector(d.total(), rng), d);
    const RVector ev = eig_herm(partial_transpose(psi.matrix(), d)).values;
    lo = std::min(lo, ev.minCoeff());
    hi = std::max(hi, ev.maxCoeff());
  }
  int rank_ok = 0;
  for (int i = 0; i < 20; ++i) {
    const Dims d = dims[i % 3];
    const int r0 = 1 + i % d.total(), r1 = r0 + (i * 7) % (d.total() - r0 + 1);
    const auto inst = t::random_instance(d, 11, i, r0, r1);
    const int plus = numerical_rank(helstrom_projectors(inst).m_plus, 1e-9);
    const int min_rank = std::min(numerical_rank(inst.rho0.matrix(), 1e-9),
                                  numerical_rank(inst.rho1.matrix(), 1e-9));
    if (plus <= min_rank) ++rank_ok;
  }
  const bool ok = lo >= -0.5 - 1e-9 && hi <= 1.0 + 1e-9 && rank_ok == 20;
  return {ok, fmt("pure-state PT spectrum in [%.6f, %.6f], rank(M+) <= min rank on %d/20",
                  lo, hi, rank_ok)};
}

}  // namespace

int main() {
  criterion(1, 60, qutrit_gap);
  criterion(2, 60, qutrit_hierarchy);
  criterion(3, 15 * 60, convergence_sweep);
  criterion(4, 5 * 60, oracle_equivalence);
  criterion(5, 5 * 60, duality);
  criterion(6, 10 * 60, pure_state_cost);
  criterion(7, 10 * 60, orthogonal_pairs);
  criterion(8, 60, sandwich);
  criterion(9, 10 * 60, distance_axioms);
  criterion(10, 60, structural_lemmas);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
