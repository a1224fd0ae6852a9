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

// Entanglement cost of optimal PPT discrimination for equal priors: the
// exact per-k hierarchy and cheaper bounds around it. Costs are in ebits,
// log2 of the Schmidt rank of the maximally entangled resource.

#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pptcost/discrimination.hpp"
#include "pptcost/errors.hpp"
#include "pptcost/qmat.hpp"
#include "pptcost/solver.hpp"

namespace pptcost {

/// How the bound programs impose that W scores the trace-norm optimum.
enum class OptimalityMode {
  Face,  // W ranges over the exact optimal face, parametrized on the kernel
  Band,  // W is free with the optimality equality relaxed by eps_eq
};

struct CostOptions {
  SolverConfig solver;
  double eps_zero = 1e-6;  // a deviation at or below this counts as zero
  double eps_eq = 1e-7;    // slack on the optimality equality in Band mode
  double tol_face = 1e-9;  // eigenvalues of the difference treated as zero
  OptimalityMode optimality = OptimalityMode::Face;
  bool early_exit = false;
  int parallelism = 1;
};

struct HierarchyReport {
  std::vector<std::pair<int, double>> deviations;
  std::optional<int> k_min;
  double ebits = 0.0;
  int eta = 0;
  bool marginal = false;  // some deviation lies within 10x of eps_zero
};

struct BoundsReport {
  double spectral_bound_ebits = 0.0;
  double spectral_norm = 0.0;  // ||M+^T - M-^T||_inf
  int rank_eta = 0;
  double rank_bound_ebits = 0.0;
  double eta_l = 0.0;
  double eta_l_ebits = 0.0;
  std::optional<double> eta_u;
  std::optional<double> eta_u_ebits;
  std::string eta_u_status;
  double distance_r = 0.0;
  double distance_lower_ebits = 0.0;
  double eps_eq = 0.0;  // relaxation used on the optimality equality
  OptimalityMode optimality = OptimalityMode::Face;
};

/// ceil(x) after snapping x to a nearby integer, clipped below at 1.
inline double snapped_ceil(double x, double snap = 1e-6) {
  const double r = std::round(x);
  if (std::abs(x - r) <= snap) x = r;
  return std::max(1.0, std::ceil(x));
}

namespace detail {

inline void require_equal_priors(const DiscriminationInstance& inst,
                                 const char* what) {
  if (!inst.equal_priors()) {
    throw InvalidInput(std::string(what) + " is defined for equal priors only");
  }
}

/// Adds |a - target| <= slack. The residual gets its own variable so the
/// dense row a enters through an equality rather than a thin slab, which
/// keeps the Newton systems well conditioned.
inline void add_band(ConicProgram& p, const ScalarExpr& a, double target,
                     const ScalarExpr& slack, const std::string& label) {
  const ScalarVar s = p.add_scalar(label + ".residual");
  p.add_zero(a - target - ScalarExpr(s), label);
  p.add_nonneg(slack - ScalarExpr(s), label + "+");
  p.add_nonneg(slack + ScalarExpr(s), label + "-");
}

/// An operator W with 0 <= W <= I and tr[diff W] equal to the sum of the
/// positive eigenvalues of diff. In Face mode W = P + V X V^dagger, where P
/// projects on the positive part, V spans the kernel and 0 <= X <= I; this is
/// the whole optimal set. In Band mode W is free up to eps_eq.
inline HermExpr optimal_element(ConicProgram& p, const CMatrix& diff,
                                const CostOptions& opt, const std::string& name) {
  const int n = static_cast<int>(diff.rows());
  const HermExpr id = identity_expr(n);
  if (opt.optimality == OptimalityMode::Band) {
    const HermitianVar w = p.add_hermitian(name, n);
    p.add_psd(w, name);
    p.add_psd(id - w, "I-" + name);
    const RVector ev = eigenvalues_herm(diff);
    add_band(p, sdp::inner(diff, w), ev.cwiseMax(0.0).sum(), ScalarExpr(opt.eps_eq),
             "optimality");
    return w;
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(diff));
  CMatrix plus = CMatrix::Zero(n, n);
  std::vector<int> kernel;
  for (int i = 0; i < n; ++i) {
    const double l = es.eigenvalues()(i);
    if (l > opt.tol_face) {
      plus += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    } else if (l >= -opt.tol_face) {
      kernel.push_back(i);
    }
  }
  if (kernel.empty()) return HermExpr(plus);
  const int m = static_cast<int>(kernel.size());
  CMatrix v(n, m);
  for (int j = 0; j < m; ++j) v.col(j) = es.eigenvectors().col(kernel[j]);
  const HermitianVar x = p.add_hermitian(name + ".kernel", m);
  p.add_psd(x, name + ".kernel");
  p.add_psd(identity_expr(m) - x, "I-" + name + ".kernel");
  return HermExpr(plus) + congruence(v, HermExpr(x));
}

}  // namespace detail

/// Smallest t with |tr[(rho0 - rho1) W0] - 1/2 ||rho0 - rho1||_1| <= t over
/// the assisted PPT set at level k; zero exactly when k ebits suffice.
inline double deviation(const DiscriminationInstance& inst, int k,
                        const SolverConfig& cfg = {}) {
  detail::require_equal_priors(inst, "deviation");
  detail::check_level(k);
  const Dims d = inst.dims();
  const int n = d.total();
  const CMatrix diff = inst.rho0.matrix() - inst.rho1.matrix();
  const double half_norm = 0.5 * trace_norm(diff);

  ConicProgram p;
  auto w0 = p.add_hermitian("W0", n);
  auto q0 = p.add_hermitian("Q0", n);
  auto t = p.add_scalar("t");
  p.minimize(t);
  detail::add_reduced_constraints(p, w0, q0, k, d);
  detail::add_band(p, sdp::inner(diff, w0), half_norm, t, "optimality");
  const Solution s = detail::require_usable(solve(p, cfg), "deviation");
  return std::max(0.0, s.primal_objective);
}

/// eta = max(2 r0 - 1, r0 + 1) with r0 the smaller numerical rank.
inline int rank_bound(const DiscriminationInstance& inst, double tol_rank = 1e-9) {
  const int r0 = std::min(numerical_rank(inst.rho0.matrix(), tol_rank),
                          numerical_rank(inst.rho1.matrix(), tol_rank));
  return std::max(2 * r0 - 1, r0 + 1);
}

inline HierarchyReport cost_hierarchy(const DiscriminationInstance& inst,
                                      const CostOptions& opt = {}) {
  detail::require_equal_priors(inst, "cost_hierarchy");
  HierarchyReport rep;
  rep.eta = rank_bound(inst);
  if (opt.early_exit || opt.parallelism <= 1) {
    for (int k = 1; k <= rep.eta; ++k) {
      const double dv = deviation(inst, k, opt.solver);
      rep.deviations.emplace_back(k, dv);
      if (opt.early_exit && dv <= opt.eps_zero) break;
    }
  } else {
    std::vector<double> dv(rep.eta, 0.0);
    int next = 1;
    while (next <= rep.eta) {
      std::vector<std::future<double>> jobs;
      const int first = next;
      for (; next <= rep.eta && next - first < opt.parallelism; ++next) {
        jobs.push_back(std::async(std::launch::async, [&inst, &opt, k = next] {
          return deviation(inst, k, opt.solver);
        }));
      }
      for (std::size_t j = 0; j < jobs.size(); ++j) dv[first - 1 + j] = jobs[j].get();
    }
    for (int k = 1; k <= rep.eta; ++k) rep.deviations.emplace_back(k, dv[k - 1]);
  }
  for (const auto& [k, dv] : rep.deviations) {
    if (dv > opt.eps_zero / 10 && dv <= 10 * opt.eps_zero) rep.marginal = true;
    if (!rep.k_min && dv <= opt.eps_zero) rep.k_min = k;
  }
  if (!rep.k_min) {
    throw NotConverged("hierarchy did not reach zero by k = " + std::to_string(rep.eta),
                       rep.deviations.back().second);
  }
  rep.ebits = std::log2(double(*rep.k_min));
  return rep;
}

/// ||M+^T - M-^T||_inf for the Helstrom projectors.
inline double helstrom_pt_norm(const DiscriminationInstance& inst,
                               double tol_rank = 1e-9) {
  const HelstromMeasurement h = helstrom_projectors(inst, tol_rank);
  return spectral_norm(partial_transpose(h.m_plus - h.m_minus));
}

/// log2 ceil ||M+^T - M-^T||_inf.
inline double spectral_upper_bound(const DiscriminationInstance& inst,
                                   double tol_rank = 1e-9) {
  detail::require_equal_priors(inst, "spectral_upper_bound");
  return std::log2(snapped_ceil(helstrom_pt_norm(inst, tol_rank)));
}

namespace detail {

/// Variables and constraints shared by the lower and upper SDP bounds.
struct EtaProgram {
  ConicProgram p;
  HermExpr w;
  HermitianVar qh;
  ScalarVar k;
};

inline EtaProgram eta_base(const DiscriminationInstance& inst, const CostOptions& opt) {
  const Dims d = inst.dims();
  const int n = d.total();
  EtaProgram e;
  e.qh = e.p.add_hermitian("Qhat", n);
  e.k = e.p.add_scalar("k");
  e.p.minimize(e.k);
  e.w = optimal_element(e.p, inst.rho1.matrix() - inst.rho0.matrix(), opt, "W");
  const HermExpr qh = e.qh;
  e.p.add_psd(qh, "Qhat");
  e.p.add_psd(HermExpr::times(ScalarExpr(e.k) + 1.0, CMatrix::Identity(n, n)) - qh,
              "(k+1)I-Qhat");
  return e;
}

}  // namespace detail

/// Lower SDP bound eta_l; the cost is at least log2 ceil(eta_l).
inline double sdp_lower_bound(const DiscriminationInstance& inst,
                              const CostOptions& opt = {}) {
  detail::require_equal_priors(inst, "sdp_lower_bound");
  const Dims d = inst.dims();
  const int n = d.total();
  detail::EtaProgram e = detail::eta_base(inst, opt);
  const HermExpr wt = detail::pt(e.w, d), qt = detail::pt(e.qh, d);
  const HermExpr kI = HermExpr::times(e.k, CMatrix::Identity(n, n));
  e.p.add_psd(qt + wt, "Qhat^T+W^T");
  e.p.add_psd(qt - wt, "Qhat^T-W^T");
  e.p.add_psd(wt - qt + kI, "W^T-Qhat^T+kI");
  e.p.add_psd(kI - wt, "kI-W^T");
  const Solution s = detail::require_usable(solve(e.p, opt.solver), "sdp_lower_bound");
  return s.primal_objective;
}

/// Upper SDP bound eta_u from a restriction that needs k >= 1; throws
/// Infeasible when the restriction admits no point.
inline double sdp_upper_bound(const DiscriminationInstance& inst,
                              const CostOptions& opt = {}) {
  detail::require_equal_priors(inst, "sdp_upper_bound");
  const Dims d = inst.dims();
  const int n = d.total();
  detail::EtaProgram e = detail::eta_base(inst, opt);
  const HermExpr wt = detail::pt(e.w, d), qt = detail::pt(e.qh, d);
  const HermExpr kI = HermExpr::times(e.k, CMatrix::Identity(n, n));
  e.p.add_psd(wt, "W^T");
  e.p.add_psd(qt - wt, "Qhat^T-W^T");
  e.p.add_psd(wt - qt + kI, "W^T-Qhat^T+kI");
  e.p.add_psd(kI - qt - wt, "kI-Qhat^T-W^T");
  e.p.add_nonneg(ScalarExpr(e.k) - 1.0, "k>=1");
  const Solution s = solve(e.p, opt.solver);
  if (s.status == Status::Infeasible) {
    throw Infeasible("restricted upper-bound program is infeasible");
  }
  return detail::require_usable(s, "sdp_upper_bound").primal_objective;
}

/// Smallest r for which some optimal POVM is within spectral distance r of a
/// PPT POVM after partial transpose; returns log2 ceil(r), at least 0.
inline double distance_lower_r(const DiscriminationInstance& inst,
                               const CostOptions& opt = {}) {
  detail::require_equal_priors(inst, "distance_lower_bound");
  const Dims d = inst.dims();
  const int n = d.total();
  ConicProgram p;
  auto e0 = p.add_hermitian("E0", n);
  auto r = p.add_scalar("r");
  p.minimize(r);
  const HermExpr id = detail::identity_expr(n);
  const HermExpr w0 =
      detail::optimal_element(p, inst.rho0.matrix() - inst.rho1.matrix(), opt, "W0");
  p.add_psd(e0, "E0");
  p.add_psd(id - e0, "E1");
  const HermExpr et = detail::pt(e0, d);
  p.add_psd(et, "E0^T");
  p.add_psd(id - et, "E1^T");
  const HermExpr delta = detail::pt(w0, d) - et;
  const HermExpr rI = HermExpr::times(r, CMatrix::Identity(n, n));
  p.add_psd(rI - delta, "rI-delta");
  p.add_psd(rI + delta, "rI+delta");
  const Solution s = detail::require_usable(solve(p, opt.solver), "distance_lower_bound");
  return std::max(0.0, s.primal_objective);
}

inline double distance_lower_bound(const DiscriminationInstance& inst,
                                   const CostOptions& opt = {}) {
  return std::max(0.0, std::log2(snapped_ceil(distance_lower_r(inst, opt))));
}

inline BoundsReport cost_bounds(const DiscriminationInstance& inst,
                                const CostOptions& opt = {}) {
  BoundsReport b;
  b.eps_eq = opt.optimality == OptimalityMode::Band ? opt.eps_eq : 0.0;
  b.optimality = opt.optimality;
  b.spectral_norm = helstrom_pt_norm(inst);
  b.spectral_bound_ebits = spectral_upper_bound(inst);
  b.rank_eta = rank_bound(inst);
  b.rank_bound_ebits = std::log2(double(b.rank_eta));
  b.eta_l = sdp_lower_bound(inst, opt);
  b.eta_l_ebits = std::log2(snapped_ceil(b.eta_l));
  try {
    b.eta_u = sdp_upper_bound(inst, opt);
    b.eta_u_ebits = std::log2(snapped_ceil(*b.eta_u));
    b.eta_u_status = "optimal";
  } catch (const Infeasible&) {
    b.eta_u_status = "infeasible";
  } catch (const SolverFailed&) {
    b.eta_u_status = "failed";
  }
  b.distance_r = distance_lower_r(inst, opt);
  b.distance_lower_ebits = std::log2(snapped_ceil(b.distance_r));
  return b;
}

}  // namespace pptcost
