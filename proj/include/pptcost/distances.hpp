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

// How far a POVM is from the PPT POVMs, measured after partial transpose.
// Every distance comes with the PPT POVM {E_j} that attains it.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pptcost/discrimination.hpp"
#include "pptcost/errors.hpp"
#include "pptcost/qmat.hpp"
#include "pptcost/solver.hpp"

namespace pptcost {

enum class SchattenOrder { Trace, Frobenius, Spectral };

inline const char* to_string(SchattenOrder p) {
  switch (p) {
    case SchattenOrder::Trace: return "trace";
    case SchattenOrder::Frobenius: return "frobenius";
    case SchattenOrder::Spectral: return "spectral";
  }
  return "spectral";
}

struct DistanceReport {
  DistanceReport(double v, Povm w) : value(v), witness(std::move(w)) {}

  double value = 0.0;
  Povm witness;
  bool converged = false;
  int iterations = 0;  // bisection steps; 0 for a single program
  double witness_violation = 0.0;
  std::optional<SolveMeta> meta;  // the final solve
};

struct RelativeDistanceOptions {
  SolverConfig solver;
  std::optional<double> r_max;  // default 2 dA dB
  double tol_bisect = 1e-4;
  double tol_slack = 1e-7;      // largest slack still counted as feasible
  double tol_witness = 1e-6;    // accepted violation of the final witness
};

namespace detail {

/// The PPT POVM variables E_0..E_{m-1} with sum E_j = I.
inline std::vector<HermitianVar> add_ppt_povm(ConicProgram& p, std::size_t m, Dims d) {
  const int n = d.total();
  std::vector<HermitianVar> e;
  HermExpr sum(n);
  for (std::size_t j = 0; j < m; ++j) {
    const std::string name = "E" + std::to_string(j);
    e.push_back(p.add_hermitian(name, n));
    p.add_psd(e.back(), name);
    p.add_psd(pt(e.back(), d), name + "^T");
    sum += e.back();
  }
  p.add_zero(sum - identity_expr(n), "sum E = I");
  return e;
}

inline Povm witness_from(const Solution& s, std::size_t m, Dims d) {
  std::vector<BipartiteOperator> el;
  for (std::size_t j = 0; j < m; ++j) {
    el.emplace_back(hermitian_part(s.hermitian_values.at("E" + std::to_string(j))), d);
  }
  Tolerances loose;
  loose.herm = loose.psd = loose.trace = 1e-6;
  return Povm(std::move(el), loose);
}

/// Real coordinates of a Hermitian expression in an orthonormal basis.
inline std::vector<ScalarExpr> hs_coordinates(const HermExpr& x) {
  const int n = x.side();
  std::vector<ScalarExpr> v;
  const double s2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    CMatrix c = CMatrix::Zero(n, n);
    c(i, i) = 1.0;
    v.push_back(sdp::inner(c, x));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      CMatrix re = CMatrix::Zero(n, n), im = CMatrix::Zero(n, n);
      re(i, j) = re(j, i) = 0.5;
      im(i, j) = cplx(0.0, 0.5);
      im(j, i) = cplx(0.0, -0.5);
      v.push_back(sdp::inner(re, x) * s2);
      v.push_back(sdp::inner(im, x) * s2);
    }
  }
  return v;
}

/// Adds ||x||_2 <= r as the arrow LMI [[r, v^T], [v, r I]] >= 0.
inline void add_frobenius_epigraph(ConicProgram& p, const HermExpr& x,
                                   const ScalarExpr& r, const std::string& label) {
  const std::vector<ScalarExpr> v = hs_coordinates(x);
  const int m = static_cast<int>(v.size()) + 1;
  HermExpr arrow = HermExpr::times(r, CMatrix::Identity(m, m));
  for (int i = 1; i < m; ++i) {
    CMatrix e = CMatrix::Zero(m, m);
    e(0, i) = e(i, 0) = 1.0;
    arrow += HermExpr::times(v[i - 1], e);
  }
  p.add_psd(arrow, label);
}

}  // namespace detail

/// min r such that ||M_j^T - E_j^T||_p <= r for all j over PPT POVMs {E_j}.
inline DistanceReport schatten_ppt_distance(const Povm& m, SchattenOrder order,
                                            const SolverConfig& cfg = {}) {
  const Dims d = m.dims();
  const int n = d.total();
  ConicProgram p;
  auto r = p.add_scalar("r");
  p.minimize(r);
  const auto e = detail::add_ppt_povm(p, m.size(), d);
  for (std::size_t j = 0; j < m.size(); ++j) {
    const std::string tag = std::to_string(j);
    const HermExpr delta =
        HermExpr(partial_transpose(m[j].matrix(), d)) - detail::pt(e[j], d);
    switch (order) {
      case SchattenOrder::Spectral: {
        const HermExpr rI = HermExpr::times(r, CMatrix::Identity(n, n));
        p.add_psd(rI - delta, "rI-delta" + tag);
        p.add_psd(rI + delta, "rI+delta" + tag);
        break;
      }
      case SchattenOrder::Trace: {
        // ||delta||_1 = min tr(2P - delta) over P >= 0, P >= delta
        auto pv = p.add_hermitian("P" + tag, n);
        p.add_psd(pv, "P" + tag);
        p.add_psd(HermExpr(pv) - delta, "P-delta" + tag);
        p.add_nonneg(ScalarExpr(r) - 2.0 * sdp::trace(pv) + sdp::trace(delta),
                     "trace" + tag);
        break;
      }
      case SchattenOrder::Frobenius:
        detail::add_frobenius_epigraph(p, delta, r, "frobenius" + tag);
        break;
    }
  }
  const Solution s = detail::require_usable(solve(p, cfg), "schatten_ppt_distance");
  DistanceReport rep{std::max(0.0, s.primal_objective),
                     detail::witness_from(s, m.size(), d)};
  rep.converged = true;
  rep.meta = SolveMeta::from(s);
  return rep;
}

namespace detail {

/// Program for -r E_j^T - s I <= M_j^T - E_j^T <= r E_j^T + s I, minimizing s.
/// s <= 0 means r is feasible.
inline ConicProgram relative_program(const Povm& m, double r, bool with_slack) {
  const Dims d = m.dims();
  const int n = d.total();
  ConicProgram p;
  const auto e = add_ppt_povm(p, m.size(), d);
  ScalarExpr s(0.0);
  if (with_slack) {
    const ScalarVar sv = p.add_scalar("s");
    s = ScalarExpr(sv);
    p.minimize(s);
  }
  const CMatrix id = CMatrix::Identity(n, n);
  for (std::size_t j = 0; j < m.size(); ++j) {
    const std::string tag = std::to_string(j);
    const HermExpr mt(partial_transpose(m[j].matrix(), d));
    const HermExpr et = pt(e[j], d);
    const HermExpr sI = HermExpr::times(s, id);
    p.add_psd(et * (1.0 + r) - mt + sI, "upper" + tag);
    p.add_psd(mt + et * (r - 1.0) + sI, "lower" + tag);
  }
  return p;
}

struct RelativeProbe {
  bool feasible = false;
  double slack = 0.0;
  std::optional<Solution> solution;
};

inline RelativeProbe probe_relative(const Povm& m, double r,
                                    const RelativeDistanceOptions& opt) {
  const Solution s = require_usable(solve(relative_program(m, r, true), opt.solver),
                                    "relative_spectral_ppt_distance");
  RelativeProbe out;
  out.slack = s.primal_objective;
  out.feasible = out.slack <= opt.tol_slack;
  out.solution = s;
  return out;
}

}  // namespace detail

/// Smallest r, to within tol_bisect, such that some PPT POVM {E_j} satisfies
/// -r E_j^T <= M_j^T - E_j^T <= r E_j^T for all j. Bisection on r; the
/// feasible set only grows with r.
inline DistanceReport relative_spectral_ppt_distance(
    const Povm& m, const RelativeDistanceOptions& opt = {}) {
  if (!(opt.tol_bisect > 0.0) || !(opt.tol_slack > 0.0)) {
    throw InvalidInput("bisection and slack tolerances must be positive");
  }
  const Dims d = m.dims();
  double hi = opt.r_max.value_or(2.0 * d.total());
  if (!(hi >= 0.0)) throw InvalidInput("r_max must be non-negative");

  detail::RelativeProbe best = detail::probe_relative(m, 0.0, opt);
  double lo = 0.0, value = 0.0;
  int iterations = 0;
  if (!best.feasible) {
    detail::RelativeProbe top = detail::probe_relative(m, hi, opt);
    if (!top.feasible) {
      hi *= 2.0;
      top = detail::probe_relative(m, hi, opt);
      if (!top.feasible) {
        char buf[120];
        std::snprintf(buf, sizeof buf,
                      "no PPT POVM within relative distance %.6g (slack %.3e)", hi,
                      top.slack);
        throw Infeasible(buf);
      }
    }
    best = top;
    while (hi - lo > opt.tol_bisect) {
      const double mid = 0.5 * (lo + hi);
      detail::RelativeProbe pr = detail::probe_relative(m, mid, opt);
      ++iterations;
      if (pr.feasible) {
        hi = mid;
        best = std::move(pr);
      } else {
        lo = mid;
      }
    }
    value = hi;
  }

  const Solution& s = *best.solution;
  DistanceReport rep{value, detail::witness_from(s, m.size(), d)};
  rep.iterations = iterations;
  rep.meta = SolveMeta::from(s);

  // Check the witness against the slack-free constraints at the reported r.
  const ConicProgram exact = detail::relative_program(m, value, false);
  Assignment a;
  for (std::size_t j = 0; j < m.size(); ++j) {
    a.hermitian["E" + std::to_string(j)] = rep.witness[j].matrix();
  }
  const FeasibilityReport fr = check_feasibility(exact, a, opt.tol_witness);
  rep.witness_violation = fr.worst_violation;
  rep.converged = fr.feasible;
  return rep;
}

}  // namespace pptcost
