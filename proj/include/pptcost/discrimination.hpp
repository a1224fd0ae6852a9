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

// Success probabilities for telling two states apart: unrestricted, with PPT
// measurements, and with PPT measurements assisted by a maximally entangled
// resource of Schmidt rank k.
//
// Throughout, W0 is the element that guesses rho0 and T denotes the partial
// transpose on B. For the assisted problem, twirling with U (x) conj(U) on the
// resource leaves two operators (W0, Q0) on the original space; W1 = I - W0
// and Q1 = I - Q0 are substituted directly.

#pragma once

#include <cstdio>
#include <optional>
#include <string>

#include "pptcost/errors.hpp"
#include "pptcost/qmat.hpp"
#include "pptcost/solver.hpp"

namespace pptcost {

/// Summary of the solve behind a reported value.
struct SolveMeta {
  Status status = Status::Failed;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;

  static SolveMeta from(const Solution& s) {
    return {s.status,   s.primal_objective, s.dual_objective, s.gap,
            s.primal_residual, s.dual_residual, s.iterations};
  }
};

struct ReducedVariables {
  BipartiteOperator W0, W1, Q0, Q1;
};

struct SuccessReport {
  double value = 0.0;
  std::optional<ReducedVariables> variables;
  std::optional<BipartiteOperator> element;  // E of the assisted full space
  std::optional<SolveMeta> meta;
};

/// Multipliers of the dual of the reduced assisted problem.
struct DualCertificate {
  BipartiteOperator A, B, C, D, F, G;
  int k = 1;
  double p1 = 0.5;
  double value = 0.0;  // p1 + tr[A + B] + k tr[F + G]

  double objective() const {
    return p1 + (A.trace() + B.trace()).real() +
           k * (F.trace() + G.trace()).real();
  }
};

struct DiscriminationOptions {
  SolverConfig solver;
  int full_side_cap = 144;  // per side of the assisted full space
};

namespace detail {

inline HermExpr identity_expr(int n) { return HermExpr(CMatrix::Identity(n, n)); }

inline HermExpr pt(const HermExpr& x, Dims d) { return partial_transpose(x, d); }

inline Solution require_usable(Solution s, const char* what) {
  if (!s.usable()) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  " (primal residual %.2e, dual residual %.2e, gap %.2e, %d iterations)",
                  s.primal_residual, s.dual_residual, s.gap, s.iterations);
    throw SolverFailed(std::string(what) + ": solver returned " +
                       to_string(s.status) + buf);
  }
  return s;
}

/// Constraints of the reduced assisted problem on (W0, Q0) at level k.
inline void add_reduced_constraints(ConicProgram& p, const HermitianVar& w0,
                                    const HermitianVar& q0, int k, Dims d) {
  const int n = d.total();
  const HermExpr id = identity_expr(n);
  const HermExpr w = w0, q = q0;
  p.add_psd(w, "W0");
  p.add_psd(id - w, "W1");
  p.add_psd(q, "Q0");
  p.add_psd(id - q, "Q1");
  const HermExpr wt = pt(w, d), qt = pt(q, d);
  const HermExpr idt = id;  // identity is invariant under T
  // j = 0: -k Q0^T <= W0^T - Q0^T <= k Q0^T
  p.add_psd(qt * double(k + 1) - wt, "upper0");
  p.add_psd(wt + qt * double(k - 1), "lower0");
  // j = 1 with W1 = I - W0, Q1 = I - Q0
  p.add_psd(idt * double(k) - qt * double(k - 1) - wt, "upper1");
  p.add_psd(wt - qt * double(k + 1) + idt * double(k), "lower1");
}

inline void check_level(int k) {
  if (k < 1) throw InvalidInput("assistance level k must be >= 1");
}

}  // namespace detail

/// 1/2 (1 + ||p0 rho0 - p1 rho1||_1); reduces to the usual form for any priors.
inline SuccessReport helstrom_value(const DiscriminationInstance& inst) {
  SuccessReport r;
  r.value = 0.5 * (1.0 + trace_norm(inst.weighted_difference()));
  return r;
}

/// Best success probability over two-outcome PPT POVMs.
inline SuccessReport psuc_ppt(const DiscriminationInstance& inst,
                              const SolverConfig& cfg = {}) {
  const Dims d = inst.dims();
  const int n = d.total();
  ConicProgram p;
  auto w0 = p.add_hermitian("W0", n);
  auto w1 = p.add_hermitian("W1", n);
  p.maximize(inst.p0 * sdp::inner(inst.rho0.matrix(), w0) +
             inst.p1 * sdp::inner(inst.rho1.matrix(), w1));
  p.add_psd(w0, "W0");
  p.add_psd(w1, "W1");
  p.add_psd(detail::pt(w0, d), "W0^T");
  p.add_psd(detail::pt(w1, d), "W1^T");
  p.add_zero(HermExpr(w0) + w1 - detail::identity_expr(n), "W0+W1=I");
  const Solution s = detail::require_usable(solve(p, cfg), "psuc_ppt");

  SuccessReport r;
  r.value = s.primal_objective;
  const CMatrix W0 = s.hermitian_values.at("W0");
  const CMatrix W1 = s.hermitian_values.at("W1");
  r.variables = ReducedVariables{BipartiteOperator(W0, d), BipartiteOperator(W1, d),
                                 BipartiteOperator(W0, d), BipartiteOperator(W1, d)};
  r.meta = SolveMeta::from(s);
  return r;
}

/// The assisted problem on the reduced variables (W0, Q0).
inline SuccessReport ea_psuc_reduced(const DiscriminationInstance& inst, int k,
                                     const SolverConfig& cfg = {}) {
  detail::check_level(k);
  const Dims d = inst.dims();
  const int n = d.total();
  ConicProgram p;
  auto w0 = p.add_hermitian("W0", n);
  auto q0 = p.add_hermitian("Q0", n);
  p.maximize(ScalarExpr(inst.p1) + sdp::inner(inst.weighted_difference(), w0));
  detail::add_reduced_constraints(p, w0, q0, k, d);
  const Solution s = detail::require_usable(solve(p, cfg), "ea_psuc_reduced");

  SuccessReport r;
  r.value = s.primal_objective;
  const CMatrix W0 = s.hermitian_values.at("W0");
  const CMatrix Q0 = s.hermitian_values.at("Q0");
  const CMatrix id = CMatrix::Identity(n, n);
  r.variables = ReducedVariables{BipartiteOperator(W0, d), BipartiteOperator(id - W0, d),
                                 BipartiteOperator(Q0, d), BipartiteOperator(id - Q0, d)};
  r.meta = SolveMeta::from(s);
  return r;
}

/// The assisted problem solved directly on the enlarged space (AA')(BB').
inline SuccessReport ea_psuc_full(const DiscriminationInstance& inst, int k,
                                  const DiscriminationOptions& opt = {}) {
  detail::check_level(k);
  const Dims d = inst.dims();
  const Dims big{d.a * k, d.b * k};
  if (big.a > opt.full_side_cap || big.b > opt.full_side_cap ||
      big.total() > opt.full_side_cap) {
    throw DimensionCap("assisted space " + to_string(big) +
                       " exceeds the cap of " + std::to_string(opt.full_side_cap));
  }
  const BipartiteOperator diff(inst.weighted_difference(), d);
  const CMatrix cost = kron(diff, max_entangled(k).op()).matrix();
  const int n = big.total();

  ConicProgram p;
  auto e = p.add_hermitian("E", n);
  p.maximize(ScalarExpr(inst.p1) + sdp::inner(cost, e));
  const HermExpr id = detail::identity_expr(n);
  const HermExpr et = detail::pt(e, big);
  p.add_psd(e, "E");
  p.add_psd(id - e, "I-E");
  p.add_psd(et, "E^T");
  p.add_psd(id - et, "I-E^T");
  const Solution s = detail::require_usable(solve(p, opt.solver), "ea_psuc_full");

  SuccessReport r;
  r.value = s.primal_objective;
  r.element = BipartiteOperator(s.hermitian_values.at("E"), big);
  r.meta = SolveMeta::from(s);
  return r;
}

/// Builds the dual of the reduced assisted problem. Exposed for inspection.
inline ConicProgram ea_dual_program(const DiscriminationInstance& inst, int k) {
  detail::check_level(k);
  const Dims d = inst.dims();
  const int n = d.total();
  ConicProgram p;
  auto a = p.add_hermitian("A", n);
  auto b = p.add_hermitian("B", n);
  auto c = p.add_hermitian("C", n);
  auto dd = p.add_hermitian("D", n);
  auto f = p.add_hermitian("F", n);
  auto g = p.add_hermitian("G", n);
  p.minimize(ScalarExpr(inst.p1) + sdp::trace(a) + sdp::trace(b) +
             double(k) * (sdp::trace(f) + sdp::trace(g)));
  for (const auto& v : {a, b, c, dd, f, g}) p.add_psd(v, v.name);
  const HermExpr ct = detail::pt(c, d), dt = detail::pt(dd, d),
                 ft = detail::pt(f, d), gt = detail::pt(g, d);
  const HermExpr r1 = HermExpr(inst.weighted_difference()) - a + ct - dt + ft - gt;
  const HermExpr r2 = HermExpr(b) * -1.0 - ct * double(1 - k) + dt * double(1 + k) -
                      ft * double(1 + k) - gt * double(k - 1);
  p.add_psd(r1 * -1.0, "W-stationarity");
  p.add_psd(r2 * -1.0, "Q-stationarity");
  return p;
}

struct DualReport {
  SuccessReport report;
  DualCertificate certificate;
};

/// Minimizes the dual of the reduced assisted problem; the value is an upper
/// bound on ea_psuc_reduced at the same k.
inline DualReport ea_psuc_dual(const DiscriminationInstance& inst, int k,
                               const SolverConfig& cfg = {}) {
  const ConicProgram p = ea_dual_program(inst, k);
  const Solution s = detail::require_usable(solve(p, cfg), "ea_psuc_dual");
  const Dims d = inst.dims();
  auto get = [&](const char* name) {
    return BipartiteOperator(s.hermitian_values.at(name), d);
  };
  DualReport out;
  out.certificate = DualCertificate{get("A"), get("B"), get("C"),
                                    get("D"), get("F"), get("G"), k, inst.p1, 0.0};
  out.certificate.value = out.certificate.objective();
  out.report.value = s.primal_objective;
  out.report.meta = SolveMeta::from(s);
  return out;
}

}  // namespace pptcost
