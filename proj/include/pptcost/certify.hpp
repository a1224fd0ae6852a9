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

// One-sided bounds checked with plain eigenvalue computations only. A dual
// certificate bounds the assisted PPT value from above; a POVM bounds the
// unrestricted value from below.
//
// Sign conventions of the dual, with D0 = p0 rho0 - p1 rho1 and all six
// multipliers PSD:
//   D0 - A + C^T - D^T + F^T - G^T <= 0
//   -B - (1-k) C^T + (1+k) D^T - (1+k) F^T - (k-1) G^T <= 0
// These were checked against the primal by strong duality on random
// instances and on the qutrit pair.

#pragma once

#include <algorithm>
#include <cmath>

#include "pptcost/discrimination.hpp"
#include "pptcost/errors.hpp"
#include "pptcost/qmat.hpp"

namespace pptcost {

enum class BoundDirection { UpperOnEA, LowerOnGlobal };

inline const char* to_string(BoundDirection d) {
  return d == BoundDirection::UpperOnEA ? "upper_on_ea" : "lower_on_global";
}

struct CertifiedBound {
  BoundDirection direction = BoundDirection::UpperOnEA;
  double value = 0.0;
  double worst_violation = 0.0;
  bool valid = false;
};

struct GapReport {
  bool gap_proven = false;
  CertifiedBound upper;  // on the assisted PPT value at level k
  CertifiedBound lower;  // on the unrestricted optimum
  double margin = 0.0;
};

namespace detail {

inline double psd_violation(const CMatrix& x) {
  return std::max(0.0, -min_eigenvalue(hermitian_part(x)));
}

struct DualResiduals {
  CMatrix w, q;  // both must be <= 0
};

inline DualResiduals dual_residuals(const CMatrix& d0, const CMatrix& a,
                                    const CMatrix& b, const CMatrix& c,
                                    const CMatrix& dd, const CMatrix& f,
                                    const CMatrix& g, int k, Dims dims) {
  auto t = [&](const CMatrix& x) { return partial_transpose(x, dims); };
  DualResiduals r;
  r.w = hermitian_part(d0 - a + t(c) - t(dd) + t(f) - t(g));
  r.q = hermitian_part(-b - double(1 - k) * t(c) + double(1 + k) * t(dd) -
                       double(1 + k) * t(f) - double(k - 1) * t(g));
  return r;
}

}  // namespace detail

/// Checks a dual certificate from scratch. When the violation is within
/// tol_cert, the multipliers are shifted into exact feasibility and the
/// cost of the shift is added, so value stays an upper bound on the assisted
/// PPT success probability at level cert.k.
inline CertifiedBound verify_dual(const DualCertificate& cert,
                                  const DiscriminationInstance& inst,
                                  double tol_cert = 1e-6) {
  const Dims d = inst.dims();
  for (const auto* x : {&cert.A, &cert.B, &cert.C, &cert.D, &cert.F, &cert.G}) {
    if (!(x->dims() == d)) {
      throw ShapeMismatch("certificate dims " + to_string(x->dims()) +
                          " do not match instance dims " + to_string(d));
    }
  }
  if (cert.k < 1) throw InvalidInput("certificate level k must be >= 1");
  const int n = d.total();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix d0 = inst.weighted_difference();

  CertifiedBound out;
  out.direction = BoundDirection::UpperOnEA;
  double worst = 0.0;
  for (const auto* x : {&cert.A, &cert.B, &cert.C, &cert.D, &cert.F, &cert.G}) {
    worst = std::max(worst, detail::psd_violation(x->matrix()));
  }
  {
    const auto r = detail::dual_residuals(d0, cert.A.matrix(), cert.B.matrix(),
                                          cert.C.matrix(), cert.D.matrix(),
                                          cert.F.matrix(), cert.G.matrix(), cert.k, d);
    worst = std::max({worst, std::max(0.0, max_eigenvalue(r.w)),
                      std::max(0.0, max_eigenvalue(r.q))});
  }
  out.worst_violation = worst;
  out.valid = worst <= tol_cert;
  if (!out.valid) {
    out.value = cert.objective();
    return out;
  }

  // Shift C, D, F, G to PSD, then absorb what is left into A and B.
  auto lifted = [&](const CMatrix& x) {
    const double l = min_eigenvalue(hermitian_part(x));
    return l < 0.0 ? CMatrix(x + 2.0 * std::abs(l) * id) : x;
  };
  const CMatrix c = lifted(cert.C.matrix()), dd = lifted(cert.D.matrix()),
                f = lifted(cert.F.matrix()), g = lifted(cert.G.matrix());
  const auto r = detail::dual_residuals(d0, cert.A.matrix(), cert.B.matrix(), c, dd,
                                        f, g, cert.k, d);
  const double da = std::max(0.0, max_eigenvalue(r.w));
  const double db = std::max(0.0, max_eigenvalue(r.q));
  CMatrix a = cert.A.matrix() + da * id, b = cert.B.matrix() + db * id;
  a = lifted(a);
  b = lifted(b);
  out.value = cert.p1 + (a.trace() + b.trace()).real() +
              cert.k * (f.trace() + g.trace()).real();
  return out;
}

/// A binary POVM gives p0 tr(rho0 W0) + p1 tr(rho1 W1), a lower bound on the
/// unrestricted optimum when the POVM is valid.
inline CertifiedBound verify_primal_global(const Povm& w,
                                           const DiscriminationInstance& inst,
                                           double tol_cert = 1e-6) {
  if (w.size() != 2) throw ShapeMismatch("expected a two-outcome POVM");
  if (!(w.dims() == inst.dims())) {
    throw ShapeMismatch("POVM dims " + to_string(w.dims()) +
                        " do not match instance dims " + to_string(inst.dims()));
  }
  const int n = inst.side();
  CertifiedBound out;
  out.direction = BoundDirection::LowerOnGlobal;
  double worst = 0.0;
  for (const auto& e : w.elements()) {
    worst = std::max({worst, detail::psd_violation(e.matrix()),
                      hermiticity_residual(e.matrix())});
  }
  const CMatrix sum = w[0].matrix() + w[1].matrix();
  worst = std::max(worst, (sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff());
  out.worst_violation = worst;
  out.valid = worst <= tol_cert;
  out.value = inst.p0 * (inst.rho0.matrix() * w[0].matrix()).trace().real() +
              inst.p1 * (inst.rho1.matrix() * w[1].matrix()).trace().real();
  return out;
}

inline Povm helstrom_povm(const DiscriminationInstance& inst) {
  const HelstromMeasurement h = helstrom_projectors(inst);
  return Povm({h.m_plus, h.m_minus});
}

/// Upper certificate on the assisted PPT value at level k against a lower
/// certificate on the unrestricted value. A proven gap also rules out LOCC
/// with the same resource, since LOCC is contained in PPT.
inline GapReport certified_gap(const DiscriminationInstance& inst, int k,
                               double margin = 1e-4, const SolverConfig& cfg = {}) {
  GapReport g;
  g.margin = margin;
  const DualReport dual = ea_psuc_dual(inst, k, cfg);
  const double tol_cert = 100 * cfg.tol_feas;
  g.upper = verify_dual(dual.certificate, inst, tol_cert);
  g.lower = verify_primal_global(helstrom_povm(inst), inst, tol_cert);
  g.gap_proven = g.upper.valid && g.lower.valid && g.lower.value - g.upper.value > margin;
  return g;
}

}  // namespace pptcost
