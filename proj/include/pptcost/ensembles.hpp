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

// Fixtures and seeded random ensembles.
//
// Generator: std::mt19937_64 seeded with splitmix64(seed ^ index). Uniforms
// are (x >> 11) * 2^-53 and normals come from Box-Muller on two uniforms, so
// the streams do not depend on the standard library's distributions.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "pptcost/errors.hpp"
#include "pptcost/qmat.hpp"

namespace pptcost {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t index = 0)
      : engine_(splitmix64(seed ^ splitmix64(index))) {}

  /// Uniform on [0, 1).
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(th);
    cached_ = true;
    return rad * std::cos(th);
  }

  /// Standard complex Gaussian with E|z|^2 = 1.
  cplx complex_normal() {
    const double re = normal(), im = normal();
    return cplx(re, im) * std::sqrt(0.5);
  }

  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool cached_ = false;
  double spare_ = 0.0;
};

struct SampleSpec {
  int dA = 2;
  int dB = 2;
  int rank = 0;  // 0 means full rank
  std::uint64_t seed = 0;
  int count = 1;

  int effective_rank() const { return rank == 0 ? dA * dB : rank; }
  void validate() const {
    if (dA < 1 || dB < 1 || count < 0) throw InvalidInput("bad sample dims");
    if (rank < 0 || rank > dA * dB) {
      throw InvalidInput("rank must lie in [1, dA*dB] (0 for full)");
    }
  }
};

inline CMatrix ginibre(int rows, int cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
inline CMatrix haar_unitary(int n, Rng& rng) {
  const CMatrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0);
  }
  return q;
}

inline CVector random_pure_vector(int n, Rng& rng) {
  CVector v = ginibre(n, 1, rng);
  return v / v.norm();
}

inline DensityMatrix pure_state(const CVector& v, Dims d) {
  const CVector u = v / v.norm();
  return DensityMatrix(BipartiteOperator(hermitian_part(u * u.adjoint()), d));
}

/// Hilbert-Schmidt random state of the given rank; sample `index` of spec.
inline DensityMatrix random_density(const SampleSpec& spec, int index = 0) {
  spec.validate();
  Rng rng(spec.seed, static_cast<std::uint64_t>(index));
  const int n = spec.dA * spec.dB;
  const CMatrix g = ginibre(n, spec.effective_rank(), rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(BipartiteOperator(hermitian_part(rho), {spec.dA, spec.dB}));
}

inline std::vector<DensityMatrix> random_densities(const SampleSpec& spec) {
  std::vector<DensityMatrix> out;
  for (int i = 0; i < spec.count; ++i) out.push_back(random_density(spec, i));
  return out;
}

/// The two-qutrit state sigma, as 4-decimal entries.
inline CMatrix qutrit_sigma_printed() {
  static const double v[9][9] = {
      {0.0601, 0.0327, -0.0601, -0.0068, -0.0024, -0.0040, -0.0665, -0.0261, -0.0286},
      {0.0327, 0.0990, -0.0789, 0.0068, -0.0522, -0.0660, -0.0272, 0.0309, -0.0397},
      {-0.0601, -0.0789, 0.1812, -0.0067, 0.0497, 0.0254, 0.0548, 0.0620, 0.0628},
      {-0.0068, 0.0068, -0.0067, 0.0141, 0.0108, -0.0137, 0.0229, 0.0277, 0.0164},
      {-0.0024, -0.0522, 0.0497, 0.0108, 0.1078, -0.0278, -0.0031, -0.0218, 0.0075},
      {-0.0040, -0.0660, 0.0254, -0.0137, -0.0278, 0.1253, 0.0173, -0.0002, 0.0593},
      {-0.0665, -0.0272, 0.0548, 0.0229, -0.0031, 0.0173, 0.1195, 0.0973, 0.0587},
      {-0.0261, 0.0309, 0.0620, 0.0277, -0.0218, -0.0002, 0.0973, 0.1906, 0.0840},
      {-0.0286, -0.0397, 0.0628, 0.0164, 0.0075, 0.0593, 0.0587, 0.0840, 0.1025}};
  CMatrix m(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) m(i, j) = v[i][j];
  return m;
}

/// Symmetrizes, clips negative eigenvalues, and renormalizes the trace.
inline CMatrix repair_state(const CMatrix& m) {
  const EigenDecomposition ed = eig_herm(hermitian_part(m), 1.0);
  const RVector lam = ed.values.cwiseMax(0.0);
  CMatrix out = ed.vectors * lam.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
  out = hermitian_part(out);
  return out / out.trace().real();
}

inline DensityMatrix qutrit_rho() {
  const double a0 = std::sqrt(5.0) / 5.0;
  const double a1 = 3.0 * std::sqrt(5.0) / 10.0;
  const double a2 = 0.5 * std::sqrt(7.0 / 5.0);
  auto ket = [](int i, int j) {
    CVector v = CVector::Zero(9);
    v(3 * i + j) = 1.0;
    return v;
  };
  const CVector psi0 = a0 * ket(0, 1) + a1 * ket(0, 2) + a2 * ket(2, 0);
  const CVector psi1 = a0 * ket(1, 0) + a1 * ket(2, 1) + a2 * ket(1, 2);
  CMatrix rho = 0.2 * psi0 * psi0.adjoint() + 0.8 * psi1 * psi1.adjoint();
  rho = hermitian_part(rho);
  rho /= rho.trace().real();
  return DensityMatrix(BipartiteOperator(rho, {3, 3}));
}

inline DensityMatrix qutrit_sigma() {
  return DensityMatrix(BipartiteOperator(repair_state(qutrit_sigma_printed()), {3, 3}));
}

/// Two-qutrit data-hiding pair (rho, sigma) with equal priors.
inline DiscriminationInstance qutrit_pair() {
  return DiscriminationInstance(qutrit_rho(), qutrit_sigma(), 0.5);
}

/// A pure state against the normalized projector onto its complement.
inline DiscriminationInstance pure_vs_complement(
    int d, const std::optional<CVector>& state = std::nullopt) {
  if (d < 2) throw InvalidInput("pure_vs_complement needs d >= 2");
  const int n = d * d;
  CVector psi;
  if (state) {
    if (state->size() != n) throw ShapeMismatch("state vector must have d*d entries");
    psi = *state / state->norm();
  } else {
    psi = CVector::Zero(n);
    for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(double(d));
  }
  const CMatrix proj = psi * psi.adjoint();
  const CMatrix comp =
      hermitian_part(CMatrix::Identity(n, n) - proj) / double(n - 1);
  return DiscriminationInstance(pure_state(psi, {d, d}),
                                DensityMatrix(BipartiteOperator(comp, {d, d})));
}

/// Random states on d (x) d with orthogonal supports: rho0 has rank r0 and
/// rho1 lives on the orthogonal complement of a Haar-random r0-dimensional
/// subspace with rank d^2 - r0.
inline DiscriminationInstance orthogonal_mixed_pair(int d, int r0,
                                                    std::uint64_t seed,
                                                    int index = 0) {
  const int n = d * d;
  if (d < 2 || r0 < 1 || 2 * r0 > n) {
    throw InvalidInput("orthogonal_mixed_pair needs d >= 2 and 1 <= r0 <= d^2/2");
  }
  Rng rng(seed, static_cast<std::uint64_t>(index));
  const CMatrix u = haar_unitary(n, rng);
  const CMatrix b0 = u.leftCols(r0);
  const CMatrix b1 = u.rightCols(n - r0);
  auto mixed = [&](const CMatrix& basis) {
    const CMatrix g = ginibre(static_cast<int>(basis.cols()),
                              static_cast<int>(basis.cols()), rng);
    CMatrix s = basis * (g * g.adjoint()) * basis.adjoint();
    s = hermitian_part(s);
    return DensityMatrix(BipartiteOperator(s / s.trace().real(), {d, d}));
  };
  DensityMatrix rho0 = mixed(b0);
  DensityMatrix rho1 = mixed(b1);
  return DiscriminationInstance(std::move(rho0), std::move(rho1));
}

/// Binary POVM {U diag(u) U^dagger, I - ...} with u uniform in [0,1].
inline Povm random_binary_povm(Dims d, Rng& rng) {
  const int n = d.total();
  const CMatrix u = haar_unitary(n, rng);
  RVector lam(n);
  for (int i = 0; i < n; ++i) lam(i) = rng.uniform();
  const CMatrix m0 = hermitian_part(u * lam.cast<cplx>().asDiagonal() * u.adjoint());
  const CMatrix m1 = hermitian_part(CMatrix::Identity(n, n) - m0);
  return Povm({BipartiteOperator(m0, d), BipartiteOperator(m1, d)});
}

/// Binary PPT POVM P (x) Q + (I-P) (x) (I-Q) with random local projectors.
inline Povm random_ppt_povm(Dims d, Rng& rng) {
  auto projector = [&](int m) {
    const CMatrix u = haar_unitary(m, rng);
    const int r = rng.uniform_int(1, std::max(1, m - 1));
    const CMatrix v = u.leftCols(r);
    return CMatrix(v * v.adjoint());
  };
  const CMatrix p = projector(d.a), q = projector(d.b);
  const CMatrix ia = CMatrix::Identity(d.a, d.a), ib = CMatrix::Identity(d.b, d.b);
  const CMatrix m0 =
      hermitian_part(kron_plain(p, q) + kron_plain(ia - p, ib - q));
  const CMatrix m1 = hermitian_part(CMatrix::Identity(d.total(), d.total()) - m0);
  return Povm({BipartiteOperator(m0, d), BipartiteOperator(m1, d)});
}

/// Instance `index` of the random sweep: rho of rank `rank0` against sigma of
/// rank uniform in [rank0, d^2], both on d (x) d.
inline DiscriminationInstance sweep_instance(int d, int rank0, std::uint64_t seed,
                                             int index) {
  const int n = d * d;
  Rng rng(seed, static_cast<std::uint64_t>(index));
  const int rank1 = rng.uniform_int(rank0, n);
  const std::uint64_t s0 = rng.engine()();
  const std::uint64_t s1 = rng.engine()();
  DensityMatrix rho0 = random_density({d, d, rank0, s0, 1});
  DensityMatrix rho1 = random_density({d, d, rank1, s1, 1});
  return DiscriminationInstance(std::move(rho0), std::move(rho1));
}

}  // namespace pptcost
