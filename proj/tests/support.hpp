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

// Small helpers shared by the test binaries.

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pptcost/ensembles.hpp"
#include "pptcost/qmat.hpp"

namespace pptcost::testing {

inline CMatrix random_hermitian(int n, Rng& rng) {
  return hermitian_part(ginibre(n, n, rng));
}

/// Two full-rank Hilbert-Schmidt states on d with equal priors.
inline DiscriminationInstance random_instance(Dims d, std::uint64_t seed, int index,
                                              int rank0 = 0, int rank1 = 0) {
  Rng rng(seed, static_cast<std::uint64_t>(index));
  const std::uint64_t s0 = rng.engine()(), s1 = rng.engine()();
  return DiscriminationInstance(random_density({d.a, d.b, rank0, s0, 1}),
                                random_density({d.a, d.b, rank1, s1, 1}));
}

/// U_A (x) U_B with independent Haar factors.
inline CMatrix local_unitary(Dims d, Rng& rng) {
  return kron_plain(haar_unitary(d.a, rng), haar_unitary(d.b, rng));
}

inline Povm conjugate(const CMatrix& u, const Povm& m) {
  std::vector<BipartiteOperator> el;
  for (const auto& e : m.elements()) el.push_back(pptcost::conjugate(u, e));
  Tolerances t;
  t.herm = t.psd = t.trace = 1e-7;
  return Povm(std::move(el), t);
}

inline DiscriminationInstance conjugate(const CMatrix& u, const DiscriminationInstance& i) {
  Tolerances t;
  t.herm = t.psd = t.trace = 1e-7;
  auto state = [&](const DensityMatrix& r) {
    return DensityMatrix(BipartiteOperator(hermitian_part(u * r.matrix() * u.adjoint()),
                                           r.dims()),
                         t);
  };
  return DiscriminationInstance(state(i.rho0), state(i.rho1), i.p0);
}

inline Povm bell_povm() {
  const CMatrix phi = max_entangled(2).matrix();
  return Povm({BipartiteOperator(phi, {2, 2}),
               BipartiteOperator(CMatrix::Identity(4, 4) - phi, {2, 2})});
}

inline Povm mix(double alpha, const Povm& x, const Povm& y) {
  std::vector<BipartiteOperator> el;
  for (std::size_t j = 0; j < x.size(); ++j) {
    el.emplace_back(CMatrix(alpha * x[j].matrix() + (1.0 - alpha) * y[j].matrix()),
                    x.dims());
  }
  return Povm(std::move(el));
}

inline Povm tensor(const Povm& x, const Povm& y) {
  std::vector<BipartiteOperator> el;
  for (const auto& a : x.elements())
    for (const auto& b : y.elements()) el.push_back(kron(a, b));
  Tolerances t;
  t.herm = t.psd = t.trace = 1e-8;
  return Povm(std::move(el), t);
}

// Random binary POVMs on 2 (x) 2 are mostly PPT already; mixing in a rotated
// Bell projector keeps the distances away from zero.
inline Povm entangled_povm(Rng& rng) {
  const CMatrix u = local_unitary({2, 2}, rng);
  const Povm bell = conjugate(u, bell_povm());
  return mix(0.6 + 0.4 * rng.uniform(), bell, random_binary_povm({2, 2}, rng));
}

inline double max_pt_norm(const Povm& m) {
  double out = 0.0;
  for (const auto& e : m.elements())
    out = std::max(out, spectral_norm(partial_transpose(e.matrix(), e.dims())));
  return out;
}

}  // namespace pptcost::testing
