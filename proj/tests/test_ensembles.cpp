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

#include <gtest/gtest.h>

#include <cmath>

#include "pptcost/discrimination.hpp"
#include "pptcost/ensembles.hpp"

using namespace pptcost;

TEST(rng, deterministic_per_seed_and_index) {
  Rng a(5, 3), b(5, 3), c(5, 4), e(6, 3);
  const double x = a.uniform();
  EXPECT_EQ(x, b.uniform());
  EXPECT_NE(x, c.uniform());
  EXPECT_NE(x, e.uniform());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const int k = a.uniform_int(2, 4);
    EXPECT_GE(k, 2);
    EXPECT_LE(k, 4);
  }
}

TEST(random_density, bit_identical_for_identical_spec) {
  const SampleSpec spec{2, 3, 2, 99, 3};
  const auto a = random_densities(spec), b = random_densities(spec);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].matrix(), b[i].matrix());
  EXPECT_NE(a[0].matrix(), a[1].matrix());
}

TEST(random_density, rank_and_purity) {
  const auto pure = random_density({2, 2, 1, 1, 1});
  EXPECT_NEAR((pure.matrix() * pure.matrix()).trace().real(), 1.0, 1e-12);
  for (int r = 1; r <= 6; ++r) {
    const auto rho = random_density({2, 3, r, 2, 1});
    EXPECT_EQ(numerical_rank(rho.matrix(), 1e-9), r);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(rho.matrix()), -1e-12);
  }
  EXPECT_EQ(numerical_rank(random_density({2, 2, 0, 3, 1}).matrix(), 1e-9), 4);
}

TEST(random_density, rejects_bad_spec) {
  EXPECT_THROW(random_density({0, 2, 0, 1, 1}), InvalidInput);
  EXPECT_THROW(random_density({2, 2, 5, 1, 1}), InvalidInput);
  EXPECT_THROW(random_density({2, 2, -1, 1, 1}), InvalidInput);
}

TEST(random_density, mean_is_maximally_mixed) {
  const SampleSpec spec{2, 2, 0, 2024, 10000};
  CMatrix mean = CMatrix::Zero(4, 4);
  for (int i = 0; i < spec.count; ++i) mean += random_density(spec, i).matrix();
  mean /= double(spec.count);
  EXPECT_LE(spectral_norm(CMatrix(mean - 0.25 * CMatrix::Identity(4, 4))), 0.02);
}

TEST(haar_unitary, unitary_and_uniform) {
  Rng rng(8, 0);
  double m = 0.0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const CMatrix u = haar_unitary(3, rng);
    if (t < 10) {
      EXPECT_LT((u.adjoint() * u - CMatrix::Identity(3, 3)).norm(), 1e-12);
    }
    m += std::norm(u(0, 0));
  }
  EXPECT_NEAR(m / trials, 1.0 / 3.0, 0.02);
}

TEST(qutrit_pair, fixture) {
  const auto rho = qutrit_rho();
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_EQ(numerical_rank(rho.matrix(), 1e-9), 2);
  const double a0 = std::sqrt(5.0) / 5.0, a1 = 3.0 * std::sqrt(5.0) / 10.0,
               a2 = 0.5 * std::sqrt(7.0 / 5.0);
  EXPECT_NEAR(a0 * a0 + a1 * a1 + a2 * a2, 1.0, 1e-12);

  const CMatrix printed = qutrit_sigma_printed();
  const CMatrix sigma = qutrit_sigma().matrix();
  EXPECT_EQ(hermiticity_residual(sigma), 0.0);
  EXPECT_GE(min_eigenvalue(sigma), -1e-12);
  EXPECT_NEAR(sigma.trace().real(), 1.0, 1e-12);
  EXPECT_GE(min_eigenvalue(hermitian_part(printed)), -1e-3);
  EXPECT_NEAR(printed.trace().real(), 1.0, 1e-3);
  EXPECT_LE((sigma - printed).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_EQ(qutrit_pair().p0, 0.5);
}

TEST(pure_vs_complement, orthogonal_and_perfectly_distinguishable) {
  for (int d : {2, 3}) {
    const auto inst = pure_vs_complement(d);
    EXPECT_NEAR((inst.rho0.matrix() * inst.rho1.matrix()).trace().real(), 0.0, 1e-14);
    EXPECT_NEAR(helstrom_value(inst).value, 1.0, 1e-12);
    EXPECT_EQ(numerical_rank(inst.rho1.matrix(), 1e-9), d * d - 1);
  }
  CVector v = CVector::Zero(4);
  v(1) = 2.0;
  const auto inst = pure_vs_complement(2, v);
  EXPECT_NEAR(inst.rho0.matrix()(1, 1).real(), 1.0, 1e-14);
  EXPECT_THROW(pure_vs_complement(2, CVector::Zero(3)), ShapeMismatch);
  EXPECT_THROW(pure_vs_complement(1), InvalidInput);
}

TEST(orthogonal_mixed_pair, supports_are_orthogonal) {
  for (int r0 : {1, 2, 4}) {
    const auto inst = orthogonal_mixed_pair(3, r0, 11, r0);
    EXPECT_NEAR((inst.rho0.matrix() * inst.rho1.matrix()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    EXPECT_NEAR(helstrom_value(inst).value, 1.0, 1e-10);
    EXPECT_EQ(numerical_rank(inst.rho0.matrix(), 1e-9), r0);
    EXPECT_EQ(numerical_rank(inst.rho1.matrix(), 1e-9), 9 - r0);
  }
  EXPECT_THROW(orthogonal_mixed_pair(2, 3, 1), InvalidInput);
  EXPECT_THROW(orthogonal_mixed_pair(3, 0, 1), InvalidInput);
}

TEST(random_povms, are_valid) {
  Rng rng(12, 0);
  for (int i = 0; i < 5; ++i) {
    const Povm m = random_binary_povm({2, 3}, rng);
    EXPECT_EQ(m.size(), 2u);
    const Povm p = random_ppt_povm({2, 3}, rng);
    for (const auto& e : p.elements()) {
      EXPECT_GE(min_eigenvalue(partial_transpose(e.matrix(), {2, 3})), -1e-12);
    }
  }
}

TEST(sweep_instance, ranks_and_determinism) {
  for (int i = 0; i < 4; ++i) {
    const auto a = sweep_instance(3, 2, 7, i), b = sweep_instance(3, 2, 7, i);
    EXPECT_EQ(a.rho0.matrix(), b.rho0.matrix());
    EXPECT_EQ(a.rho1.matrix(), b.rho1.matrix());
    EXPECT_EQ(numerical_rank(a.rho0.matrix(), 1e-9), 2);
    const int r1 = numerical_rank(a.rho1.matrix(), 1e-9);
    EXPECT_GE(r1, 2);
    EXPECT_LE(r1, 9);
  }
}
