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

#include "pptcost/cost.hpp"
#include "pptcost/ensembles.hpp"
#include "support.hpp"

using namespace pptcost;
using pptcost::testing::random_instance;

namespace {

constexpr double kTol = 1e-6;

void expect_sandwich(const DiscriminationInstance& inst, const CostOptions& opt = {}) {
  const HierarchyReport h = cost_hierarchy(inst, opt);
  const BoundsReport b = cost_bounds(inst, opt);
  ASSERT_TRUE(h.k_min);
  EXPECT_LE(b.eta_l_ebits, h.ebits + kTol);
  EXPECT_LE(h.ebits, b.spectral_bound_ebits + kTol);
  EXPECT_LE(h.ebits, b.rank_bound_ebits + kTol);
  if (b.eta_u) {
    EXPECT_LE(h.ebits, *b.eta_u_ebits + kTol);
    EXPECT_LE(b.eta_l, *b.eta_u + kTol);
  }
  EXPECT_LE(b.distance_lower_ebits, h.ebits + kTol);
}

}  // namespace

TEST(snapped_ceil, snaps_near_integers) {
  EXPECT_EQ(snapped_ceil(2.0), 2.0);
  EXPECT_EQ(snapped_ceil(2.0 + 1e-9), 2.0);
  EXPECT_EQ(snapped_ceil(2.0 - 1e-9), 2.0);
  EXPECT_EQ(snapped_ceil(2.01), 3.0);
  EXPECT_EQ(snapped_ceil(0.3), 1.0);
  EXPECT_EQ(snapped_ceil(0.0), 1.0);
}

TEST(rank_bound, formula) {
  for (int r : {1, 2, 3}) {
    const auto inst = random_instance({2, 3}, 31, r, r, 0);
    EXPECT_EQ(rank_bound(inst), std::max(2 * r - 1, r + 1));
  }
  EXPECT_EQ(rank_bound(qutrit_pair()), 3);
}

TEST(deviation, identical_states) {
  const auto rho = random_density({2, 2, 0, 32, 1});
  const DiscriminationInstance same(rho, rho);
  for (int k = 1; k <= 3; ++k) EXPECT_LE(deviation(same, k), kTol);
}

TEST(deviation, qutrit_pair_levels) {
  const auto q = qutrit_pair();
  EXPECT_GT(deviation(q, 1), 8e-4);
  EXPECT_GE(deviation(q, 2), 0.9135 - 0.9125 - 2e-3);
  EXPECT_GT(deviation(q, 2), 1e-3);
  EXPECT_LE(deviation(q, 3), CostOptions{}.eps_zero);
}

TEST(deviation, twice_the_success_gap) {
  const auto inst = random_instance({2, 2}, 33, 0, 1, 0);
  const double gap = helstrom_value(inst).value - ea_psuc_reduced(inst, 1).value;
  EXPECT_NEAR(deviation(inst, 1), 2.0 * gap, 1e-6);
}

TEST(deviation, zero_at_rank_bound) {
  for (int i = 0; i < 4; ++i) {
    const auto inst = random_instance(i % 2 ? Dims{2, 3} : Dims{2, 2}, 34, i, 1 + i % 2, 0);
    EXPECT_LE(deviation(inst, rank_bound(inst)), CostOptions{}.eps_zero);
  }
}

TEST(deviation, rejects_unequal_priors) {
  const auto inst = random_instance({2, 2}, 35, 0);
  const DiscriminationInstance skewed(inst.rho0, inst.rho1, 0.6);
  EXPECT_THROW(deviation(skewed, 1), InvalidInput);
  EXPECT_THROW(cost_hierarchy(skewed), InvalidInput);
  EXPECT_THROW(cost_bounds(skewed), InvalidInput);
}

TEST(cost_hierarchy, identical_states) {
  const auto rho = random_density({2, 2, 0, 36, 1});
  const HierarchyReport h = cost_hierarchy(DiscriminationInstance(rho, rho));
  ASSERT_TRUE(h.k_min);
  EXPECT_EQ(*h.k_min, 1);
  EXPECT_EQ(h.ebits, 0.0);
}

TEST(cost_hierarchy, qutrit_pair) {
  const HierarchyReport h = cost_hierarchy(qutrit_pair());
  ASSERT_TRUE(h.k_min);
  EXPECT_EQ(*h.k_min, 3);
  EXPECT_NEAR(h.ebits, std::log2(3.0), 1e-12);
  EXPECT_EQ(h.eta, 3);
  ASSERT_EQ(h.deviations.size(), 3u);
  EXPECT_GE(h.deviations[0].second, h.deviations[1].second - 2e-8);
}

TEST(cost_hierarchy, early_exit_and_parallel_agree) {
  const auto inst = random_instance({2, 2}, 37, 0, 2, 0);
  CostOptions seq, early, par;
  early.early_exit = true;
  par.parallelism = 3;
  const HierarchyReport a = cost_hierarchy(inst, seq);
  const HierarchyReport b = cost_hierarchy(inst, early);
  const HierarchyReport c = cost_hierarchy(inst, par);
  EXPECT_EQ(a.k_min, b.k_min);
  EXPECT_EQ(a.k_min, c.k_min);
  EXPECT_LE(b.deviations.size(), a.deviations.size());
  ASSERT_EQ(a.deviations.size(), c.deviations.size());
  for (std::size_t i = 0; i < a.deviations.size(); ++i) {
    EXPECT_EQ(a.deviations[i].second, c.deviations[i].second);
  }
}

TEST(cost_hierarchy, pure_state_costs_at_most_one_ebit) {
  for (int i = 0; i < 3; ++i) {
    const auto inst = random_instance(i == 2 ? Dims{3, 3} : Dims{2, 2}, 38, i, 1, 0);
    const HierarchyReport h = cost_hierarchy(inst);
    ASSERT_TRUE(h.k_min);
    EXPECT_LE(h.ebits, 1.0 + kTol);
  }
  for (int d : {2, 3}) {
    const HierarchyReport h = cost_hierarchy(pure_vs_complement(d));
    ASSERT_TRUE(h.k_min);
    EXPECT_LE(h.ebits, 1.0 + kTol);
  }
}

TEST(cost_hierarchy, orthogonal_pairs_bounded_by_total_dimension) {
  for (int r0 : {1, 2}) {
    for (int i = 0; i < 2; ++i) {
      const HierarchyReport h = cost_hierarchy(orthogonal_mixed_pair(2, r0, 39, i));
      ASSERT_TRUE(h.k_min);
      EXPECT_LE(h.ebits, std::log2(2.0 * 2.0 - 1.0) + kTol);
    }
  }
}

TEST(cost_hierarchy, swap_symmetry) {
  const auto inst = random_instance({2, 2}, 40, 0, 1, 2);
  const HierarchyReport a = cost_hierarchy(inst), b = cost_hierarchy(inst.swapped());
  EXPECT_EQ(a.k_min, b.k_min);
  for (std::size_t i = 0; i < std::min(a.deviations.size(), b.deviations.size()); ++i) {
    EXPECT_NEAR(a.deviations[i].second, b.deviations[i].second, 1e-6);
  }
}

TEST(spectral_upper_bound, examples) {
  CVector zero = CVector::Zero(4);
  zero(0) = 1.0;
  EXPECT_NEAR(spectral_upper_bound(pure_vs_complement(2, zero)), 0.0, 1e-12);
  EXPECT_EQ(*cost_hierarchy(pure_vs_complement(2, zero)).k_min, 1);
  const auto q = qutrit_pair();
  EXPECT_NEAR(helstrom_pt_norm(q), 2.1094, 1e-4);
  EXPECT_NEAR(spectral_upper_bound(q), std::log2(3.0), 1e-12);
  for (int i = 0; i < 3; ++i) {
    const auto inst = random_instance({3, 3}, 41, i, 1, 0);
    const HelstromMeasurement h = helstrom_projectors(inst);
    if (numerical_rank(h.m_plus, 1e-9) == 1) {
      EXPECT_LE(spectral_upper_bound(inst), 1.0 + kTol);
    }
  }
}

TEST(cost_bounds, identical_states) {
  const auto rho = random_density({2, 2, 0, 42, 1});
  const BoundsReport b = cost_bounds(DiscriminationInstance(rho, rho));
  EXPECT_LE(snapped_ceil(b.eta_l), 1.0);
  ASSERT_TRUE(b.eta_u);
  EXPECT_LE(*b.eta_u, 1.0 + kTol);
  EXPECT_NEAR(b.distance_lower_ebits, 0.0, kTol);
}

TEST(cost_bounds, orthogonal_product_states) {
  CVector a = CVector::Zero(4), c = CVector::Zero(4);
  a(0) = 1.0;
  c(3) = 1.0;
  const DiscriminationInstance inst(pure_state(a, {2, 2}), pure_state(c, {2, 2}));
  EXPECT_NEAR(distance_lower_bound(inst), 0.0, kTol);
  EXPECT_EQ(*cost_hierarchy(inst).k_min, 1);
}

TEST(cost_bounds, qutrit_pair) {
  const BoundsReport b = cost_bounds(qutrit_pair());
  EXPECT_EQ(b.rank_eta, 3);
  EXPECT_NEAR(b.eta_l, 1.5547, 1e-3);
  ASSERT_TRUE(b.eta_u);
  EXPECT_NEAR(*b.eta_u, 3.1094, 1e-3);
  EXPECT_EQ(b.eta_u_status, "optimal");
  EXPECT_NEAR(b.distance_r, 0.5547, 1e-3);
  EXPECT_EQ(b.eps_eq, 0.0);
}

TEST(cost_bounds, sandwich_on_random_instances) {
  for (int i = 0; i < 3; ++i) {
    expect_sandwich(random_instance({2, 2}, 43, i, 1 + i % 3, 0));
  }
  expect_sandwich(random_instance({2, 3}, 43, 9, 2, 0));
  expect_sandwich(qutrit_pair());
}

TEST(cost_bounds, face_and_band_agree) {
  const auto inst = random_instance({2, 2}, 44, 0, 2, 0);
  CostOptions face, band;
  band.optimality = OptimalityMode::Band;
  const BoundsReport f = cost_bounds(inst, face), b = cost_bounds(inst, band);
  EXPECT_EQ(b.eps_eq, band.eps_eq);
  EXPECT_NEAR(f.eta_l, b.eta_l, 1e-3);
  EXPECT_NEAR(f.distance_r, b.distance_r, 1e-3);
  EXPECT_EQ(f.eta_l_ebits, b.eta_l_ebits);
}
