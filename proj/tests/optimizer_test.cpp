#include "secache/optimizer.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace secache {
namespace {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double marginal(double q, double p, const DerivedConstants& k) {
  const double d = k.tau1 * p + k.tau2;
  return q * k.tau2 / (d * d);
}

FileCatalog random_catalog(std::mt19937_64& rng, int F, int C) {
  std::uniform_real_distribution<double> beta(0.0, 2.0);
  std::uniform_real_distribution<double> eps(0.0, 0.9);
  std::vector<double> e(static_cast<std::size_t>(F));
  for (double& v : e) v = eps(rng);
  return make_catalog(F, beta(rng), std::move(e), C);
}

void expect_kkt(const OcpSolution& sol, const FileCatalog& cat, const NetworkParams& prm) {
  const auto k = derive_constants(prm, prm.gamma_user);
  const auto q = cat.popularity();
  const auto p = sol.policy.probabilities();
  EXPECT_NEAR(sum(p), std::min<double>(cat.cache_size(), sum(sol.caps)), 1e-8);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = marginal(q[i], p[i], k);
    switch (sol.active_set[i]) {
      case FileStatus::kInterior:
        EXPECT_GT(p[i], 0.0);
        EXPECT_LT(p[i], sol.caps[i]);
        EXPECT_NEAR(m, sol.dual, 1e-6);
        break;
      case FileStatus::kCapped:
        EXPECT_EQ(p[i], sol.caps[i]);
        EXPECT_GE(m, sol.dual - 1e-6);
        break;
      case FileStatus::kZero:
        EXPECT_EQ(p[i], 0.0);
        EXPECT_LE(q[i] / k.tau2, sol.dual + 1e-6);
        break;
    }
  }
}

TEST(Ocp, SymmetricInstanceSplitsEvenly) {
  const auto prm = NetworkParams::defaults();
  const auto cat = make_catalog(5, 0.0, {0.0, 0.0, 0.0, 0.0, 0.0}, 2);
  const auto sol = solve_ocp(cat, prm);
  for (double p : sol.policy.probabilities()) EXPECT_NEAR(p, 0.4, 1e-9);
  for (auto s : sol.active_set) EXPECT_EQ(s, FileStatus::kInterior);
}

TEST(Ocp, CapsBelowBudgetAreTakenWhole) {
  const auto prm = NetworkParams::defaults();
  const auto cat = make_catalog(6, 0.7, {0.97, 0.98, 0.95, 0.99, 0.96, 0.985}, 5);
  const auto caps = placement_caps(cat, prm);
  ASSERT_LE(sum(caps), 5.0);
  const auto sol = solve_ocp(cat, prm);
  EXPECT_EQ(sol.dual, 0.0);
  for (std::size_t i = 0; i < caps.size(); ++i) EXPECT_EQ(sol.policy[i], caps[i]);
}

TEST(Ocp, FourFileInstanceMatchesGridSearch) {
  const auto prm = NetworkParams::defaults();
  const auto cat = make_catalog(4, 0.7, {0.1, 0.6, 0.3, 0.8}, 2);
  const auto sol = solve_ocp(cat, prm);
  const auto k = derive_constants(prm, prm.gamma_user);
  const double grid = oracle::grid_search_max(cat.popularity(), sol.caps, 2.0, k.tau1, k.tau2, 0.005);
  EXPECT_NEAR(sol.objective, grid, 1e-4);
  EXPECT_GE(sol.objective, grid - 1e-12);
  EXPECT_NEAR(sol.policy.total(), 2.0, 1e-9);
  EXPECT_NEAR(sol.objective,
              oracle::hit_objective(sol.policy.probabilities(), cat.popularity(), k.tau1, k.tau2), 1e-15);
  expect_kkt(sol, cat, prm);
}

TEST(Ocp, KktHoldsOnRandomInstances) {
  const auto prm = NetworkParams::defaults();
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> files(2, 40);
  for (int t = 0; t < 200; ++t) {
    const int F = files(rng);
    std::uniform_int_distribution<int> cache(1, F - 1);
    const auto cat = random_catalog(rng, F, cache(rng));
    expect_kkt(solve_ocp(cat, prm), cat, prm);
  }
}

TEST(Ocp, DominatesBaselines) {
  const auto prm = NetworkParams::defaults();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> files(2, 30);
  for (int t = 0; t < 150; ++t) {
    const int F = files(rng);
    std::uniform_int_distribution<int> cache(1, F - 1);
    const auto cat = random_catalog(rng, F, cache(rng));
    const auto sol = solve_ocp(cat, prm);
    EXPECT_GE(sol.objective, hit_probability(mpc_placement(cat, prm), cat, prm) - 1e-12);
    EXPECT_GE(sol.objective, hit_probability(lcc_placement(cat, prm), cat, prm) - 1e-12);
  }
}

TEST(Ocp, SatisfiesSecrecyConstraints) {
  const auto prm = NetworkParams::defaults();
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const auto cat = random_catalog(rng, 12, 4);
    const auto sol = solve_ocp(cat, prm);
    for (int i = 0; i < 12; ++i) {
      EXPECT_GE(secrecy_probability_lower_bound(sol.policy[i], prm), cat.secrecy_levels()[i] - 1e-9);
    }
  }
}

TEST(Ocp, PermutationEquivariant) {
  const auto prm = NetworkParams::defaults();
  // β = 0 so popularity does not depend on the index and a relabelling is a pure permutation.
  const std::vector<double> eps{0.1, 0.7, 0.45, 0.3, 0.85, 0.6};
  std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
  std::vector<double> permuted(eps.size());
  for (std::size_t i = 0; i < perm.size(); ++i) permuted[i] = eps[perm[i]];
  const auto a = solve_ocp(make_catalog(6, 0.0, eps, 2), prm);
  const auto b = solve_ocp(make_catalog(6, 0.0, permuted, 2), prm);
  for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_NEAR(b.policy[i], a.policy[perm[i]], 1e-12);
  EXPECT_NEAR(a.objective, b.objective, 1e-14);
}

TEST(Dual, BudgetFunctionIsMonotone) {
  const auto prm = NetworkParams::defaults();
  const auto k = derive_constants(prm, prm.gamma_user);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto cat = random_catalog(rng, 15, 5);
    const auto caps = placement_caps(cat, prm);
    const auto q = cat.popularity();
    double hi = 0.0;
    for (double v : q) hi = std::max(hi, v / k.tau2);
    EXPECT_EQ(placement_budget(hi, q, caps, k), 0.0);
    double prev = sum(caps);
    for (double nu = hi * 1e-4; nu <= hi; nu *= 1.3) {
      const double g = placement_budget(nu, q, caps, k);
      EXPECT_LE(g, prev + 1e-15);
      prev = g;
    }
  }
}

TEST(Dual, BisectionHitsBudget) {
  const auto prm = NetworkParams::defaults();
  const auto cat = make_catalog(4, 0.7, {0.1, 0.6, 0.3, 0.8}, 2);
  const auto caps = placement_caps(cat, prm);
  const double nu = dual_bisection(cat, prm, caps);
  const auto k = derive_constants(prm, prm.gamma_user);
  EXPECT_NEAR(placement_budget(nu, cat.popularity(), caps, k), 2.0, 1e-9);
}

TEST(Dual, RejectsFeasibleCaps) {
  const auto prm = NetworkParams::defaults();
  const auto cat = make_catalog(4, 0.7, {0.1, 0.6, 0.3, 0.8}, 2);
  const std::vector<double> small{0.5, 0.5, 0.5, 0.5};
  EXPECT_THROW(dual_bisection(cat, prm, small), std::logic_error);
  EXPECT_EQ(stationary_placement(0.3, 0.0, derive_constants(prm, prm.gamma_user)),
            std::numeric_limits<double>::infinity());
}

TEST(Mpc, UnconstrainedFillsTheHead) {
  const auto cat = make_catalog(10, 0.7, std::vector<double>(10, 0.0), 5);
  const std::vector<double> caps(10, 1.0);
  const auto p = mpc_placement(cat, caps);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(p[i], i < 5 ? 1.0 : 0.0);
}

TEST(Mpc, HandTraceWithCappedHead) {
  const auto cat = make_catalog(5, 0.7, std::vector<double>(5, 0.0), 2);
  const std::vector<double> caps{0.3, 1.0, 1.0, 1.0, 1.0};
  const auto p = mpc_placement(cat, caps);
  const std::vector<double> expected{0.3, 1.0, 0.7, 0.0, 0.0};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(p[i], expected[i], 1e-15);
}

TEST(Lcc, EqualSecrecyFillsInIndexOrder) {
  const auto cat = make_catalog(4, 1.0, {0.2, 0.2, 0.2, 0.2}, 2);
  const std::vector<double> caps{0.6, 1.0, 1.0, 1.0};
  const auto p = lcc_placement(cat, caps);
  const std::vector<double> expected{0.6, 1.0, 0.4, 0.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(p[i], expected[i], 1e-15);
}

TEST(Lcc, LeastClassifiedFirst) {
  const auto prm = NetworkParams::defaults();
  const auto cat = make_catalog(3, 0.7, {0.9, 0.1, 0.5}, 1);
  const auto caps = placement_caps(cat, prm);
  const auto p = lcc_placement(cat, prm);
  EXPECT_EQ(p[1], std::min(1.0, caps[1]));
  if (caps[1] >= 1.0) {
    EXPECT_EQ(p[0], 0.0);
    EXPECT_EQ(p[2], 0.0);
  }
}

TEST(GreedyFill, StopsAtBudget) {
  const std::vector<std::size_t> order{2, 0, 1};
  const std::vector<double> caps{1.0, 1.0, 0.4};
  const auto p = greedy_fill(order, caps, 1.0);
  EXPECT_EQ(p[2], 0.4);
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_EQ(p[1], 0.0);
}

}  // namespace
}  // namespace secache
