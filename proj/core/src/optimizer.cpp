#include "secache/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace secache {

namespace {

constexpr double kBudgetTol = 1e-9;
constexpr double kRelBracketTol = 1e-12;
constexpr int kMaxBisection = 200;

void check_caps(const FileCatalog& catalog, std::span<const double> caps) {
  if (caps.size() != static_cast<std::size_t>(catalog.file_count()))
    throw std::invalid_argument("caps length differs from the catalog size");
  for (double c : caps) {
    if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("every cap must lie in [0, 1]");
  }
}

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

FileStatus classify(double stationary, double cap) {
  if (cap <= 0.0 || stationary >= cap) return FileStatus::kCapped;
  if (stationary <= 0.0) return FileStatus::kZero;
  return FileStatus::kInterior;
}

// With the statuses fixed, p_i° is affine in s = 1/√ν, so the budget
// equation has a closed-form root. Returns 0 when no file is interior.
double refine_dual(std::span<const double> popularity, std::span<const double> caps,
                   std::span<const FileStatus> status, double budget, const DerivedConstants& k) {
  double fixed = 0.0;
  double slope = 0.0;
  double offset = 0.0;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (status[i] == FileStatus::kCapped) fixed += caps[i];
    if (status[i] == FileStatus::kInterior) {
      slope += std::sqrt(k.tau2 * popularity[i]) / k.tau1;
      offset += k.tau2 / k.tau1;
    }
  }
  if (slope == 0.0) return 0.0;
  const double s = (budget - fixed + offset) / slope;
  if (!(s > 0.0)) return 0.0;
  return 1.0 / (s * s);
}

}  // namespace

std::string_view to_string(FileStatus status) {
  switch (status) {
    case FileStatus::kCapped: return "capped";
    case FileStatus::kInterior: return "interior";
    case FileStatus::kZero: return "zero";
  }
  return "unknown";
}

std::vector<double> placement_caps(const FileCatalog& catalog, const NetworkParams& params) {
  std::vector<double> caps;
  caps.reserve(static_cast<std::size_t>(catalog.file_count()));
  for (double eps : catalog.secrecy_levels()) caps.push_back(placement_cap(eps, params));
  return caps;
}

double stationary_placement(double popularity, double dual, const DerivedConstants& k) {
  if (!(dual > 0.0)) return std::numeric_limits<double>::infinity();
  return (std::sqrt(k.tau2 * popularity / dual) - k.tau2) / k.tau1;
}

double placement_budget(double dual, std::span<const double> popularity, std::span<const double> caps,
                        const DerivedConstants& k) {
  double total = 0.0;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    total += std::clamp(stationary_placement(popularity[i], dual, k), 0.0, caps[i]);
  }
  return total;
}

double dual_bisection(const FileCatalog& catalog, const NetworkParams& params, std::span<const double> caps) {
  check_caps(catalog, caps);
  const double budget = catalog.cache_size();
  if (!(sum_of(caps) > budget)) throw std::logic_error("dual_bisection: requires the caps to exceed the budget");
  const auto k = derive_constants(params, params.gamma_user);
  const auto q = catalog.popularity();

  // Above max_i q_i/τ₂ every stationary point is <= 0, so g(hi) = 0 < C;
  // as ν -> 0⁺, g -> Σ Ψ_i > C.
  double lo = 0.0;
  double hi = 0.0;
  for (double qi : q) hi = std::max(hi, qi / k.tau2);
  const double width_tol = kRelBracketTol * hi;
  if (placement_budget(hi, q, caps, k) > budget) throw std::logic_error("dual_bisection: bracket failure");

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxBisection; ++it) {
    mid = 0.5 * (lo + hi);
    const double g = placement_budget(mid, q, caps, k);
    if (std::abs(g - budget) < kBudgetTol) break;
    if (g > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < width_tol) break;
  }
  return mid;
}

OcpSolution solve_ocp(const FileCatalog& catalog, const NetworkParams& params) {
  return solve_ocp(catalog, params, placement_caps(catalog, params));
}

OcpSolution solve_ocp(const FileCatalog& catalog, const NetworkParams& params, std::span<const double> caps) {
  check_caps(catalog, caps);
  const auto q = catalog.popularity();
  const auto k = derive_constants(params, params.gamma_user);
  const double budget = catalog.cache_size();
  const std::size_t n = caps.size();

  std::vector<double> p(caps.begin(), caps.end());
  std::vector<FileStatus> status(n, FileStatus::kCapped);
  double dual = 0.0;

  if (sum_of(caps) > budget) {
    dual = dual_bisection(catalog, params, caps);
    for (std::size_t i = 0; i < n; ++i) status[i] = classify(stationary_placement(q[i], dual, k), caps[i]);
    // Snap ν onto the exact root for the identified active set when the
    // classification survives the move.
    const double refined = refine_dual(q, caps, status, budget, k);
    if (refined > 0.0) {
      bool consistent = true;
      for (std::size_t i = 0; i < n && consistent; ++i)
        consistent = classify(stationary_placement(q[i], refined, k), caps[i]) == status[i];
      if (consistent) dual = refined;
    }
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = std::clamp(stationary_placement(q[i], dual, k), 0.0, caps[i]);
    }
  }

  OcpSolution sol{PlacementPolicy(std::move(p), catalog.cache_size()), dual, std::move(status),
                  std::vector<double>(caps.begin(), caps.end()), 0.0};
  sol.objective = hit_probability(sol.policy, catalog, params);
  return sol;
}

std::vector<double> greedy_fill(std::span<const std::size_t> order, std::span<const double> caps, double budget) {
  std::vector<double> p(caps.size(), 0.0);
  for (std::size_t i : order) {
    if (budget <= 0.0) break;
    const double take = std::min({1.0, caps[i], budget});
    p[i] = take;
    budget -= take;
  }
  return p;
}

namespace {

template <class Less>
std::vector<std::size_t> visiting_order(std::size_t n, Less less) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), less);
  return order;
}

}  // namespace

PlacementPolicy mpc_placement(const FileCatalog& catalog, std::span<const double> caps) {
  check_caps(catalog, caps);
  const auto q = catalog.popularity();
  const auto order = visiting_order(q.size(), [&](std::size_t a, std::size_t b) { return q[a] > q[b]; });
  return PlacementPolicy(greedy_fill(order, caps, catalog.cache_size()), catalog.cache_size());
}

PlacementPolicy mpc_placement(const FileCatalog& catalog, const NetworkParams& params) {
  return mpc_placement(catalog, placement_caps(catalog, params));
}

PlacementPolicy lcc_placement(const FileCatalog& catalog, std::span<const double> caps) {
  check_caps(catalog, caps);
  const auto eps = catalog.secrecy_levels();
  const auto order = visiting_order(eps.size(), [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
  return PlacementPolicy(greedy_fill(order, caps, catalog.cache_size()), catalog.cache_size());
}

PlacementPolicy lcc_placement(const FileCatalog& catalog, const NetworkParams& params) {
  return lcc_placement(catalog, placement_caps(catalog, params));
}

}  // namespace secache
