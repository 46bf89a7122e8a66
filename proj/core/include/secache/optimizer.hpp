#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "secache/analytic.hpp"
#include "secache/catalog.hpp"

namespace secache {

/// Where a file ends up relative to its box [0, Ψ_i] at the optimum.
enum class FileStatus { kCapped, kInterior, kZero };

std::string_view to_string(FileStatus status);

/// Optimal content placement for the secrecy-capped hit maximisation.
struct OcpSolution {
  PlacementPolicy policy;
  double dual = 0.0;  // ν, price of one unit of cache storage
  std::vector<FileStatus> active_set;
  std::vector<double> caps;  // Ψ_i
  double objective = 0.0;    // hit probability at the optimum
};

/// Ψ_i for every file of the catalog.
std::vector<double> placement_caps(const FileCatalog& catalog, const NetworkParams& params);

/// Unconstrained stationary point p_i°(ν) = (√(τ₂ q_i / ν) - τ₂) / τ₁ at γ_u.
double stationary_placement(double popularity, double dual, const DerivedConstants& hit_constants);

/// g(ν) = Σ clamp(p_i°(ν), 0, Ψ_i); non-increasing in ν.
double placement_budget(double dual, std::span<const double> popularity, std::span<const double> caps,
                        const DerivedConstants& hit_constants);

/// ν★ with g(ν★) = C. Requires Σ Ψ_i > C.
double dual_bisection(const FileCatalog& catalog, const NetworkParams& params, std::span<const double> caps);

OcpSolution solve_ocp(const FileCatalog& catalog, const NetworkParams& params);
OcpSolution solve_ocp(const FileCatalog& catalog, const NetworkParams& params, std::span<const double> caps);

/// Budget-greedy fill in the given visiting order: p_i = min(1, Ψ_i, budget left).
std::vector<double> greedy_fill(std::span<const std::size_t> order, std::span<const double> caps,
                                double budget);

/// Most popular content first (descending q_i, ties by index), capped by Ψ_i.
PlacementPolicy mpc_placement(const FileCatalog& catalog, const NetworkParams& params);
PlacementPolicy mpc_placement(const FileCatalog& catalog, std::span<const double> caps);

/// Least classified content first (ascending ε_i, ties by index), capped by Ψ_i.
PlacementPolicy lcc_placement(const FileCatalog& catalog, const NetworkParams& params);
PlacementPolicy lcc_placement(const FileCatalog& catalog, std::span<const double> caps);

}  // namespace secache
