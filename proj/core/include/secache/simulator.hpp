#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "secache/analytic.hpp"
#include "secache/catalog.hpp"
#include "secache/random.hpp"

namespace secache {

/// Environment variable read for the worker-thread count.
inline constexpr const char* kThreadsEnvVar = "SECACHE_THREADS";

struct SimConfig {
  std::int64_t trials = 10'000;
  std::uint64_t seed = 1;
  /// Simulation disk radius in m. When unset, chosen so that the expected BS
  /// count is at least min_expected_bs and the radius is at least ten mean
  /// nearest-neighbour distances.
  std::optional<double> window_radius;
  double min_expected_bs = 1000.0;
  /// Worker threads; 0 reads SECACHE_THREADS, falling back to the hardware count.
  int threads = 0;

  /// Throws std::invalid_argument for trials < 1 or window_radius <= D.
  void validate(const NetworkParams& params) const;
  double resolved_window(const NetworkParams& params) const;
};

/// Empirical frequency with its normal-approximation 95% half-width.
struct SimEstimate {
  double estimate = 0.0;
  std::int64_t trials = 0;
  double ci95_halfwidth = 0.0;

  static SimEstimate from_frequency(double estimate, std::int64_t trials);
  static SimEstimate from_counts(std::int64_t successes, std::int64_t trials);
};

struct HitSimResult {
  std::vector<SimEstimate> per_file;
  SimEstimate aggregate;  // Σ q_i · per-file estimate
};

struct Point {
  double x;
  double y;
  double r2;  // squared distance from the origin
};

/// Homogeneous PPP on the disk of the given radius centred at the origin,
/// returned in order of increasing distance. The squared radii are generated
/// as a 1-D PPP of rate πλ on [0, radius²], which gives a Poisson count of mean
/// λπ·radius² and uniform positions.
std::vector<Point> sample_ppp(double density, double radius, CounterRng& rng);

/// Per-file hit frequency for a typical user at the origin, one trial per
/// network realisation; files share the realisation within a trial. The
/// placement vector is not required to satisfy the storage budget.
std::vector<SimEstimate> simulate_conditional_hit(std::span<const double> placement,
                                                  const NetworkParams& params, const SimConfig& cfg);

HitSimResult simulate_hit(const PlacementPolicy& policy, const FileCatalog& catalog,
                          const NetworkParams& params, const SimConfig& cfg);

/// Secrecy frequency for a typical eavesdropper at the origin, for each
/// caching probability in p_values. All values reuse the same realisations and
/// caching marks (common random numbers), so the estimates are coupled.
std::vector<SimEstimate> simulate_secrecy(std::span<const double> p_values, const NetworkParams& params,
                                          const SimConfig& cfg);
SimEstimate simulate_secrecy(double p, const NetworkParams& params, const SimConfig& cfg);

/// Resolves SimConfig::threads (0 -> environment -> hardware concurrency).
int resolve_thread_count(int requested);

}  // namespace secache
