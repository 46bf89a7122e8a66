#include "secache/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace secache {

namespace {

constexpr double kPi = std::numbers::pi;

// Substream tags inside one trial.
constexpr std::uint64_t kBsStream = 1;
constexpr std::uint64_t kEveStream = 2;
constexpr std::uint64_t kFadeStream = 3;
constexpr std::uint64_t kMarkStreamBase = 1000;

// Experiment tags keep hit and secrecy trials on disjoint streams.
constexpr std::uint64_t kHitTag = 1ULL << 62;
constexpr std::uint64_t kSecrecyTag = 2ULL << 62;

// One network realisation seen from a receiver at the origin.
class Realization {
 public:
  Realization(const NetworkParams& params, double window, std::uint64_t seed, std::uint64_t trial_key,
              bool eavesdropper_at_origin)
      : guard2_(params.guard_radius * params.guard_radius), eve_at_origin_(eavesdropper_at_origin) {
    CounterRng bs_rng(seed, trial_key, kBsStream);
    bs_ = sample_ppp(params.bs_density, window, bs_rng);
    // Eavesdroppers just outside the window can still silence BSs inside it.
    CounterRng eve_rng(seed, trial_key, kEveStream);
    eves_ = sample_ppp(params.eve_density, window + params.guard_radius, eve_rng);
    std::sort(eves_.begin(), eves_.end(), [](const Point& a, const Point& b) { return a.x < b.x; });

    const CounterRng fade_rng(seed, trial_key, kFadeStream);
    const double half_alpha = 0.5 * params.path_loss_exponent;
    received_.resize(bs_.size());
    for (std::size_t k = 0; k < bs_.size(); ++k) {
      const double fade = -std::log(fade_rng.uniform_at(k));
      received_[k] = fade * std::pow(bs_[k].r2, -half_alpha);
      total_ += received_[k];
    }
    silenced_.assign(bs_.size(), -1);
  }

  std::size_t size() const noexcept { return bs_.size(); }
  double received(std::size_t k) const noexcept { return received_[k]; }
  double interference_excluding(std::size_t k) const noexcept { return total_ - received_[k]; }

  // True when BS k has an eavesdropper in its guard zone and sends AN.
  bool silenced(std::size_t k) {
    if (silenced_[k] < 0) silenced_[k] = compute_silenced(bs_[k]) ? 1 : 0;
    return silenced_[k] == 1;
  }

 private:
  bool compute_silenced(const Point& b) const {
    if (eve_at_origin_ && b.r2 <= guard2_) return true;
    if (guard2_ == 0.0 && !eve_at_origin_) return false;
    const double reach = std::sqrt(guard2_);
    auto it = std::lower_bound(eves_.begin(), eves_.end(), b.x - reach,
                               [](const Point& e, double x) { return e.x < x; });
    for (; it != eves_.end() && it->x <= b.x + reach; ++it) {
      const double dx = it->x - b.x;
      const double dy = it->y - b.y;
      if (dx * dx + dy * dy <= guard2_) return true;
    }
    return false;
  }

  double guard2_;
  bool eve_at_origin_;
  std::vector<Point> bs_;
  std::vector<Point> eves_;
  std::vector<double> received_;
  std::vector<signed char> silenced_;
  double total_ = 0.0;
};

// Runs trial_fn(trial, counts) for every trial and returns the summed
// integer counts. Each worker owns a contiguous block of trials and its own
// tally, so the result does not depend on the thread count.
template <class TrialFn>
std::vector<std::int64_t> run_trials(std::int64_t trials, std::size_t outputs, int threads, TrialFn trial_fn) {
  const auto workers = static_cast<std::int64_t>(std::clamp<std::int64_t>(threads, 1, trials));
  std::vector<std::vector<std::int64_t>> tallies(static_cast<std::size_t>(workers),
                                                 std::vector<std::int64_t>(outputs, 0));
  auto work = [&](std::int64_t w) {
    const std::int64_t begin = trials * w / workers;
    const std::int64_t end = trials * (w + 1) / workers;
    auto& tally = tallies[static_cast<std::size_t>(w)];
    for (std::int64_t t = begin; t < end; ++t) trial_fn(static_cast<std::uint64_t>(t), tally);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  std::vector<std::int64_t> counts(outputs, 0);
  for (const auto& tally : tallies) {
    for (std::size_t i = 0; i < outputs; ++i) counts[i] += tally[i];
  }
  return counts;
}

}  // namespace

void SimConfig::validate(const NetworkParams& params) const {
  if (trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
  if (window_radius && !(*window_radius > params.guard_radius))
    throw std::invalid_argument("SimConfig: window radius must exceed the guard-zone radius");
  if (!window_radius && !(min_expected_bs > 0.0))
    throw std::invalid_argument("SimConfig: min_expected_bs must be positive");
  if (threads < 0) throw std::invalid_argument("SimConfig: threads must be >= 0");
}

double SimConfig::resolved_window(const NetworkParams& params) const {
  if (window_radius) return *window_radius;
  const double by_count = std::sqrt(min_expected_bs / (kPi * params.bs_density));
  const double by_spacing = 10.0 / (2.0 * std::sqrt(params.bs_density));
  return std::max({by_count, by_spacing, 2.0 * params.guard_radius});
}

SimEstimate SimEstimate::from_frequency(double estimate, std::int64_t trials) {
  SimEstimate e;
  e.estimate = estimate;
  e.trials = trials;
  e.ci95_halfwidth = 1.96 * std::sqrt(std::max(0.0, estimate * (1.0 - estimate)) / static_cast<double>(trials));
  return e;
}

SimEstimate SimEstimate::from_counts(std::int64_t successes, std::int64_t trials) {
  return from_frequency(static_cast<double>(successes) / static_cast<double>(trials), trials);
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kThreadsEnvVar)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<Point> sample_ppp(double density, double radius, CounterRng& rng) {
  if (!(density >= 0.0)) throw std::invalid_argument("sample_ppp: density must be non-negative");
  if (!(radius > 0.0)) throw std::invalid_argument("sample_ppp: radius must be positive");
  std::vector<Point> points;
  if (density == 0.0) return points;
  const double rate = kPi * density;
  const double limit = radius * radius;
  points.reserve(static_cast<std::size_t>(rate * limit * 1.2) + 16);
  double r2 = 0.0;
  while (true) {
    r2 += rng.exponential() / rate;
    if (r2 > limit) break;
    const double angle = 2.0 * kPi * rng.uniform();
    const double r = std::sqrt(r2);
    points.push_back({r * std::cos(angle), r * std::sin(angle), r2});
  }
  return points;
}

std::vector<SimEstimate> simulate_conditional_hit(std::span<const double> placement, const NetworkParams& params,
                                                  const SimConfig& cfg) {
  params.validate();
  cfg.validate(params);
  for (double p : placement) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("simulate_hit: placement must lie in [0, 1]");
  }
  const double window = cfg.resolved_window(params);
  const std::vector<double> p(placement.begin(), placement.end());
  const double gamma = params.gamma_user;
  const std::uint64_t seed = cfg.seed;

  auto trial = [&](std::uint64_t t, std::vector<std::int64_t>& hits) {
    const std::uint64_t key = kHitTag | t;
    Realization net(params, window, seed, key, /*eavesdropper_at_origin=*/false);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      const CounterRng marks(seed, key, kMarkStreamBase + i);
      for (std::size_t k = 0; k < net.size(); ++k) {
        if (marks.uniform_at(k) < p[i] && !net.silenced(k)) {
          // Nearest active file-i transmitter serves; everyone else interferes.
          if (net.received(k) > gamma * net.interference_excluding(k)) ++hits[i];
          break;
        }
      }
    }
  };
  const auto hits = run_trials(cfg.trials, p.size(), resolve_thread_count(cfg.threads), trial);

  std::vector<SimEstimate> out;
  out.reserve(p.size());
  for (auto h : hits) out.push_back(SimEstimate::from_counts(h, cfg.trials));
  return out;
}

HitSimResult simulate_hit(const PlacementPolicy& policy, const FileCatalog& catalog, const NetworkParams& params,
                          const SimConfig& cfg) {
  if (policy.size() != static_cast<std::size_t>(catalog.file_count()))
    throw std::invalid_argument("simulate_hit: policy length differs from the catalog size");
  HitSimResult result;
  result.per_file = simulate_conditional_hit(policy.probabilities(), params, cfg);
  const auto q = catalog.popularity();
  double aggregate = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) aggregate += q[i] * result.per_file[i].estimate;
  result.aggregate = SimEstimate::from_frequency(std::clamp(aggregate, 0.0, 1.0), cfg.trials);
  return result;
}

std::vector<SimEstimate> simulate_secrecy(std::span<const double> p_values, const NetworkParams& params,
                                          const SimConfig& cfg) {
  params.validate();
  cfg.validate(params);
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("simulate_secrecy: p must lie in [0, 1]");
  }
  const double window = cfg.resolved_window(params);
  const std::vector<double> p(p_values.begin(), p_values.end());
  const double gamma = params.gamma_eve;
  const std::uint64_t seed = cfg.seed;

  auto trial = [&](std::uint64_t t, std::vector<std::int64_t>& secure) {
    const std::uint64_t key = kSecrecyTag | t;
    Realization net(params, window, seed, key, /*eavesdropper_at_origin=*/true);
    const CounterRng marks(seed, key, kMarkStreamBase);
    for (std::size_t j = 0; j < p.size(); ++j) {
      bool leaked = false;
      if (p[j] > 0.0) {
        // BSs inside B(o, D) are silenced by the typical eavesdropper itself.
        for (std::size_t k = 0; k < net.size(); ++k) {
          if (marks.uniform_at(k) < p[j] && !net.silenced(k)) {
            leaked = !(net.received(k) < gamma * net.interference_excluding(k));
            break;
          }
        }
      }
      if (!leaked) ++secure[j];
    }
  };
  const auto secure = run_trials(cfg.trials, p.size(), resolve_thread_count(cfg.threads), trial);

  std::vector<SimEstimate> out;
  out.reserve(p.size());
  for (auto s : secure) out.push_back(SimEstimate::from_counts(s, cfg.trials));
  return out;
}

SimEstimate simulate_secrecy(double p, const NetworkParams& params, const SimConfig& cfg) {
  const double values[] = {p};
  return simulate_secrecy(values, params, cfg).front();
}

}  // namespace secache
