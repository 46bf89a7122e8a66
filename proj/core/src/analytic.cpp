#include "secache/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace secache {

namespace {

constexpr double kPi = std::numbers::pi;

void check_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(std::string(who) + ": probability must lie in [0, 1]");
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

NetworkParams NetworkParams::defaults() {
  const double lambda = 1.0 / (800.0 * 800.0);
  return from_db(lambda, lambda / 5.0, 3.0, 200.0, -5.0, -7.0);
}

NetworkParams NetworkParams::from_db(double bs_density, double eve_density, double path_loss_exponent,
                                     double guard_radius, double gamma_user_db, double gamma_eve_db,
                                     double tx_power) {
  NetworkParams p;
  p.bs_density = bs_density;
  p.eve_density = eve_density;
  p.path_loss_exponent = path_loss_exponent;
  p.guard_radius = guard_radius;
  p.gamma_user = db_to_linear(gamma_user_db);
  p.gamma_eve = db_to_linear(gamma_eve_db);
  p.tx_power = tx_power;
  p.validate();
  return p;
}

void NetworkParams::validate() const {
  if (!(path_loss_exponent > 2.0) || !std::isfinite(path_loss_exponent))
    throw std::invalid_argument("NetworkParams: path-loss exponent must exceed 2");
  if (!(bs_density > 0.0) || !std::isfinite(bs_density))
    throw std::invalid_argument("NetworkParams: BS density must be positive");
  if (!(eve_density >= 0.0) || !std::isfinite(eve_density))
    throw std::invalid_argument("NetworkParams: eavesdropper density must be non-negative");
  if (!(guard_radius >= 0.0) || !std::isfinite(guard_radius))
    throw std::invalid_argument("NetworkParams: guard-zone radius must be non-negative");
  if (!(gamma_user > 0.0) || !std::isfinite(gamma_user))
    throw std::invalid_argument("NetworkParams: user SIR threshold must be positive");
  if (!(gamma_eve > 0.0) || !std::isfinite(gamma_eve))
    throw std::invalid_argument("NetworkParams: eavesdropper SIR threshold must be positive");
  if (!(tx_power > 0.0) || !std::isfinite(tx_power))
    throw std::invalid_argument("NetworkParams: transmit power must be positive");
}

double NetworkParams::guard_void_probability() const noexcept {
  return std::exp(-eve_density * kPi * guard_radius * guard_radius);
}

DerivedConstants derive_constants(const NetworkParams& params, double gamma) {
  params.validate();
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::domain_error("derive_constants: gamma must be positive");
  DerivedConstants c{};
  c.gamma = gamma;
  c.delta = params.delta();
  c.kappa1 = c.delta * std::pow(gamma, c.delta) * beta(1.0 - c.delta, c.delta);
  c.kappa2 = c.delta * gamma / (1.0 - c.delta) * hyp2f1_1b(1.0 - c.delta, -gamma);
  c.tau1 = 1.0 + c.kappa2 - c.kappa1;
  const double guard_area = params.eve_density * kPi * params.guard_radius * params.guard_radius;
  c.tau2 = c.kappa1 * std::exp(guard_area);
  return c;
}

double conditional_hit_probability(double p, const NetworkParams& params) {
  check_probability(p, "conditional_hit_probability");
  const auto c = derive_constants(params, params.gamma_user);
  return p / (c.tau1 * p + c.tau2);
}

double hit_probability(std::span<const double> placement, std::span<const double> popularity,
                       const NetworkParams& params) {
  if (placement.size() != popularity.size())
    throw std::invalid_argument("hit_probability: placement and popularity lengths differ");
  const auto c = derive_constants(params, params.gamma_user);
  double total = 0.0;
  for (std::size_t i = 0; i < placement.size(); ++i) {
    const double p = placement[i];
    check_probability(p, "hit_probability");
    total += popularity[i] * p / (c.tau1 * p + c.tau2);
  }
  return total;
}

double hit_probability(const PlacementPolicy& policy, const FileCatalog& catalog,
                       const NetworkParams& params) {
  if (policy.size() != static_cast<std::size_t>(catalog.file_count()))
    throw std::invalid_argument("hit_probability: policy length differs from the catalog size");
  return hit_probability(policy.probabilities(), catalog.popularity(), params);
}

double secrecy_probability_lower_bound(double p, const NetworkParams& params) {
  check_probability(p, "secrecy_probability_lower_bound");
  if (p == 0.0) return 1.0;
  const auto c = derive_constants(params, params.gamma_eve);
  const double D = params.guard_radius;
  const double shield = std::exp(-kPi * D * D * c.kappa1 * params.bs_density);
  return 1.0 - shield * p / (c.tau1 * p + c.tau2);
}

double secrecy_probability_exact(double p, const NetworkParams& params, const QuadratureConfig& cfg) {
  check_probability(p, "secrecy_probability_exact");
  if (p == 0.0) return 1.0;
  const auto c = derive_constants(params, params.gamma_eve);
  const double D = params.guard_radius;
  const double alpha = params.path_loss_exponent;
  const double lambda = params.bs_density;
  const double void_prob = params.guard_void_probability();
  const double active = p * lambda * void_prob;              // λ_ai
  const double silenced = p * lambda * (1.0 - void_prob);    // λ_āi
  const double not_cached = (1.0 - p) * lambda;              // λ_iᶜ
  const double exponent_rate = (not_cached + silenced) * c.kappa1 + active * c.kappa2;
  const double D_alpha = std::pow(D, alpha);

  // With s = r² - D² the wiretap-distance density becomes πλ_ai e^{-πλ_ai s}.
  auto integrand = [&](double s) {
    const double r2 = s + D * D;
    double theta = 0.0;
    if (D > 0.0) {
      const double z = -D_alpha / (params.gamma_eve * std::pow(r2, 0.5 * alpha));
      theta = -kPi * active * D * D * hyp2f1_1b(c.delta, z);
    }
    return std::exp(-kPi * exponent_rate * r2 + theta) * kPi * active * std::exp(-kPi * active * s);
  };
  // Tail mass of the distance law beyond s_max is below 1e-12.
  const double s_max = std::log(1e12) / (kPi * active);
  const double leak = integrate(integrand, 0.0, s_max, cfg);
  return std::clamp(1.0 - leak, 0.0, 1.0);
}

double placement_cap(double eps, const NetworkParams& params) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("placement_cap: eps must lie in [0, 1]");
  if (eps == 1.0) return 0.0;
  const auto c = derive_constants(params, params.gamma_eve);
  const double D = params.guard_radius;
  const double shield = std::exp(-kPi * D * D * c.kappa1 * params.bs_density);
  const double denom = shield - c.tau1 * (1.0 - eps);
  if (denom <= 0.0) return 1.0;
  return std::min(1.0, c.tau2 * (1.0 - eps) / denom);
}

double rate_redundancy(double gamma_eve, double base) {
  if (!(gamma_eve > 0.0)) throw std::domain_error("rate_redundancy: gamma_eve must be positive");
  if (!(base > 0.0) || base == 1.0) throw std::domain_error("rate_redundancy: invalid logarithm base");
  return std::log1p(gamma_eve) / std::log(base);
}

}  // namespace secache
