#pragma once

#include <span>

#include "secache/catalog.hpp"
#include "secache/special_functions.hpp"

namespace secache {

double db_to_linear(double db);
double linear_to_db(double linear);

/// Physical and stochastic parameters of the network. Thresholds are linear;
/// use NetworkParams::from_db or db_to_linear at the API boundary.
struct NetworkParams {
  double bs_density = 0.0;          // λ, per m²
  double eve_density = 0.0;         // λ_e, per m²
  double path_loss_exponent = 0.0;  // α > 2
  double guard_radius = 0.0;        // D, m
  double gamma_user = 0.0;          // linear
  double gamma_eve = 0.0;           // linear
  double tx_power = 1.0;            // W; cancels in every SIR

  /// The evaluation defaults: α = 3, λ = 1/800² m⁻², λ_e = λ/5, D = 200 m,
  /// γ_u = -5 dB, γ_e = -7 dB.
  static NetworkParams defaults();

  static NetworkParams from_db(double bs_density, double eve_density, double path_loss_exponent,
                               double guard_radius, double gamma_user_db, double gamma_eve_db,
                               double tx_power = 1.0);

  void validate() const;

  double delta() const noexcept { return 2.0 / path_loss_exponent; }
  /// exp(-λ_e π D²): probability that a BS finds no eavesdropper in its guard zone.
  double guard_void_probability() const noexcept;
  /// λ_ai: density of BSs that cache file i and actually transmit it.
  double active_density(double p) const noexcept { return p * bs_density * guard_void_probability(); }
};

/// δ, κ₁(γ), κ₂(γ), τ₁(γ), τ₂(γ) at one SIR threshold.
struct DerivedConstants {
  double delta;
  double kappa1;
  double kappa2;
  double tau1;
  double tau2;
  double gamma;
};

DerivedConstants derive_constants(const NetworkParams& params, double gamma);

/// Probability that a user requesting a file cached with probability p is served.
double conditional_hit_probability(double p, const NetworkParams& params);

/// Σ q_i p_i / (τ₁(γ_u) p_i + τ₂(γ_u)).
double hit_probability(const PlacementPolicy& policy, const FileCatalog& catalog,
                       const NetworkParams& params);
double hit_probability(std::span<const double> placement, std::span<const double> popularity,
                       const NetworkParams& params);

/// Secrecy probability of a file cached with probability p, by numerical
/// integration over the wiretapped-BS distance. p = 0 gives 1.
double secrecy_probability_exact(double p, const NetworkParams& params,
                                 const QuadratureConfig& cfg = {});

/// Closed-form lower bound 1 - exp(-πD²κ₁(γ_e)λ) / (τ₁(γ_e) + τ₂(γ_e)/p).
double secrecy_probability_lower_bound(double p, const NetworkParams& params);

/// Largest p in [0, 1] whose secrecy lower bound is at least eps.
double placement_cap(double eps, const NetworkParams& params);

/// Wiretap-code rate redundancy log_base(1 + γ_e). Informational only.
double rate_redundancy(double gamma_eve, double base = 2.0);

}  // namespace secache
