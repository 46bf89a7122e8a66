#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace secache {

/// Tolerances and subdivision budget for the adaptive Gauss-Kronrod driver.
struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 200;

  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;
};

/// Thrown when the subdivision budget runs out before the error estimate
/// meets the requested tolerance. Carries the best estimate reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

using RealFunction = std::function<double(double)>;

/// ln Γ(x) for x > 0 (Lanczos approximation, g = 7).
double log_gamma(double x);

/// Euler beta function B(a, b) for a, b > 0, evaluated through log-gamma.
double beta(double a, double b);

/// ₂F₁(1, b; b + 1; z) for 0 < b <= 1 and z <= 0.
///
/// This is the only hypergeometric family the closed forms need. It equals
/// b ∫₀¹ t^{b-1} / (1 - z t) dt, which is in (0, 1] and increases to 1 as
/// z -> 0⁻. Throws std::domain_error outside the supported region.
double hyp2f1_1b(double b, double z);

namespace detail {
// Exposed for cross-checking the evaluation branches against each other.
double hyp2f1_1b_direct_series(double b, double z);  // |z| < 1
double hyp2f1_1b_pfaff_series(double b, double z);   // z <= 0, z/(z-1) < 1
double hyp2f1_1b_integral(double b, double z);       // z <= 0
}  // namespace detail

/// Adaptive G7-K15 quadrature of f over the finite interval [a, b].
double integrate(const RealFunction& f, double a, double b,
                 const QuadratureConfig& cfg = {});

/// ∫_lower^∞ f(x) dx via the map x = lower + (1 - t) / t, t ∈ (0, 1],
/// followed by adaptive G7-K15 on the compact image.
double integrate_semi_infinite(const RealFunction& f, double lower,
                               const QuadratureConfig& cfg = {});

}  // namespace secache
