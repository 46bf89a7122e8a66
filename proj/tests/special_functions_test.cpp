#include "secache/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace secache {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Beta, UnitArguments) { EXPECT_NEAR(beta(1.0, 1.0), 1.0, 1e-14); }

TEST(Beta, MatchesQuadratureOracle) {
  // Oracle values computed by the trigonometric-form Simpson rule.
  const double half = oracle::beta_by_quadrature(0.5, 0.5);
  EXPECT_NEAR(half, kPi, 1e-6);
  EXPECT_NEAR(beta(0.5, 0.5), kPi, 1e-12 * kPi);

  const double two_three = oracle::beta_by_quadrature(2.0, 3.0);
  EXPECT_NEAR(two_three, 1.0 / 12.0, 1e-9);
  EXPECT_NEAR(beta(2.0, 3.0), 1.0 / 12.0, 1e-12 / 12.0);

  for (double a : {0.7, 1.3, 2.5}) {
    for (double b : {0.6, 1.0, 3.5}) {
      EXPECT_NEAR(beta(a, b), oracle::beta_by_quadrature(a, b), 1e-6 * beta(a, b)) << a << "," << b;
    }
  }
}

TEST(Beta, Symmetric) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(1e-3, 5.0);
  for (int i = 0; i < 500; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    EXPECT_EQ(beta(a, b), beta(b, a));
  }
}

TEST(Beta, RejectsNonPositive) {
  EXPECT_THROW(beta(0.0, 1.0), std::domain_error);
  EXPECT_THROW(beta(1.0, -2.0), std::domain_error);
}

TEST(LogGamma, KnownValues) {
  EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-15);
  EXPECT_NEAR(log_gamma(2.0), 0.0, 1e-15);
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(kPi), 1e-14);
  EXPECT_NEAR(log_gamma(10.0), std::log(362880.0), 1e-12);
  EXPECT_NEAR(log_gamma(0.1), std::log(9.513507698668731836), 1e-13);
}

TEST(Hyp2f1, ZeroArgumentIsOne) { EXPECT_EQ(hyp2f1_1b(0.5, 0.0), 1.0); }

TEST(Hyp2f1, ArctanAndLogClosedForms) {
  EXPECT_NEAR(hyp2f1_1b(0.5, -1.0), kPi / 4.0, 1e-10 * kPi / 4.0);
  EXPECT_NEAR(hyp2f1_1b(1.0, -1.0), std::log(2.0), 1e-10 * std::log(2.0));
  // ₂F₁(1, ½; 3/2; -x²) = arctan(x)/x and ₂F₁(1, 1; 2; -x) = ln(1+x)/x on every branch.
  for (double x : {0.3, 0.9, 1.7, 2.9, 4.0, 10.0, 100.0, 1e4}) {
    const double arctan_form = std::atan(x) / x;
    EXPECT_NEAR(hyp2f1_1b(0.5, -x * x), arctan_form, 1e-10 * arctan_form) << x;
    const double log_form = std::log1p(x) / x;
    EXPECT_NEAR(hyp2f1_1b(1.0, -x), log_form, 1e-10 * log_form) << x;
  }
}

TEST(Hyp2f1, MatchesDefinitionSeries) {
  for (double b : {0.1, 1.0 / 3.0, 2.0 / 3.0, 0.95}) {
    for (double z : {-0.1, -0.45, -0.7, -0.9}) {
      const double ref = oracle::hyp2f1_series(1.0, b, b + 1.0, z);
      EXPECT_NEAR(hyp2f1_1b(b, z), ref, 1e-12 * ref) << b << "," << z;
    }
  }
}

TEST(Hyp2f1, DirectAndPfaffSeriesAgreeOnOverlap) {
  for (double b : {0.05, 0.25, 0.5, 2.0 / 3.0, 0.999, 1.0}) {
    for (double z = 0.0; z > -1.0; z -= 0.0625) {
      EXPECT_NEAR(detail::hyp2f1_1b_direct_series(b, z), detail::hyp2f1_1b_pfaff_series(b, z), 1e-9)
          << b << "," << z;
    }
  }
}

TEST(Hyp2f1, IntegralBranchAgreesWithPfaffSeries) {
  for (double b : {0.2, 1.0 / 3.0, 2.0 / 3.0, 0.9}) {
    for (double z : {-1.5, -5.0, -9.0, -30.0}) {
      const double pfaff = detail::hyp2f1_1b_pfaff_series(b, z);
      EXPECT_NEAR(detail::hyp2f1_1b_integral(b, z), pfaff, 1e-11 * pfaff) << b << "," << z;
    }
  }
}

TEST(Hyp2f1, MonotoneIncreasingTowardOne) {
  for (double b : {0.2, 0.5, 2.0 / 3.0, 1.0}) {
    double prev = 0.0;
    for (double z = -1e3; z <= 0.0; z = (z < -1.0 ? z / 1.5 : z + 0.05)) {
      const double v = hyp2f1_1b(b, z);
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0);
      EXPECT_GE(v, prev) << b << "," << z;
      prev = v;
      if (z > -1e-9) break;
    }
  }
}

TEST(Hyp2f1, DomainErrors) {
  EXPECT_THROW(hyp2f1_1b(0.5, 0.1), std::domain_error);
  EXPECT_THROW(hyp2f1_1b(0.0, -1.0), std::domain_error);
  EXPECT_THROW(hyp2f1_1b(1.5, -1.0), std::domain_error);
  EXPECT_THROW(hyp2f1_1b(0.5, -INFINITY), std::domain_error);
}

TEST(Integrate, ExponentialFromZero) {
  EXPECT_NEAR(integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0), 1.0, 1e-10);
}

TEST(Integrate, GuardZoneDistancePdfHasUnitMass) {
  const double lambda = 1.0 / (800.0 * 800.0);
  const double D = 200.0;
  auto pdf = [&](double r) { return 2.0 * kPi * lambda * r * std::exp(-kPi * lambda * (r * r - D * D)); };
  // Oracle: with u = r², the integral is exp(-πλ(u - D²)) evaluated from D² to ∞ = 1.
  EXPECT_NEAR(integrate_semi_infinite(pdf, D), 1.0, 1e-9);
}

TEST(Integrate, ArctanTail) {
  EXPECT_NEAR(integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 0.0), kPi / 2.0, 1e-9);
}

TEST(Integrate, FiniteIntervalAndReversal) {
  auto f = [](double x) { return std::sin(x); };
  EXPECT_NEAR(integrate(f, 0.0, kPi), 2.0, 1e-12);
  EXPECT_NEAR(integrate(f, kPi, 0.0), -2.0, 1e-12);
  EXPECT_EQ(integrate(f, 1.0, 1.0), 0.0);
}

TEST(Integrate, ExhaustedBudgetCarriesEstimate) {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 2;
  cfg.rel_tol = 1e-14;
  auto spike = [](double x) { return std::exp(-1e4 * (x - 0.3) * (x - 0.3)); };
  try {
    (void)integrate(spike, 0.0, 10.0, cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.estimate()));
    EXPECT_GT(e.error_bound(), 0.0);
  }
}

TEST(Integrate, RejectsInvalidConfig) {
  auto f = [](double x) { return x; };
  QuadratureConfig bad;
  bad.rel_tol = 0.0;
  EXPECT_THROW(integrate(f, 0.0, 1.0, bad), std::invalid_argument);
  bad = {};
  bad.abs_tol = -1.0;
  EXPECT_THROW(integrate(f, 0.0, 1.0, bad), std::invalid_argument);
  bad = {};
  bad.max_subdivisions = 0;
  EXPECT_THROW(integrate(f, 0.0, 1.0, bad), std::invalid_argument);
}

TEST(Integrate, MonotoneInIntegrand) {
  const QuadratureConfig cfg;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double rate = u(rng);
    const double bump = u(rng) * 1e-3;
    auto f = [rate](double x) { return std::exp(-rate * x); };
    auto g = [rate, bump](double x) { return std::exp(-rate * x) + bump * std::exp(-x * x); };
    const double lower = u(rng) - 0.05;
    EXPECT_LE(integrate_semi_infinite(f, lower, cfg), integrate_semi_infinite(g, lower, cfg) + cfg.abs_tol);
  }
}

TEST(Integrate, DeterministicForFixedInputs) {
  auto f = [](double x) { return std::exp(-x) * std::cos(x); };
  EXPECT_EQ(integrate_semi_infinite(f, 0.25), integrate_semi_infinite(f, 0.25));
}

}  // namespace
}  // namespace secache
