#include "secache/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace secache {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: abs_tol must be > 0");
  if (max_subdivisions < 1)
    throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("log_gamma: argument must be positive");
  static constexpr std::array<double, 9> kLanczos = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps the series in its accurate range.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double xm1 = x - 1.0;
  double a = kLanczos[0];
  const double t = xm1 + 7.5;
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + static_cast<double>(i));
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t + std::log(a);
}

double beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta: arguments must be positive");
  // Symmetric by construction: the expression is evaluated on the sorted pair.
  if (a > b) std::swap(a, b);
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

namespace {

constexpr double kSeriesEps = 1e-16;
constexpr long kSeriesMaxTerms = 50'000'000;

void check_hyp_domain(double b, double z) {
  if (!(b > 0.0 && b <= 1.0)) throw std::domain_error("hyp2f1_1b: b must lie in (0, 1]");
  if (!std::isfinite(z)) throw std::domain_error("hyp2f1_1b: z must be finite");
  if (z > 0.0) throw std::domain_error("hyp2f1_1b: z > 0 is not supported");
}

// G7-K15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double estimate;
  double error;
};

template <class F>
Segment kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double gauss = fc * kWg[3];
  double kronrod = fc * kWgk[7];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double result = kronrod * half;
  const double res_abs = abs_sum * std::abs(half);
  const double res_asc = asc * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
  return {a, b, result, err};
}

template <class F>
double adaptive_gk(const F& f, double a, double b, const QuadratureConfig& cfg) {
  cfg.validate();
  if (a == b) return 0.0;
  auto by_error = [](const Segment& x, const Segment& y) { return x.error < y.error; };
  std::vector<Segment> heap;
  heap.reserve(static_cast<std::size_t>(cfg.max_subdivisions) + 1);
  heap.push_back(kronrod15(f, a, b));
  double total = heap.front().estimate;
  double total_err = heap.front().error;
  while (true) {
    if (!std::isfinite(total)) throw ConvergenceError("integrate: non-finite integrand value", total, total_err);
    if (total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) break;
    if (static_cast<int>(heap.size()) >= cfg.max_subdivisions) {
      throw ConvergenceError("integrate: subdivision budget exhausted", total, total_err);
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    // Re-summing keeps the total independent of accumulated cancellation.
    total = 0.0;
    total_err = 0.0;
    for (const auto& s : heap) {
      total += s.estimate;
      total_err += s.error;
    }
  }
  return total;
}

}  // namespace

namespace detail {

double hyp2f1_1b_direct_series(double b, double z) {
  check_hyp_domain(b, z);
  if (!(std::abs(z) < 1.0)) throw std::domain_error("hyp2f1_1b_direct_series: requires |z| < 1");
  // Coefficient of z^n is b / (b + n).
  double sum = 1.0;
  double zn = 1.0;
  for (long n = 1; n < kSeriesMaxTerms; ++n) {
    zn *= z;
    const double term = b / (b + static_cast<double>(n)) * zn;
    sum += term;
    if (std::abs(term) < kSeriesEps * std::abs(sum)) return sum;
  }
  throw ConvergenceError("hyp2f1_1b_direct_series: series did not converge", sum, std::abs(zn));
}

double hyp2f1_1b_pfaff_series(double b, double z) {
  check_hyp_domain(b, z);
  // ₂F₁(1, b; b+1; z) = (1 - z)^{-1} ₂F₁(1, 1; b+1; w),  w = z / (z - 1) ∈ [0, 1).
  const double w = z / (z - 1.0);
  double term = 1.0;
  double sum = 1.0;
  for (long n = 0; n < kSeriesMaxTerms; ++n) {
    const double dn = static_cast<double>(n);
    term *= (dn + 1.0) / (b + 1.0 + dn) * w;
    sum += term;
    if (term < kSeriesEps * sum) return sum / (1.0 - z);
  }
  throw ConvergenceError("hyp2f1_1b_pfaff_series: series did not converge", sum / (1.0 - z), term);
}

double hyp2f1_1b_integral(double b, double z) {
  check_hyp_domain(b, z);
  if (z == 0.0) return 1.0;
  // b ∫₀¹ t^{b-1}/(1 + x t) dt with t = u^{1/b} becomes ∫₀¹ du / (1 + x u^{1/b}).
  const double x = -z;
  const double inv_b = 1.0 / b;
  auto integrand = [x, inv_b](double u) { return 1.0 / (1.0 + x * std::pow(u, inv_b)); };
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-13;
  cfg.abs_tol = 1e-300;
  cfg.max_subdivisions = 400;
  // The integrand drops from 1 to 1/2 around u = x^{-b}; geometric breakpoints
  // from there keep each panel smooth.
  double knee = std::min(1.0, std::pow(x, -b));
  double total = integrate(integrand, 0.0, knee, cfg);
  while (knee < 1.0) {
    const double next = std::min(1.0, knee * 16.0);
    total += integrate(integrand, knee, next, cfg);
    knee = next;
  }
  return total;
}

}  // namespace detail

double hyp2f1_1b(double b, double z) {
  check_hyp_domain(b, z);
  if (z == 0.0) return 1.0;
  if (z > -0.5) return detail::hyp2f1_1b_direct_series(b, z);
  if (z >= -9.0) return detail::hyp2f1_1b_pfaff_series(b, z);  // w <= 0.9
  if (b == 1.0) return std::log1p(-z) / (-z);
  return detail::hyp2f1_1b_integral(b, z);
}

double integrate(const RealFunction& f, double a, double b, const QuadratureConfig& cfg) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("integrate: bounds must be finite");
  if (b < a) return -adaptive_gk(f, b, a, cfg);
  return adaptive_gk(f, a, b, cfg);
}

double integrate_semi_infinite(const RealFunction& f, double lower, const QuadratureConfig& cfg) {
  if (!std::isfinite(lower)) throw std::invalid_argument("integrate_semi_infinite: lower bound must be finite");
  auto mapped = [&f, lower](double t) {
    const double x = lower + (1.0 - t) / t;
    return f(x) / (t * t);
  };
  return adaptive_gk(mapped, 0.0, 1.0, cfg);
}

}  // namespace secache
