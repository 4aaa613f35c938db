#include "padic/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace padic {

namespace {

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;

// exp(-t^2) without the t^2 rounding error, which exp would amplify by t^2:
// the 20-bit head of t squares exactly.
double exp_minus_square(double t) {
  const double hi = std::ldexp(std::trunc(std::ldexp(t, 20)), -20);
  const double lo = t - hi;
  return std::exp(-hi * hi) * std::exp(-(2.0 * hi + lo) * lo);
}

// Maclaurin series t * sum_n (-t^2)^n / (n! (2n+1)) by Horner; |t| <= 1, where 22
// terms reach 1e-22.
double erf_maclaurin(double t) {
  constexpr auto coefficients = [] {
    std::array<double, 22> c{};
    double factorial = 1.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
      if (n > 0) factorial *= static_cast<double>(n);
      c[n] = 1.0 / (factorial * static_cast<double>(2 * n + 1));
    }
    return c;
  }();
  const double u = -t * t;
  double sum = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) sum = sum * u + *it;
  return kTwoOverSqrtPi * t * sum;
}

// Laplace continued fraction
//   erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz algorithm. x > 1.
double erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return exp_minus_square(x) * std::numbers::inv_sqrtpi / f;
}

}  // namespace

double GaussianExponent::operator()(double t) const {
  return coefficient * std::exp(rate * t * t);
}

double erf(double t) {
  if (std::isnan(t)) return t;
  const double a = std::abs(t);
  const double value = a <= 1.0 ? erf_maclaurin(a) : 1.0 - erfc_continued_fraction(a);
  return t < 0.0 ? -value : value;
}

double erfc_tail(double t) {
  if (std::isnan(t)) return t;
  if (t < 0.0) return 1.0 + erf(-t);
  if (t <= 1.0) return 1.0 - erf_maclaurin(t);
  return erfc_continued_fraction(t);
}

GaussianExponent gaussian_convolve_closed_form(const GaussianExponent& a,
                                               const GaussianExponent& b) {
  const double alpha = -a.rate;
  const double beta = b.rate;
  if (!(alpha > beta)) {
    throw std::invalid_argument(
        "gaussian_convolve_closed_form: convolution diverges unless -a.rate > b.rate");
  }
  const double gap = alpha - beta;
  return {a.coefficient * b.coefficient * std::sqrt(std::numbers::pi / gap),
          alpha * beta / gap};
}

bool sigma_inequality_check(double sigma, double alpha) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw std::invalid_argument("sigma_inequality_check: sigma must lie in (0, 1)");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("sigma_inequality_check: alpha must be positive");
  }
  // 1 - sigma^alpha = -expm1(alpha ln sigma), evaluated without cancellation.
  const double log_sigma = std::log(sigma);
  return -std::expm1(alpha * log_sigma) < -alpha * log_sigma;
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a,
                           double b, double tolerance) {
  const double half = 0.5 * (b - a);
  constexpr double half_pi = 0.5 * std::numbers::pi;
  constexpr double s_max = 4.5;

  // Node at parameter s, placed by its distance to the nearer endpoint so that
  // abscissae next to a singular endpoint are never rounded onto it.
  auto node_contribution = [&](double s) {
    const double u = half_pi * std::sinh(s);
    const double cu = std::cosh(u);
    const double weight = half * half_pi * std::cosh(s) / (cu * cu);
    if (weight == 0.0) return 0.0;
    const double x = s < 0.0 ? a + 2.0 * half / (1.0 + std::exp(-2.0 * u))
                             : b - 2.0 * half / (1.0 + std::exp(2.0 * u));
    if (x <= a || x >= b) return 0.0;
    return weight * f(x);
  };

  double step = 1.0;
  double sum = node_contribution(0.0);
  for (int k = 1; k * step <= s_max; ++k) {
    sum += node_contribution(k * step) + node_contribution(-k * step);
  }
  double estimate = step * sum;

  for (int level = 1; level <= 12; ++level) {
    step *= 0.5;
    for (int k = 1; k * step <= s_max; k += 2) {
      sum += node_contribution(k * step) + node_contribution(-k * step);
    }
    const double refined = step * sum;
    if (std::abs(refined - estimate) < tolerance && level >= 3) return refined;
    estimate = refined;
  }
  return estimate;
}

}  // namespace padic
