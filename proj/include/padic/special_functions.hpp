#pragma once

#include <functional>

namespace padic {

/// A Gaussian amplitude * exp(rate * t^2).
///
/// The stored rate is the coefficient of +t^2 in the exponent: a decaying
/// Gaussian e^{-a t^2} has rate = -a, a growing one e^{+b t^2} has rate = +b.
/// Every function in this library that takes or returns a GaussianExponent
/// uses this single convention.
struct GaussianExponent {
  double coefficient = 1.0;
  double rate = 0.0;

  double operator()(double t) const;
};

/// Error function (2/sqrt(pi)) * integral_0^t exp(-x^2) dx.
///
/// Maclaurin series (Horner) for |t| <= 1 and the complementary continued
/// fraction beyond. Absolute error stays below 4e-16 on the whole real line.
double erf(double t);

/// 1 - erf(t) without cancellation for large positive t.
double erfc_tail(double t);

/// Closed-form convolution of two Gaussians,
///   (a * b)(t) = integral a(t - s) b(s) ds.
///
/// With alpha = -a.rate and beta = b.rate the integral converges iff
/// alpha > beta, and then
///   e^{-alpha t^2} * e^{beta t^2} = sqrt(pi/(alpha-beta)) e^{alpha beta/(alpha-beta) t^2}.
/// Throws std::invalid_argument when alpha <= beta.
GaussianExponent gaussian_convolve_closed_form(const GaussianExponent& a,
                                               const GaussianExponent& b);

/// True iff 1 - sigma^alpha < -alpha ln(sigma).
/// Requires 0 < sigma < 1 and alpha > 0; throws std::invalid_argument otherwise.
bool sigma_inequality_check(double sigma, double alpha);

/// Double-exponential (tanh-sinh) quadrature on the finite interval [a, b].
/// Tolerates integrable algebraic endpoint singularities. Refines the step
/// until two successive levels agree to `tolerance` (absolute).
double integrate_tanh_sinh(const std::function<double(double)>& f, double a,
                           double b, double tolerance = 1e-15);

}  // namespace padic
