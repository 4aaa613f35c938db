#include "padic/discrete_operator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "padic/special_functions.hpp"
#include "trapezoid_convolution.hpp"

namespace padic {

namespace {

void require_p(int p) {
  if (p < 2) {
    throw std::invalid_argument("p must be an integer >= 2, got " + std::to_string(p));
  }
}

}  // namespace

double rescale_factor(int p) {
  require_p(p);
  return std::sqrt(2.0 * std::log(static_cast<double>(p)));
}

double kernel_H(int p, double u) {
  require_p(p);
  const double log_p = std::log(static_cast<double>(p));
  return std::exp(-u * u / (2.0 * log_p)) / std::sqrt(2.0 * std::numbers::pi * log_p);
}

double kernel_K(double t, double tau) {
  if (t < 0.0 || tau < 0.0) {
    throw std::invalid_argument("kernel_K: arguments must be nonnegative");
  }
  // e^{-(t-tau)^2} (1 - e^{-4 t tau}), exact to relative precision near the axes.
  const double d = t - tau;
  return -std::exp(-d * d) * std::expm1(-4.0 * t * tau) * std::numbers::inv_sqrtpi;
}

double analytic_half_line_tail(double t, double half_width) {
  return 0.5 * (erfc_tail(half_width - t) - erfc_tail(half_width + t));
}

// ---------------------------------------------------------------------------
// HalfLineOperator

HalfLineOperator::HalfLineOperator(int p, const Grid& grid, Storage storage)
    : p_(p), grid_(grid) {
  require_p(p);
  if (grid.kind() != DomainKind::half_line) {
    throw std::invalid_argument("HalfLineOperator: grid must be a half-line grid");
  }
  const std::size_t n = grid.points();
  const double h = grid.spacing();

  // e^{-u^2}/sqrt(pi) is the centred Gaussian of variance 1/2.
  const detail::KernelTable table(0.5, h, 2 * n);
  kernel_.resize(2 * n - 1);
  for (std::size_t m = 0; m < kernel_.size(); ++m) kernel_[m] = table.sample(m);

  weights_.assign(n, h);
  weights_.front() = weights_.back() = 0.5 * h;

  tails_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    tails_[i] = table.tail(n - 1 - i) - table.tail(n - 1 + i);
  }

  // Row sums without the origin column fix the origin weight.
  origin_weights_.assign(n, 0.0);
  std::vector<double> unit(n, 1.0);
  unit[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    origin_weights_[i] = erf(grid.node(i)) - row_sum(i, unit) - tails_[i];
  }
  origin_weights_[0] = 0.0;

  if (detail::use_dense_storage(storage, n)) {
    matrix_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      double* row = matrix_.data() + i * n;
      row[0] = origin_weights_[i];
      for (std::size_t j = 1; j < n; ++j) {
        const std::size_t m = i > j ? i - j : j - i;
        const double w = (j + 1 == n) ? 0.5 : 1.0;
        row[j] = w * (kernel_[m] - kernel_[i + j]);
      }
    }
  }

  odd_extension_ = std::make_unique<detail::TrapezoidConvolution>(0.5, h, 2 * n - 1,
                                                                  Storage::matrix_free);
}

HalfLineOperator::~HalfLineOperator() = default;
HalfLineOperator::HalfLineOperator(HalfLineOperator&&) noexcept = default;
HalfLineOperator& HalfLineOperator::operator=(HalfLineOperator&&) noexcept = default;

double HalfLineOperator::row_sum(std::size_t i, std::span<const double> v) const {
  const std::size_t n = grid_.points();
  if (!matrix_.empty()) {
    const double* row = matrix_.data() + i * n;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += row[j] * v[j];
    return sum;
  }
  double sum = origin_weights_.empty() ? 0.0 : origin_weights_[i] * v[0];
  for (std::size_t j = 1; j < n; ++j) {
    const std::size_t m = i > j ? i - j : j - i;
    const double w = (j + 1 == n) ? 0.5 : 1.0;
    sum += (w * (kernel_[m] - kernel_[i + j])) * v[j];
  }
  return sum;
}

void HalfLineOperator::check(const Profile& prof) const {
  if (!(prof.grid == grid_)) {
    throw std::invalid_argument("HalfLineOperator: profile grid does not match operator grid");
  }
}

Profile HalfLineOperator::apply(const Profile& prof) const {
  check(prof);
  const std::size_t n = grid_.points();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = row_sum(i, prof.values) + tails_[i] * prof.right_tail;
  }
  return Profile(grid_, std::move(out), prof.left_tail, prof.right_tail);
}

Profile HalfLineOperator::apply_fft(const Profile& prof) const {
  check(prof);
  const std::size_t n = grid_.points();
  std::vector<double> extended(2 * n - 1);
  extended[n - 1] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    extended[n - 1 + i] = prof.values[i];
    extended[n - 1 - i] = -prof.values[i];
  }
  std::vector<double> result(2 * n - 1);
  odd_extension_->apply_fft(extended, -prof.right_tail, prof.right_tail, result);

  std::vector<double> out(n);
  // K(0, tau) = 0: the first row vanishes identically.
  out[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    out[i] = result[n - 1 + i] + origin_weights_[i] * prof.values[0];
  }
  return Profile(grid_, std::move(out), prof.left_tail, prof.right_tail);
}

HalfLineOperator build_half_line_operator(int p, const Grid& grid) {
  return HalfLineOperator(p, grid);
}

// ---------------------------------------------------------------------------
// FullLineOperator

FullLineOperator::FullLineOperator(int p, const Grid& grid, Method method, Storage storage)
    : p_(p), grid_(grid), method_(method) {
  require_p(p);
  if (grid.kind() != DomainKind::full_line) {
    throw std::invalid_argument("FullLineOperator: grid must be a full-line grid");
  }
  engine_ = std::make_unique<detail::TrapezoidConvolution>(
      std::log(static_cast<double>(p)), grid.spacing(), grid.points(), storage);
}

FullLineOperator::~FullLineOperator() = default;
FullLineOperator::FullLineOperator(FullLineOperator&&) noexcept = default;
FullLineOperator& FullLineOperator::operator=(FullLineOperator&&) noexcept = default;

bool FullLineOperator::dense() const { return engine_->dense(); }

std::vector<double> FullLineOperator::tail_coefficients_left() const {
  std::vector<double> t(grid_.points());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = engine_->tail_left(i);
  return t;
}

std::vector<double> FullLineOperator::tail_coefficients_right() const {
  std::vector<double> t(grid_.points());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = engine_->tail_right(i);
  return t;
}

void FullLineOperator::check(const Profile& prof) const {
  if (!(prof.grid == grid_)) {
    throw std::invalid_argument("FullLineOperator: profile grid does not match operator grid");
  }
}

Profile FullLineOperator::apply(const Profile& prof) const {
  return method_ == Method::fft ? apply_fft(prof) : apply_direct(prof);
}

Profile FullLineOperator::apply_direct(const Profile& prof) const {
  check(prof);
  std::vector<double> out(grid_.points());
  engine_->apply_direct(prof.values, prof.left_tail, prof.right_tail, out);
  return Profile(grid_, std::move(out), prof.left_tail, prof.right_tail);
}

Profile FullLineOperator::apply_fft(const Profile& prof) const {
  check(prof);
  std::vector<double> out(grid_.points());
  engine_->apply_fft(prof.values, prof.left_tail, prof.right_tail, out);
  return Profile(grid_, std::move(out), prof.left_tail, prof.right_tail);
}

}  // namespace padic
