#pragma once

// Internal engine shared by the half-line and full-line operators: trapezoid
// rule for the convolution with a centred Gaussian on a uniform symmetric grid,
// extended past the truncation radius by the declared constant tails.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "padic/discrete_operator.hpp"

namespace padic::detail {

/// Samples h*G(m h) of the Gaussian G with the given variance, m >= 0, and
/// the extended-grid trapezoidal tail mass
///   tail(m) = h G(m h)/2 + sum_{k > m} h G(k h)  ~  integral_{m h}^inf G.
class KernelTable {
 public:
  KernelTable(double variance, double spacing, std::size_t max_index);

  double sample(std::size_t m) const { return m < samples_.size() ? samples_[m] : 0.0; }
  double tail(std::size_t m) const;
  double variance() const { return variance_; }
  double spacing() const { return spacing_; }

 private:
  double variance_;
  double spacing_;
  std::vector<double> samples_;
  std::vector<double> suffix_;  // suffix_[m] = sum_{k >= m} samples_[k]
};

class FftPlan;

class TrapezoidConvolution {
 public:
  TrapezoidConvolution(double variance, double spacing, std::size_t points, Storage storage);
  ~TrapezoidConvolution();
  TrapezoidConvolution(TrapezoidConvolution&&) noexcept;
  TrapezoidConvolution& operator=(TrapezoidConvolution&&) noexcept;

  std::size_t points() const { return points_; }
  bool dense() const { return !matrix_.empty(); }
  const KernelTable& table() const { return table_; }

  double tail_left(std::size_t i) const { return table_.tail(i); }
  double tail_right(std::size_t i) const { return table_.tail(points_ - 1 - i); }

  /// out_i = sum_j w_j h G(t_i - t_j) v_j + tail_left(i) L + tail_right(i) R.
  void apply_direct(std::span<const double> v, double left, double right,
                    std::span<double> out) const;

  /// Same sum through a zero-padded FFT with the symbol exp(-xi^2 variance/2).
  /// The declared tails are carried by a smooth erf step whose convolution is
  /// known in closed form; only the decaying remainder is transformed.
  void apply_fft(std::span<const double> v, double left, double right,
                 std::span<double> out) const;

 private:
  double node(std::size_t i) const;
  double weight(std::size_t j) const { return (j == 0 || j + 1 == points_) ? 0.5 : 1.0; }

  double variance_;
  double spacing_;
  std::size_t points_;
  KernelTable table_;
  std::vector<double> matrix_;  // row-major w_j h G(t_i - t_j), empty when matrix-free
  double step_width_;
  std::vector<double> symbol_;  // exp(-xi_k^2 variance/2) / M
  std::unique_ptr<FftPlan> fft_;
};

bool use_dense_storage(Storage storage, std::size_t points);

}  // namespace padic::detail
