#pragma once

#include <memory>
#include <span>
#include <vector>

#include "padic/grid.hpp"

namespace padic {

enum class Method { direct, fft };

/// How the direct path stores its weights. `automatic` materializes the
/// N x N weighted kernel for N <= dense_storage_limit and evaluates rows from
/// a kernel table otherwise. Both modes sum in the same order and give
/// bit-identical results.
enum class Storage { automatic, dense, matrix_free };

inline constexpr std::size_t dense_storage_limit = 2049;

namespace detail {
class TrapezoidConvolution;
}

/// sqrt(2 ln p): unscaled time = rescaled time * rescale_factor(p).
double rescale_factor(int p);

/// Heat kernel of the equation, (2 pi ln p)^{-1/2} exp(-u^2 / (2 ln p)).
/// Throws std::invalid_argument for p < 2.
double kernel_H(int p, double u);

/// Half-line kernel in rescaled units, (e^{-(t-tau)^2} - e^{-(t+tau)^2}) / sqrt(pi).
/// Throws std::invalid_argument for negative arguments.
double kernel_K(double t, double tau);

/// Closed-form mass of K(t, .) beyond the truncation radius,
/// (erfc(T - t) - erfc(T + t)) / 2.
double analytic_half_line_tail(double t, double half_width);

/// Discretization of phi -> integral_0^inf K(t, tau) phi(tau) dtau on a
/// half-line grid in rescaled units.
///
/// Trapezoid weights on [0, T]; past T the profile is taken equal to its
/// right tail and summed on the continued grid, which keeps the rule
/// spectrally accurate up to the truncation edge. The weight of the node
/// tau = 0 is fixed so that the constant profile 1 maps to erf(t) exactly:
/// the odd extension of a profile with phi(0) != 0 jumps at the origin, and
/// the plain trapezoid rule would be only second-order accurate there.
class HalfLineOperator {
 public:
  HalfLineOperator(int p, const Grid& grid, Storage storage = Storage::automatic);
  ~HalfLineOperator();
  HalfLineOperator(HalfLineOperator&&) noexcept;
  HalfLineOperator& operator=(HalfLineOperator&&) noexcept;

  int p() const { return p_; }
  const Grid& grid() const { return grid_; }
  bool dense() const { return !matrix_.empty(); }

  /// Trapezoid weights h/2, h, ..., h, h/2.
  std::span<const double> quadrature_weights() const { return weights_; }
  /// Extended-grid trapezoidal value of integral_T^inf K(t_i, tau) dtau.
  std::span<const double> tail_coefficients() const { return tails_; }
  /// Weight of phi(0) in row i (constant reproduction).
  std::span<const double> origin_weights() const { return origin_weights_; }

  Profile apply(const Profile& prof) const;
  /// Same operator through the odd extension and a full-line FFT.
  Profile apply_fft(const Profile& prof) const;
  Profile apply(const Profile& prof, Method method) const {
    return method == Method::fft ? apply_fft(prof) : apply(prof);
  }

 private:
  void check(const Profile& prof) const;
  double row_sum(std::size_t i, std::span<const double> v) const;

  int p_;
  Grid grid_;
  std::vector<double> weights_;
  std::vector<double> tails_;
  std::vector<double> origin_weights_;
  std::vector<double> kernel_;  // h e^{-(m h)^2}/sqrt(pi), m = 0 .. 2N-2
  std::vector<double> matrix_;  // row-major, empty when matrix-free
  std::unique_ptr<detail::TrapezoidConvolution> odd_extension_;
};

HalfLineOperator build_half_line_operator(int p, const Grid& grid);

/// Discretization of Phi -> integral H(t - tau) Phi(tau) dtau on a full-line
/// grid in unscaled units, with the declared tails continued past +-T.
class FullLineOperator {
 public:
  FullLineOperator(int p, const Grid& grid, Method method = Method::direct,
                   Storage storage = Storage::automatic);
  ~FullLineOperator();
  FullLineOperator(FullLineOperator&&) noexcept;
  FullLineOperator& operator=(FullLineOperator&&) noexcept;

  int p() const { return p_; }
  const Grid& grid() const { return grid_; }
  Method method() const { return method_; }
  bool dense() const;

  std::vector<double> tail_coefficients_left() const;
  std::vector<double> tail_coefficients_right() const;

  /// Dispatches on method().
  Profile apply(const Profile& prof) const;
  Profile apply_direct(const Profile& prof) const;
  Profile apply_fft(const Profile& prof) const;

 private:
  void check(const Profile& prof) const;

  int p_;
  Grid grid_;
  Method method_;
  std::unique_ptr<detail::TrapezoidConvolution> engine_;
};

inline Profile apply(const HalfLineOperator& op, const Profile& prof) { return op.apply(prof); }
inline Profile apply(const FullLineOperator& op, const Profile& prof) { return op.apply(prof); }
inline Profile apply_fft(const FullLineOperator& op, const Profile& prof) {
  return op.apply_fft(prof);
}

}  // namespace padic
