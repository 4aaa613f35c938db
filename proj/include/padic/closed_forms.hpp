#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "padic/discrete_operator.hpp"
#include "padic/grid.hpp"
#include "padic/special_functions.hpp"

namespace padic {

struct ConstantSolution {
  double c = 0.0;
};
/// exp(ln p / (2(p-1)) + (p-1) t^2 / (2 p ln p)).
struct GrowingSolution {
  int p = 2;
};
/// exp(ln p / (2(p-1)) - (p-1) x^2 / (2 p ln p)).
struct SolitonSolution {
  int p = 2;
};
/// Product of solitons over the active spatial axes. Points carry the
/// total_space_dims - 1 spatial coordinates (time is not an argument: the
/// brane is constant along it); inactive axes do not enter the product.
struct QBraneSolution {
  int p = 2;
  std::vector<std::size_t> active_axes;
  int total_space_dims = 2;
};

using ClosedForm = std::variant<ConstantSolution, GrowingSolution, SolitonSolution, QBraneSolution>;

/// q-brane in d dimensions: worldvolume axes x_1..x_q, solitons along the
/// remaining d - 1 - q spatial axes. Throws unless 0 <= q <= d - 2.
QBraneSolution make_q_brane(int p, int q, int d);

/// Scalar kinds only; throws std::invalid_argument for a q-brane.
double evaluate(const ClosedForm& cf, double point);
/// Scalar kinds accept a single coordinate; a q-brane needs total_space_dims - 1.
double evaluate(const ClosedForm& cf, std::span<const double> point);

/// e^{ln p / (2(p-1))} = p^{1/(2(p-1))}, shared by the growing and soliton solutions.
double soliton_amplitude(int p);
/// (p-1) / (2 p ln p), the magnitude of the quadratic rate of both solutions.
double soliton_rate(int p);
/// Constants solving the equation: 0 and 1 always, -1 only for odd p.
bool constant_is_solution(int p, double c);

struct ConstantCheck {
  double c = 0.0;
  double residual = 0.0;  // sup |H * c - c^p| on the grid
  bool is_solution = false;
  bool expected = false;
};

struct ConstantReport {
  int p = 0;
  std::vector<ConstantCheck> checks;  // c = -1, 0, 1
  bool matches_parity = false;
};

/// Solutions are accepted at residual < 1e-11.
ConstantReport verify_constant_fixed_points(int p, const FullLineOperator& op);

struct SolitonReport {
  int p = 0;
  double sup_residual = 0.0;       // sup |H * psi^p - psi| on the grid
  double centre_value = 0.0;       // psi(0)
  double centre_convolved = 0.0;   // (H * psi^p)(0)
  /// |p^{-1/2} e^{p ln p/(2(p-1))} - e^{ln p/(2(p-1))}| / e^{ln p/(2(p-1))}.
  double amplitude_identity_error = 0.0;
  GaussianExponent symbolic;       // H * psi^p by Gaussian algebra
  double symbolic_amplitude_error = 0.0;  // relative
  double symbolic_rate_error = 0.0;       // relative
  bool passed = false;
};

/// Smallest half width with psi^p negligible at the edges: 8 sqrt(p ln p / (p-1)).
double soliton_min_half_width(int p);

/// Checks psi = H * psi^p on a full-line grid (unscaled units, tails 0).
/// Throws std::invalid_argument for a half-line grid or one narrower than
/// soliton_min_half_width(p). Passes at residual <= 1e-9, identity <= 1e-14
/// and symbolic errors <= 1e-13.
SolitonReport verify_soliton(int p, const Grid& grid, Method method = Method::fft);

struct GrowingReport {
  int p = 0;
  double alpha = 0.0;  // 1 / (2 ln p)
  double beta = 0.0;   // (p-1) / (2 p ln p)
  GaussianExponent convolved;  // H * Phi
  GaussianExponent power;      // Phi^p
  double amplitude_error = 0.0;  // relative
  double rate_error = 0.0;       // relative
  bool passed = false;
  std::string diagnostic;
};

/// Symbolic check of H * Phi = Phi^p for the growing solution. The growing
/// Gaussian cannot be convolved on a truncated grid, so no grid is involved.
GrowingReport verify_growing_solution(int p);

struct QBraneReport {
  int p = 0;
  int q = 0;
  int d = 0;
  int transverse_dims = 0;
  double axis_residual = 0.0;       // verify_soliton on the given grid
  double accumulated_bound = 0.0;   // m r (psi(0) + r)^(m-1)
  /// Points per axis of the tensor check; 0 when random sampling was used.
  std::size_t tensor_points = 0;
  std::size_t sample_points = 0;
  double total_residual = 0.0;      // |prod psi - (H x...x H) * prod psi^p|
  double total_bound = 0.0;         // accumulated bound for the grid actually used
  double separability_error = 0.0;  // axis-by-axis application vs product of 1-D results
  double product_evaluation_error = 0.0;
  double origin_value = 0.0;
  double origin_expected = 0.0;     // p^{(d-1-q) / (2(p-1))}
  bool worldvolume_constant = false;
  bool passed = false;
};

/// Separability check of the q-brane built from solitons on the given 1-D grid.
/// For d <= 6 the operator is applied axis by axis on a tensor grid with
/// max(17, (2e6)^(1/m)) points per axis (capped by the grid); beyond that,
/// the residual is sampled at random points. Throws std::invalid_argument
/// unless 0 <= q <= d - 2.
QBraneReport verify_q_brane(int p, int q, int d, const Grid& grid, std::uint64_t seed = 2024);

}  // namespace padic
