#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "padic/discrete_operator.hpp"
#include "padic/grid.hpp"

namespace padic {

struct ConstantOneSeed {};
struct SignStepSeed {};
using Seed = std::variant<ConstantOneSeed, SignStepSeed, Profile>;

struct SolverConfig {
  int p = 3;
  Grid grid = Grid::half_line(8.0, 4097);
  double tolerance = 1e-10;
  int max_iterations = 60;
  Method method = Method::direct;
  Seed seed = ConstantOneSeed{};
  Storage storage = Storage::automatic;
};

enum class Termination {
  converged,
  max_iterations,
  residual_too_large,   // successive differences settled, the equation did not
  tail_mismatch,        // settled on a profile that violates the declared limits
  quadrature_breakdown,
  branch_violation,
  non_finite,
};

const char* to_string(Termination t);

/// Diagnostics of one run. Index n of sup_diffs, residuals and rate_bounds
/// refers to the step phi_n -> phi_{n+1}, with phi_0 the seed.
struct IterationTrace {
  std::vector<double> sup_diffs;
  /// ||A phi_n - phi_n^p||_inf, the defect of the algebraic equation for phi_n.
  std::vector<double> residuals;
  /// sup |phi_n| of every iterate, seed included.
  std::vector<double> sup_abs;
  /// (-ln sigma_hat) / p^(n-1); empty when sigma_hat was not estimated.
  std::vector<double> rate_bounds;
  /// Same bound with the conservative sigma_hat^p.
  std::vector<double> rate_bounds_safe;
  double sigma_estimate = 0.0;  // 0 when not estimated
  bool converged = false;
  int iterations_used = 0;
  /// Points with phi_{n+1} > phi_n + 1e-12, summed over n >= 1.
  int monotone_violations = 0;
  /// Points with sigma_hat^(1/p^(n-1)) phi_n > phi_{n+1} + 1e-12, n >= 1.
  int lower_bracket_violations = 0;
  double final_residual = 0.0;
  Termination termination = Termination::max_iterations;
  std::string diagnostic;

  // Full-line runs only.
  double left_tail_drift = 0.0;
  double right_tail_drift = 0.0;
  /// min of residuals over the last (up to) 10 iterations.
  double residual_floor = 0.0;
  /// residual floor > 1e-3 or left-tail drift > 0.05.
  bool nonconvergence_proxy = false;
  /// Even p: whether the residual of Phi^p = F kept shrinking over the last iterations.
  bool residual_decreasing = false;
  /// Even p: nodes where the discrete slope of F = H * Phi changes sign (slopes
  /// below 1e-13 sup|F| are ignored as rounding).
  std::vector<double> branch_point_candidates;
};

struct Solution {
  Profile profile;
  IterationTrace trace;
};

/// Odd-p kink on the half line, rescaled units:
///   phi_n = (integral_0^inf K(t, tau) phi_{n-1}(tau) dtau)^(1/p), phi_0 = 1.
/// Throws std::invalid_argument for even p, a full-line grid, or an invalid
/// seed. Numerical failures end the run and are reported in the trace.
Solution iterate_half_line(const SolverConfig& config);

/// Full-line iteration Phi_n = root_p(H * Phi_{n-1}) in unscaled units.
/// Odd p takes the real odd root. Even p keeps the sign of the seed at every
/// node (zero counts as +) and takes |H * Phi|^(1/p) with that sign.
Solution iterate_full_line(const SolverConfig& config);

/// sigma_hat = (min_t phi2^p / phi1^p)^(1/p). Nodes with t < 4h use the
/// analytic limit f_at_zero(p) instead of the ratio.
double estimate_sigma(const Profile& phi1, const Profile& phi2, int p);

/// lim_{t->0} phi2^p / phi1^p = 2 integral_0^inf e^{-tau^2} tau erf(tau)^(1/p) dtau.
double f_at_zero(int p);

/// sup_diffs[n] <= rate_bounds[n] for every recorded n >= 1.
bool check_rate_bound(const IterationTrace& trace);

/// Odd full-line profile Phi(t) = sign(t) phi(|t| / sqrt(2 ln p)) on the
/// mirrored grid with 2N - 1 points and half width T sqrt(2 ln p); tails (-1, 1).
Profile reconstruct_full_solution(const Profile& phi, int p);

/// The half-line grid in rescaled units mirrored onto the unscaled full line.
Grid mirrored_full_grid(const Grid& half_line_grid, int p);

}  // namespace padic
