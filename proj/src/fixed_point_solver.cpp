#include "padic/fixed_point_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "padic/special_functions.hpp"

namespace padic {

namespace {

constexpr double kRoundingGuard = 1e-12;
// Quadrature sums of O(1) profiles carry about 1e-15 of rounding noise; the
// p-th root would blow it up to noise^(1/p) at nodes where the exact value is 0.
constexpr double kRootNoiseFloor = 1e-13;
constexpr double kEdgeTolerance = 1e-6;
constexpr double kResidualFactor = 10.0;

double int_pow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

double residual_of(std::span<const double> convolved, std::span<const double> phi, int p) {
  double r = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    r = std::max(r, std::abs(convolved[i] - int_pow(phi[i], p)));
  }
  return r;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void validate_common(const SolverConfig& config) {
  if (config.p < 2) throw std::invalid_argument("p must be an integer >= 2");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

void fill_rate_bounds(IterationTrace& trace, int p) {
  if (!(trace.sigma_estimate > 0.0 && trace.sigma_estimate < 1.0)) return;
  const double log_sigma = std::log(trace.sigma_estimate);
  const double log_sigma_safe = p * log_sigma;
  trace.rate_bounds.clear();
  trace.rate_bounds_safe.clear();
  for (std::size_t n = 0; n < trace.sup_diffs.size(); ++n) {
    const double scale = std::pow(static_cast<double>(p), static_cast<double>(n) - 1.0);
    trace.rate_bounds.push_back(-log_sigma / scale);
    trace.rate_bounds_safe.push_back(-log_sigma_safe / scale);
  }
}

std::string at_node(const Grid& g, std::size_t i) {
  std::ostringstream os;
  os.precision(6);
  os << "t = " << g.node(i) << " (node " << i << ")";
  return os.str();
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::max_iterations:
      return "max_iterations";
    case Termination::residual_too_large:
      return "residual_too_large";
    case Termination::tail_mismatch:
      return "tail_mismatch";
    case Termination::quadrature_breakdown:
      return "quadrature_breakdown";
    case Termination::branch_violation:
      return "branch_violation";
    case Termination::non_finite:
      return "non_finite";
  }
  return "unknown";
}

double f_at_zero(int p) {
  if (p < 2) throw std::invalid_argument("f_at_zero: p must be >= 2");
  const double inv_p = 1.0 / p;
  auto integrand = [inv_p](double tau) {
    return std::exp(-tau * tau) * tau * std::pow(erf(tau), inv_p);
  };
  // integral_7^inf e^{-tau^2} tau dtau = e^{-49}/2 is far below double resolution.
  return 2.0 * integrate_tanh_sinh(integrand, 0.0, 7.0, 1e-16);
}

double estimate_sigma(const Profile& phi1, const Profile& phi2, int p) {
  if (phi1.grid.kind() != DomainKind::half_line || !(phi1.grid == phi2.grid)) {
    throw std::invalid_argument("estimate_sigma: both iterates must share one half-line grid");
  }
  const Grid& g = phi1.grid;
  const double guard = 4.0 * g.spacing();
  double delta = f_at_zero(p);
  for (std::size_t i = 0; i < g.points(); ++i) {
    if (g.node(i) < guard) continue;
    const double denominator = int_pow(phi1.values[i], p);
    if (!(denominator > 0.0)) continue;
    delta = std::min(delta, int_pow(phi2.values[i], p) / denominator);
  }
  const double sigma = std::pow(delta, 1.0 / p);
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw std::domain_error("estimate_sigma: estimate left (0, 1); iterates are not bracketed");
  }
  return sigma;
}

bool check_rate_bound(const IterationTrace& trace) {
  if (trace.rate_bounds.size() < trace.sup_diffs.size()) return false;
  for (std::size_t n = 1; n < trace.sup_diffs.size(); ++n) {
    if (!(trace.sup_diffs[n] <= trace.rate_bounds[n])) return false;
  }
  return true;
}

Grid mirrored_full_grid(const Grid& half_line_grid, int p) {
  if (half_line_grid.kind() != DomainKind::half_line) {
    throw std::invalid_argument("mirrored_full_grid: expected a half-line grid");
  }
  return Grid::full_line(half_line_grid.half_width() * rescale_factor(p),
                         2 * half_line_grid.points() - 1);
}

Profile reconstruct_full_solution(const Profile& phi, int p) {
  const Grid full = mirrored_full_grid(phi.grid, p);
  const std::size_t n = phi.grid.points();
  std::vector<double> values(full.points());
  values[n - 1] = phi.values[0];
  for (std::size_t i = 1; i < n; ++i) {
    values[n - 1 + i] = phi.values[i];
    values[n - 1 - i] = -phi.values[i];
  }
  return Profile(full, std::move(values), -1.0, 1.0);
}

// ---------------------------------------------------------------------------

Solution iterate_half_line(const SolverConfig& config) {
  validate_common(config);
  const int p = config.p;
  if (p % 2 == 0) {
    throw std::invalid_argument(
        "the half-line kink iteration requires odd p (the odd kink exists only for odd p), got p = " +
        std::to_string(p));
  }
  const Grid& grid = config.grid;
  if (grid.kind() != DomainKind::half_line) {
    throw std::invalid_argument("iterate_half_line: grid must be a half-line grid");
  }

  std::vector<double> seed(grid.points(), 1.0);
  if (std::holds_alternative<SignStepSeed>(config.seed)) {
    seed[0] = 0.0;
  } else if (const auto* custom = std::get_if<Profile>(&config.seed)) {
    if (!(custom->grid == grid)) {
      throw std::invalid_argument("iterate_half_line: seed grid does not match the solver grid");
    }
    if (custom->right_tail != 1.0) {
      throw std::invalid_argument("iterate_half_line: seed must have right tail 1");
    }
    if (std::any_of(custom->values.begin(), custom->values.end(), [](double x) { return x < 0.0; })) {
      throw std::invalid_argument("iterate_half_line: seed must be nonnegative");
    }
    seed = custom->values;
  }

  const HalfLineOperator op(p, grid, config.storage);
  const double inv_p = 1.0 / p;

  IterationTrace trace;
  Profile phi = Profile::half_line(grid, std::move(seed), 1.0);
  std::optional<Profile> first;
  trace.sup_abs.push_back(sup_norm(phi.values));
  bool settled = false;
  bool aborted = false;

  for (int n = 0; n < config.max_iterations; ++n) {
    const Profile convolved = op.apply(phi, config.method);
    const auto& f = convolved.values;
    if (!all_finite(f)) {
      trace.termination = Termination::non_finite;
      trace.diagnostic = "non-finite convolution value at iteration " + std::to_string(n + 1);
      aborted = true;
      break;
    }
    const auto lowest = std::min_element(f.begin(), f.end());
    if (*lowest < -kRoundingGuard) {
      const auto i = static_cast<std::size_t>(lowest - f.begin());
      std::ostringstream os;
      os << "quadrature breakdown: convolved value " << *lowest << " < -1e-12 at "
         << at_node(grid, i) << " in iteration " << n + 1;
      trace.termination = Termination::quadrature_breakdown;
      trace.diagnostic = os.str();
      aborted = true;
      break;
    }
    trace.residuals.push_back(residual_of(f, phi.values, p));

    std::vector<double> next(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) next[i] = std::pow(std::max(f[i], 0.0), inv_p);

    if (n >= 1) {
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (next[i] > phi.values[i] + kRoundingGuard) ++trace.monotone_violations;
      }
    }
    if (n == 1) {
      trace.sigma_estimate = estimate_sigma(*first, Profile::half_line(grid, next, 1.0), p);
    }
    if (n >= 1 && trace.sigma_estimate > 0.0) {
      const double lower = std::pow(trace.sigma_estimate, std::pow(inv_p, n - 1));
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (lower * phi.values[i] > next[i] + kRoundingGuard) ++trace.lower_bracket_violations;
      }
    }

    const double diff = sup_distance(next, phi.values);
    trace.sup_diffs.push_back(diff);
    phi = Profile::half_line(grid, std::move(next), 1.0);
    if (n == 0) first = phi;
    trace.sup_abs.push_back(sup_norm(phi.values));
    trace.iterations_used = n + 1;
    if (diff < config.tolerance) {
      settled = true;
      break;
    }
  }

  const Profile last = op.apply(phi, config.method);
  trace.final_residual = residual_of(last.values, phi.values, p);
  trace.residuals.push_back(trace.final_residual);
  fill_rate_bounds(trace, p);

  if (!aborted) {
    if (!settled) {
      trace.termination = Termination::max_iterations;
      trace.diagnostic = "no convergence within " + std::to_string(config.max_iterations) +
                         " iterations";
    } else if (trace.final_residual > kResidualFactor * config.tolerance) {
      trace.termination = Termination::residual_too_large;
      trace.diagnostic = "successive differences settled but the residual stayed large";
    } else {
      trace.termination = Termination::converged;
      trace.converged = true;
    }
  }
  return {std::move(phi), std::move(trace)};
}

// ---------------------------------------------------------------------------

Solution iterate_full_line(const SolverConfig& config) {
  validate_common(config);
  const int p = config.p;
  const Grid& grid = config.grid;
  if (grid.kind() != DomainKind::full_line) {
    throw std::invalid_argument("iterate_full_line: grid must be a full-line grid");
  }
  const std::size_t n_points = grid.points();

  std::vector<double> seed(n_points, 1.0);
  double left = 1.0;
  double right = 1.0;
  if (std::holds_alternative<SignStepSeed>(config.seed)) {
    for (std::size_t i = 0; i < n_points; ++i) {
      const double t = grid.node(i);
      seed[i] = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    }
    left = -1.0;
  } else if (const auto* custom = std::get_if<Profile>(&config.seed)) {
    if (!(custom->grid == grid)) {
      throw std::invalid_argument("iterate_full_line: seed grid does not match the solver grid");
    }
    seed = custom->values;
    left = custom->left_tail;
    right = custom->right_tail;
  }

  const bool even = p % 2 == 0;
  std::vector<double> branch(n_points, 1.0);
  if (even) {
    for (std::size_t i = 0; i < n_points; ++i) branch[i] = seed[i] < 0.0 ? -1.0 : 1.0;
  }

  const FullLineOperator op(p, grid, config.method, config.storage);
  const double inv_p = 1.0 / p;

  IterationTrace trace;
  Profile phi(grid, std::move(seed), left, right);
  trace.sup_abs.push_back(sup_norm(phi.values));
  bool settled = false;
  bool aborted = false;

  for (int n = 0; n < config.max_iterations && !aborted; ++n) {
    const Profile convolved = op.apply(phi);
    const auto& f = convolved.values;
    if (!all_finite(f)) {
      trace.termination = Termination::non_finite;
      trace.diagnostic = "non-finite convolution value at iteration " + std::to_string(n + 1);
      aborted = true;
      break;
    }
    trace.residuals.push_back(residual_of(f, phi.values, p));

    std::vector<double> next(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
      const double v = f[i];
      if (even && branch[i] > 0.0 && v < -kRoundingGuard) {
        std::ostringstream os;
        os << "branch violation: H * Phi = " << v << " < 0 on the positive branch at "
           << at_node(grid, i) << " in iteration " << n + 1;
        trace.termination = Termination::branch_violation;
        trace.diagnostic = os.str();
        aborted = true;
        break;
      }
      const double magnitude = std::abs(v) < kRootNoiseFloor ? 0.0 : std::pow(std::abs(v), inv_p);
      next[i] = even ? branch[i] * magnitude : std::copysign(magnitude, v);
    }
    if (aborted) break;

    const double diff = sup_distance(next, phi.values);
    trace.sup_diffs.push_back(diff);
    phi = Profile(grid, std::move(next), left, right);
    trace.sup_abs.push_back(sup_norm(phi.values));
    trace.iterations_used = n + 1;
    if (diff < config.tolerance) {
      settled = true;
      break;
    }
  }

  const Profile last = op.apply(phi);
  trace.final_residual = residual_of(last.values, phi.values, p);
  trace.residuals.push_back(trace.final_residual);

  trace.left_tail_drift = std::abs(phi.values.front() - left);
  trace.right_tail_drift = std::abs(phi.values.back() - right);
  const std::size_t window = std::min<std::size_t>(10, trace.residuals.size());
  const auto recent = trace.residuals.end() - static_cast<std::ptrdiff_t>(window);
  trace.residual_floor = *std::min_element(recent, trace.residuals.end());
  trace.residual_decreasing = trace.residuals.back() < 0.5 * *recent;
  trace.nonconvergence_proxy = trace.residual_floor > 1e-3 || trace.left_tail_drift > 0.05;

  if (even) {
    // Slopes at rounding level carry no sign; flat tails would otherwise
    // produce spurious candidates.
    const auto& f = last.values;
    const double noise = 1e-13 * std::max(1.0, sup_norm(f));
    int previous = 0;
    for (std::size_t i = 1; i < n_points; ++i) {
      const double slope = f[i] - f[i - 1];
      if (std::abs(slope) <= noise) continue;
      const int sign = slope > 0.0 ? 1 : -1;
      if (previous != 0 && sign != previous) trace.branch_point_candidates.push_back(grid.node(i - 1));
      previous = sign;
    }
  }

  if (!aborted) {
    if (!settled) {
      trace.termination = Termination::max_iterations;
      trace.diagnostic = "no convergence within " + std::to_string(config.max_iterations) +
                         " iterations";
    } else if (trace.final_residual > kResidualFactor * config.tolerance) {
      trace.termination = Termination::residual_too_large;
      trace.diagnostic = "successive differences settled but the residual stayed large";
    } else if (trace.left_tail_drift > kEdgeTolerance || trace.right_tail_drift > kEdgeTolerance) {
      trace.termination = Termination::tail_mismatch;
      trace.diagnostic = "settled profile does not reach the declared tails at the grid edges";
    } else {
      trace.termination = Termination::converged;
      trace.converged = true;
    }
  }
  return {std::move(phi), std::move(trace)};
}

}  // namespace padic
