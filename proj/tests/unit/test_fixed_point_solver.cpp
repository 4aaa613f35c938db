#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "padic/fixed_point_solver.hpp"
#include "padic/special_functions.hpp"

using namespace padic;

namespace {

SolverConfig kink_config(int p, std::size_t points = 4097, Method m = Method::fft) {
  SolverConfig c;
  c.p = p;
  c.grid = Grid::half_line(8.0, points);
  c.method = m;
  return c;
}

}  // namespace

TEST_CASE("f_at_zero matches the adaptive-quadrature oracle") {
  // tests/oracles/compute_oracles.py
  CHECK(std::abs(f_at_zero(2) - 0.8259072843747086548) < 1e-13);
  CHECK(std::abs(f_at_zero(3) - 0.87608673656968558911) < 1e-13);
  CHECK(std::abs(f_at_zero(5) - 0.92138210923578567101) < 1e-13);
  CHECK(std::abs(f_at_zero(17) - 0.97537428555566786588) < 1e-13);
  CHECK(std::abs(f_at_zero(1001) - 0.99957031137016651046) < 1e-13);
  double previous = 0.0;
  for (int p : {2, 3, 5, 17, 101, 1001}) {
    const double f = f_at_zero(p);
    CHECK(f < 1.0);
    CHECK(f > previous);
    previous = f;
  }
  CHECK_THROWS_AS(f_at_zero(1), std::invalid_argument);
}

TEST_CASE("first step from 1 is erf^(1/p)") {
  for (int p : {3, 5, 7}) {
    SolverConfig c = kink_config(p, 2049, Method::direct);
    c.max_iterations = 1;
    const Solution s = iterate_half_line(c);
    double err = 0.0;
    for (std::size_t i = 0; i < c.grid.points(); ++i) {
      err = std::max(err, std::abs(s.profile.values[i] - std::pow(padic::erf(c.grid.node(i)), 1.0 / p)));
    }
    CHECK(err < 1e-12);
    CHECK(s.trace.iterations_used == 1);
    CHECK_FALSE(s.trace.converged);
    CHECK(s.trace.termination == Termination::max_iterations);
  }
}

TEST_CASE("p = 3 kink converges with monotone bracketing") {
  const SolverConfig c = kink_config(3);
  const Solution s = iterate_half_line(c);
  const IterationTrace& t = s.trace;
  REQUIRE(t.converged);
  CHECK(t.termination == Termination::converged);
  CHECK(t.iterations_used <= 40);
  CHECK(t.sup_diffs.back() < c.tolerance);
  CHECK(t.final_residual <= 10.0 * c.tolerance);
  CHECK(t.monotone_violations == 0);
  CHECK(t.lower_bracket_violations == 0);
  CHECK(t.sigma_estimate > 0.0);
  CHECK(t.sigma_estimate < 1.0);
  CHECK(check_rate_bound(t));
  for (double m : t.sup_abs) CHECK(m <= 1.0 + 1e-12);
  CHECK(s.profile.values.front() == 0.0);
  CHECK(std::abs(s.profile.values.back() - 1.0) < 1e-6);
  for (double v : s.profile.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }

  SUBCASE("rate bounds shrink by exactly p per step") {
    for (std::size_t n = 1; n < t.rate_bounds.size(); ++n) {
      CHECK(t.rate_bounds[n] == doctest::Approx(t.rate_bounds[n - 1] / 3.0).epsilon(1e-14));
      CHECK(t.rate_bounds_safe[n] == doctest::Approx(3.0 * t.rate_bounds[n]).epsilon(1e-14));
    }
  }
}

TEST_CASE("direct and FFT solves agree") {
  const Solution a = iterate_half_line(kink_config(3, 2049, Method::direct));
  const Solution b = iterate_half_line(kink_config(3, 2049, Method::fft));
  REQUIRE(a.trace.converged);
  REQUIRE(b.trace.converged);
  CHECK(sup_distance(a.profile.values, b.profile.values) < 1e-10);
}

TEST_CASE("sigma estimate and the ratio f = phi2^p / phi1^p") {
  const int p = 3;
  SolverConfig c = kink_config(p, 4097, Method::direct);
  c.max_iterations = 1;
  const Profile phi1 = iterate_half_line(c).profile;
  c.max_iterations = 2;
  const Profile phi2 = iterate_half_line(c).profile;
  const double sigma = estimate_sigma(phi1, phi2, p);
  CHECK(sigma > 0.0);
  CHECK(sigma < 1.0);
  for (std::size_t i = 0; i < c.grid.points(); ++i) {
    CHECK(sigma * phi1.values[i] <= phi2.values[i] + 1e-12);
    CHECK(phi2.values[i] <= phi1.values[i] + 1e-12);
  }
  auto f = [&](std::size_t i) { return std::pow(phi2.values[i] / phi1.values[i], p); };
  CHECK(std::abs(f(c.grid.points() - 1) - 1.0) < 1e-6);
  // Quadratic extrapolation to t = 0 from the first interior nodes (f is even in t).
  const double h = c.grid.spacing();
  const std::size_t i1 = 40, i2 = 80;
  const double t1 = i1 * h, t2 = i2 * h;
  const double f0 = (t2 * t2 * f(i1) - t1 * t1 * f(i2)) / (t2 * t2 - t1 * t1);
  CHECK(std::abs(f0 - f_at_zero(p)) < 2e-4);
}

TEST_CASE("check_rate_bound compares every step from n = 1") {
  IterationTrace t;
  t.sup_diffs = {1.0, 0.1, 0.01, 0.001};
  t.rate_bounds = {0.6, 0.2, 0.2 / 3.0, 0.2 / 9.0};
  CHECK(check_rate_bound(t));
  t.sup_diffs[2] = 0.1;
  CHECK_FALSE(check_rate_bound(t));
  t.sup_diffs[2] = 0.01;
  t.sup_diffs[0] = 5.0;  // n = 0 is outside the bound
  CHECK(check_rate_bound(t));
  t.rate_bounds.clear();
  CHECK_FALSE(check_rate_bound(t));
}

TEST_CASE("half-line input validation") {
  CHECK_THROWS_AS(iterate_half_line(kink_config(2)), std::invalid_argument);
  SolverConfig c = kink_config(3, 65);
  c.grid = Grid::full_line(8.0, 65);
  CHECK_THROWS_AS(iterate_half_line(c), std::invalid_argument);
  c = kink_config(3, 65);
  c.tolerance = 0.0;
  CHECK_THROWS_AS(iterate_half_line(c), std::invalid_argument);
  c = kink_config(3, 65);
  c.seed = Profile::half_line(c.grid, std::vector<double>(65, 1.0), 0.5);
  CHECK_THROWS_AS(iterate_half_line(c), std::invalid_argument);
  std::vector<double> negative(65, 1.0);
  negative[3] = -0.1;
  c.seed = Profile::half_line(c.grid, negative, 1.0);
  CHECK_THROWS_AS(iterate_half_line(c), std::invalid_argument);
}

TEST_CASE("phi_n(0) = 0 for every iterate") {
  SolverConfig c = kink_config(3, 513);
  for (int n = 1; n <= 5; ++n) {
    c.max_iterations = n;
    CHECK(iterate_half_line(c).profile.values.front() == 0.0);
  }
}

TEST_CASE("reconstruction is odd") {
  const Grid g = Grid::half_line(8.0, 129);
  std::vector<double> v(g.points());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::tanh(g.node(i));
  const Profile full = reconstruct_full_solution(Profile::half_line(g, v, 1.0), 5);
  const std::size_t n = full.grid.points();
  CHECK(n == 2 * g.points() - 1);
  CHECK(full.grid.half_width() == doctest::Approx(8.0 * rescale_factor(5)));
  CHECK(full.values[n / 2] == 0.0);
  for (std::size_t i = 0; i < n; ++i) CHECK(full.values[i] == -full.values[n - 1 - i]);
  CHECK(full.left_tail == -1.0);
  CHECK(full.right_tail == 1.0);
}

TEST_CASE("full line: constant 1 is a fixed point for p = 2") {
  SolverConfig c;
  c.p = 2;
  c.grid = Grid::full_line(10.0, 1025);
  c.seed = ConstantOneSeed{};
  const Solution s = iterate_full_line(c);
  CHECK(s.trace.converged);
  CHECK(s.trace.iterations_used == 1);
  for (double v : s.profile.values) CHECK(std::abs(v - 1.0) < 1e-15);
}

TEST_CASE("full line from sgn matches the half-line kink") {
  const Solution half = iterate_half_line(kink_config(3, 1025));
  SolverConfig c;
  c.p = 3;
  c.grid = mirrored_full_grid(half.profile.grid, 3);
  c.seed = SignStepSeed{};
  c.method = Method::fft;
  const Solution full = iterate_full_line(c);
  REQUIRE(half.trace.converged);
  REQUIRE(full.trace.converged);
  const Profile reference = reconstruct_full_solution(half.profile, 3);
  CHECK(sup_distance(full.profile.values, reference.values) < 1e-8);
  for (double m : full.trace.sup_abs) CHECK(m <= 1.0 + 1e-12);
}

TEST_CASE("positive seeds with limits 1 relax to the constant 1") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid g = Grid::full_line(8.0 * rescale_factor(3), 1025);
  for (int k = 0; k < 3; ++k) {
    const double w = 0.5 + 2.0 * u(rng), phase = 6.0 * u(rng);
    std::vector<double> v(g.points());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.65 + 0.35 * std::sin(w * g.node(i) + phase);
    SolverConfig c;
    c.p = 3;
    c.grid = g;
    c.seed = Profile(g, v, 1.0, 1.0);
    const Solution s = iterate_full_line(c);
    CHECK(s.trace.converged);
    for (double x : s.profile.values) REQUIRE(std::abs(x - 1.0) < 1e-8);
  }
}

TEST_CASE("p = 2 with limits (0, 1) trips the non-convergence proxy") {
  const Grid g = Grid::full_line(8.0 * rescale_factor(2), 1025);
  std::vector<double> v(g.points());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (1.0 + std::tanh(g.node(i)));
  SolverConfig c;
  c.p = 2;
  c.grid = g;
  c.seed = Profile(g, v, 0.0, 1.0);
  const Solution s = iterate_full_line(c);
  CHECK_FALSE(s.trace.converged);
  CHECK(s.trace.nonconvergence_proxy);
  CHECK(s.trace.left_tail_drift > 0.05);
}

TEST_CASE("even p keeps the seed's sign field") {
  SolverConfig c;
  c.p = 2;
  c.grid = Grid::full_line(8.0, 513);
  c.seed = SignStepSeed{};
  c.max_iterations = 20;
  const Solution s = iterate_full_line(c);
  const std::size_t n = c.grid.points();
  for (std::size_t i = 0; i < n / 2; ++i) CHECK(s.profile.values[i] <= 0.0);
  for (std::size_t i = n / 2; i < n; ++i) CHECK(s.profile.values[i] >= 0.0);
  CHECK_FALSE(s.trace.residual_decreasing);
  CHECK(s.trace.residuals.size() == static_cast<std::size_t>(s.trace.iterations_used) + 1);
}

TEST_CASE("even p aborts when the positive branch meets a negative convolution") {
  SolverConfig c;
  c.p = 2;
  c.grid = Grid::full_line(8.0, 257);
  std::vector<double> v(257, -1.0);
  v[128] = 1.0;
  c.seed = Profile(c.grid, v, -1.0, -1.0);
  const Solution s = iterate_full_line(c);
  CHECK(s.trace.termination == Termination::branch_violation);
  CHECK(s.trace.diagnostic.find("branch") != std::string::npos);
  CHECK_FALSE(s.trace.converged);
}

TEST_CASE("even p lists sign changes of the convolution slope") {
  SolverConfig c;
  c.p = 2;
  c.grid = Grid::full_line(8.0, 513);
  std::vector<double> v(513);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 + 0.5 * std::exp(-c.grid.node(i) * c.grid.node(i));
  c.seed = Profile(c.grid, v, 0.5, 0.5);
  c.max_iterations = 3;
  const Solution s = iterate_full_line(c);
  REQUIRE(s.trace.branch_point_candidates.size() == 1);
  CHECK(s.trace.branch_point_candidates[0] == 0.0);
}
