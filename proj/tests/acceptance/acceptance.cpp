// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "padic/cli.hpp"
#include "padic/closed_forms.hpp"
#include "padic/discrete_operator.hpp"
#include "padic/fixed_point_solver.hpp"
#include "padic/special_functions.hpp"

using namespace padic;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  int id;
  std::string name;
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;
// Criterion 8 runs before 6 and 7, which reuse its trace; lines print in id order.
std::map<int, std::string> lines;

void report(Criterion& c) {
  char head[16];
  std::snprintf(head, sizeof head, "[%s] %2d ", c.pass ? "PASS" : "FAIL", c.id);
  lines[c.id] = head + c.name + ":" + c.detail.str();
  if (!c.pass) ++failures;
}

void guarded(Criterion& c, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(c);
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

// Shared between criteria 3-6 and 8.
struct KinkRuns {
  std::optional<Solution> direct;
  std::optional<Solution> fft;
  double direct_seconds = 0.0;
  double fft_seconds = 0.0;
};

SolverConfig kink_config(Method m) {
  SolverConfig c;
  c.p = 3;
  c.grid = Grid::half_line(8.0, 4097);
  c.tolerance = 1e-10;
  c.max_iterations = 60;
  c.method = m;
  return c;
}

}  // namespace

int main() {
  double first_iterate_max = 0.0;
  std::vector<double> full_line_sup_abs;

  {
    Criterion c{1, "constants obey the parity table"};
    guarded(c, [&] {
      for (int p : {2, 3, 5}) {
        cli::RunConfig rc;
        rc.command = cli::Command::verify_constants;
        rc.p = p;
        const auto start = Clock::now();
        const cli::RunOutcome out = cli::execute(rc);
        const double s = seconds_since(start);
        c.require(out.exit_code == 0, "exit code p=" + std::to_string(p));
        c.require(out.report["matches_parity"] == true, "parity p=" + std::to_string(p));
        double worst = 0.0;
        for (const auto& k : out.report["checks"]) {
          if (k["expected"] == true) worst = std::max(worst, k["residual"].get<double>());
        }
        c.require(worst < 1e-11, "residual p=" + std::to_string(p));
        c.require(s < 1.0, "runtime p=" + std::to_string(p));
        c.detail << " p=" << p << " solutions=" << out.report["solutions"].dump() << " res=" << worst
                 << " t=" << s << "s;";
      }
    });
  }

  {
    Criterion c{2, "first iterate is erf(t)^(1/p)"};
    guarded(c, [&] {
      for (int p : {3, 5, 7}) {
        cli::RunConfig rc;
        rc.command = cli::Command::first_iterate;
        rc.p = p;
        rc.method = Method::direct;
        const auto start = Clock::now();
        const cli::RunOutcome out = cli::execute(rc);
        const double s = seconds_since(start);
        const double err = out.report["sup_error"];
        c.require(err <= 1e-9, "error p=" + std::to_string(p));
        c.require(s < 2.0, "runtime p=" + std::to_string(p));
        first_iterate_max = std::max(first_iterate_max, sup_norm(out.profile->values));
        c.detail << " p=" << p << " err=" << err << " t=" << s << "s;";
      }
    });
  }

  KinkRuns kink;
  {
    Criterion c{3, "p=3 kink converges"};
    guarded(c, [&] {
      auto start = Clock::now();
      kink.direct = iterate_half_line(kink_config(Method::direct));
      kink.direct_seconds = seconds_since(start);
      start = Clock::now();
      kink.fft = iterate_half_line(kink_config(Method::fft));
      kink.fft_seconds = seconds_since(start);

      for (const Solution* s : {&kink.direct.value(), &kink.fft.value()}) {
        const IterationTrace& t = s->trace;
        c.require(t.converged, "converged");
        c.require(t.iterations_used <= 40, "iterations");
        const Profile full = reconstruct_full_solution(s->profile, 3);
        const std::size_t n = full.grid.points();
        double oddness = 0.0;
        for (std::size_t i = 0; i < n; ++i) oddness = std::max(oddness, std::abs(full.values[i] + full.values[n - 1 - i]));
        c.require(oddness <= 1e-14, "oddness");
        c.require(full.values[n / 2] == 0.0, "Phi(0)");
        c.require(std::abs(full.values.back() - 1.0) <= 1e-6, "edge value");
        const Profile conv = FullLineOperator(3, full.grid, Method::direct).apply(full);
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (std::abs(full.grid.node(i)) > 0.75 * full.grid.half_width()) continue;
          residual = std::max(residual, std::abs(conv.values[i] - std::pow(full.values[i], 3)));
        }
        c.require(residual <= 1e-8, "full-line residual");
        c.detail << " " << (s == &kink.direct.value() ? "direct" : "fft") << ": iters=" << t.iterations_used
                 << " odd=" << oddness << " edge=" << full.values.back() << " res=" << residual << ";";
      }
      c.require(kink.direct_seconds < 30.0, "direct runtime");
      c.require(kink.fft_seconds < 5.0, "fft runtime");
      c.detail << " t_direct=" << kink.direct_seconds << "s t_fft=" << kink.fft_seconds << "s";

      cli::RunConfig rc;
      rc.command = cli::Command::solve_kink;
      rc.p = 3;
      const cli::RunOutcome out = cli::execute(rc);
      c.require(out.exit_code == 0 && out.report["converged"] == true, "CLI solve-kink");
      c.require(out.profile && out.profile->values.front() == 0.0, "CLI Phi(0) row");
    });
  }

  {
    Criterion c{4, "monotone bracketing"};
    guarded(c, [&] {
      const IterationTrace& t = kink.direct.value().trace;
      c.require(t.monotone_violations == 0, "phi_{n+1} <= phi_n");
      c.require(t.lower_bracket_violations == 0, "lower bracket");
      SolverConfig one = kink_config(Method::direct);
      one.max_iterations = 1;
      const Profile phi1 = iterate_half_line(one).profile;
      one.max_iterations = 2;
      const Profile phi2 = iterate_half_line(one).profile;
      const double sigma = t.sigma_estimate;
      int violations = 0;
      for (std::size_t i = 0; i < phi1.values.size(); ++i) {
        if (sigma * phi1.values[i] > phi2.values[i] + 1e-12) ++violations;
        if (phi2.values[i] > phi1.values[i] + 1e-12) ++violations;
      }
      c.require(violations == 0, "sigma phi1 <= phi2 <= phi1");
      c.require(sigma > 0.0 && sigma < 1.0, "sigma in (0,1)");
      c.detail << " monotone_violations=" << t.monotone_violations << " bracket_violations=" << violations
               << " sigma=" << sigma;
    });
  }

  {
    Criterion c{5, "rate bound and f(0) < 1"};
    guarded(c, [&] {
      c.require(check_rate_bound(kink.direct.value().trace), "direct trace");
      c.require(check_rate_bound(kink.fft.value().trace), "fft trace");
      // Independent adaptive-quadrature values, tests/oracles/compute_oracles.py.
      const std::vector<std::pair<int, double>> oracle{
          {2, 0.8259072843747086548}, {3, 0.87608673656968558911}, {5, 0.92138210923578567101},
          {17, 0.97537428555566786588}};
      for (const auto& [p, ref] : oracle) {
        const double f = f_at_zero(p);
        c.require(f < 1.0, "f_at_zero < 1, p=" + std::to_string(p));
        c.require(std::abs(f - ref) <= 1e-13, "f_at_zero accuracy, p=" + std::to_string(p));
        c.detail << " f0(" << p << ")=" << f;
      }
    });
  }

  std::optional<Solution> full_line_kink;
  {
    Criterion c{8, "full line agrees with the reconstructed half-line kink"};
    guarded(c, [&] {
      SolverConfig sc;
      sc.p = 3;
      sc.grid = mirrored_full_grid(kink.direct.value().profile.grid, 3);
      sc.seed = SignStepSeed{};
      sc.method = Method::fft;
      full_line_kink = iterate_full_line(sc);
      c.require(full_line_kink.value().trace.converged, "full-line converged");
      c.require(kink.direct.value().trace.converged, "half-line converged");
      const double err =
          sup_distance(full_line_kink.value().profile.values, reconstruct_full_solution(kink.direct.value().profile, 3).values);
      c.require(err <= 1e-8, "agreement");
      c.detail << " sup_error=" << err << " iters=" << full_line_kink.value().trace.iterations_used;
      full_line_sup_abs = full_line_kink.value().trace.sup_abs;
    });
  }

  {
    Criterion c{6, "every iterate satisfies sup|Phi_n| <= 1"};
    guarded(c, [&] {
      const double worst = std::max({first_iterate_max, max_of(kink.direct.value().trace.sup_abs),
                                     max_of(kink.fft.value().trace.sup_abs), max_of(full_line_sup_abs)});
      c.require(worst <= 1.0 + 1e-12, "bound");
      c.require(!full_line_sup_abs.empty() && !kink.direct.value().trace.sup_abs.empty(), "traces present");
      c.detail << " max=" << worst - 1.0 << " above 1";
    });
  }

  {
    Criterion c{7, "positive seeds with limits 1 relax to 1"};
    guarded(c, [&] {
      std::mt19937_64 rng(20240607);
      std::uniform_real_distribution<double> u(0.3, 1.0);
      const Grid g = mirrored_full_grid(Grid::half_line(8.0, 4097), 3);
      for (int k = 0; k < 5; ++k) {
        std::vector<double> v(g.points());
        for (double& x : v) x = u(rng);
        SolverConfig sc;
        sc.p = 3;
        sc.grid = g;
        sc.seed = Profile(g, v, 1.0, 1.0);
        sc.method = Method::fft;
        const Solution s = iterate_full_line(sc);
        double err = 0.0;
        for (double x : s.profile.values) err = std::max(err, std::abs(x - 1.0));
        c.require(s.trace.converged && s.trace.iterations_used <= 60, "converged, seed " + std::to_string(k));
        c.require(err <= 1e-8, "distance to 1, seed " + std::to_string(k));
        c.detail << " seed" << k << ": iters=" << s.trace.iterations_used << " err=" << err << ";";
      }
    });
  }

  {
    Criterion c{9, "soliton, growing solution, q-brane"};
    guarded(c, [&] {
      for (int p : {2, 3, 5}) {
        const SolitonReport s = verify_soliton(p, Grid::full_line(12.0, 4097), Method::fft);
        c.require(s.sup_residual <= 1e-9, "soliton residual p=" + std::to_string(p));
        c.require(s.amplitude_identity_error <= 1e-14, "amplitude identity p=" + std::to_string(p));
        const GrowingReport g = verify_growing_solution(p);
        c.require(g.passed && g.amplitude_error <= 1e-13 && g.rate_error <= 1e-13,
                  "growing p=" + std::to_string(p));
        c.detail << " p=" << p << " res=" << s.sup_residual << " id=" << s.amplitude_identity_error
                 << " grow=" << std::max(g.amplitude_error, g.rate_error) << ";";
      }
      const QBraneReport q = verify_q_brane(3, 0, 4, mirrored_full_grid(Grid::half_line(8.0, 4097), 3));
      c.require(q.passed, "q-brane verdict");
      c.require(q.total_residual <= 1e-9, "q-brane residual");
      c.detail << " qbrane res=" << q.total_residual << " sep=" << q.separability_error;
    });
  }

  {
    Criterion c{10, "FFT and direct operators agree"};
    guarded(c, [&] {
      std::mt19937_64 rng(99);
      std::uniform_int_distribution<std::size_t> size(1024, 4096);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      double worst = 0.0;
      for (int k = 0; k < 20; ++k) {
        const int p = k % 2 == 0 ? 2 : 3;
        const std::size_t n = size(rng);
        const Grid g = Grid::full_line(10.0 * (1.0 + 0.5 * std::abs(u(rng))), n);
        const double left = u(rng), right = u(rng);
        const double a1 = u(rng), a2 = u(rng), w = 0.3 + std::abs(u(rng)), c0 = 3.0 * u(rng);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double t = g.node(i);
          v[i] = 0.5 * (left + right) + 0.5 * (right - left) * std::tanh(w * t) +
                 a1 * std::exp(-(t - c0) * (t - c0)) + a2 * std::sin(t) / std::cosh(0.5 * t);
        }
        const Profile prof(g, v, left, right);
        const FullLineOperator op(p, g);
        worst = std::max(worst, sup_distance(op.apply_direct(prof).values, op.apply_fft(prof).values));
      }
      c.require(worst <= 1e-10, "sup difference");
      c.detail << " max_diff=" << worst << " over 20 profiles";
    });
  }

  {
    Criterion c{11, "p=2 with limits (0,1) does not converge"};
    guarded(c, [&] {
      const Grid g = mirrored_full_grid(Grid::half_line(8.0, 4097), 2);
      std::vector<double> v(g.points());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (1.0 + std::tanh(g.node(i)));
      const auto path = std::filesystem::temp_directory_path() / "padic_acceptance_seed.csv";
      cli::write_profile_csv(path.string(), Profile(g, v, 0.0, 1.0));
      cli::RunConfig rc;
      rc.command = cli::Command::full_line;
      rc.p = 2;
      rc.seed = path.string();
      rc.left_tail = 0.0;
      rc.right_tail = 1.0;
      const cli::RunOutcome out = cli::execute(rc);
      c.require(out.exit_code == 2, "exit code 2");
      c.require(out.report["nonconvergence_proxy"] == true, "proxy");
      c.detail << " exit=" << out.exit_code << " residual_floor=" << out.report["residual_floor"].get<double>()
               << " left_drift=" << out.report["left_tail_drift"].get<double>()
               << " termination=" << out.report["termination"].get<std::string>();
    });
  }

  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
