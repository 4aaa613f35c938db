#include "padic/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "padic/closed_forms.hpp"
#include "padic/fixed_point_solver.hpp"
#include "padic/special_functions.hpp"

namespace padic::cli {

namespace {

using nlohmann::json;

struct CommandName {
  Command command;
  const char* name;
  const char* help;
};

constexpr CommandName kCommands[] = {
    {Command::solve_kink, "solve-kink", "odd-p kink by the half-line iteration"},
    {Command::full_line, "full-line", "full-line iteration from a sign, constant or file seed"},
    {Command::verify_soliton, "verify-soliton", "residual of the spatial soliton"},
    {Command::verify_constants, "verify-constants", "which constants -1, 0, 1 are solutions"},
    {Command::verify_growing, "verify-growing", "symbolic check of the growing solution"},
    {Command::verify_qbrane, "verify-qbrane", "separability check of a q-brane"},
    {Command::first_iterate, "first-iterate", "first half-line step against erf(t)^(1/p)"},
};

const char* method_name(Method m) { return m == Method::fft ? "fft" : "direct"; }

json grid_json(const Grid& g, double t_scale) {
  return {{"kind", g.kind() == DomainKind::half_line ? "half_line" : "full_line"},
          {"half_width", g.half_width()},
          {"half_width_unscaled", g.half_width() * t_scale},
          {"points", g.points()},
          {"spacing", g.spacing()}};
}

void trace_json(json& r, const IterationTrace& t) {
  r["iterations_used"] = t.iterations_used;
  r["sup_diffs"] = t.sup_diffs;
  r["residuals"] = t.residuals;
  r["sigma_estimate"] = t.sigma_estimate;
  r["rate_bounds"] = t.rate_bounds;
  r["rate_bounds_safe"] = t.rate_bounds_safe;
  r["rate_bound_satisfied"] = check_rate_bound(t);
  r["final_residual"] = t.final_residual;
  r["converged"] = t.converged;
  r["termination"] = to_string(t.termination);
  r["diagnostic"] = t.diagnostic;
  r["max_abs"] = t.sup_abs.empty() ? 0.0 : *std::max_element(t.sup_abs.begin(), t.sup_abs.end());
}

Grid half_line_grid(const RunConfig& c) {
  return Grid::half_line(c.half_width, static_cast<std::size_t>(c.points));
}

Grid full_line_grid(const RunConfig& c) {
  return mirrored_full_grid(half_line_grid(c), c.p);
}

std::string seed_name(const RunConfig& c, const char* fallback) {
  return c.seed.empty() ? fallback : c.seed;
}

RunOutcome solve_kink(const RunConfig& c) {
  if (c.p % 2 == 0) {
    throw InputError("solve-kink needs odd p: the odd kink between -1 and 1 exists only for odd p, got p = " +
                     std::to_string(c.p));
  }
  const double scale = rescale_factor(c.p);
  SolverConfig sc;
  sc.p = c.p;
  sc.grid = half_line_grid(c);
  sc.tolerance = c.tolerance;
  sc.max_iterations = c.max_iterations;
  sc.method = c.method;
  const std::string seed = seed_name(c, "one");
  if (seed == "sgn") {
    sc.seed = SignStepSeed{};
  } else if (seed != "one") {
    const Profile loaded = load_profile_csv(seed, c.left_tail, c.right_tail);
    if (loaded.grid.kind() != DomainKind::half_line) {
      throw InputError("solve-kink seed file must hold a half-line profile (first t = 0)");
    }
    sc.grid = loaded.grid.scaled(1.0 / scale);
    sc.seed = Profile::half_line(sc.grid, loaded.values, loaded.right_tail);
  }

  const Solution sol = iterate_half_line(sc);
  RunOutcome out;
  json& r = out.report;
  r["grid"] = grid_json(sc.grid, scale);
  trace_json(r, sol.trace);
  r["monotone_violations"] = sol.trace.monotone_violations;
  r["lower_bracket_violations"] = sol.trace.lower_bracket_violations;
  r["f_at_zero"] = f_at_zero(c.p);

  // Independent check of the reconstruction with the full-line operator.
  const Profile full = reconstruct_full_solution(sol.profile, c.p);
  const FullLineOperator op(c.p, full.grid, c.method);
  const Profile convolved = op.apply(full);
  const double window = 0.75 * full.grid.half_width();
  double residual = 0.0;
  double oddness = 0.0;
  const std::size_t n = full.grid.points();
  for (std::size_t i = 0; i < n; ++i) {
    oddness = std::max(oddness, std::abs(full.values[i] + full.values[n - 1 - i]));
    if (std::abs(full.grid.node(i)) > window) continue;
    residual = std::max(residual, std::abs(convolved.values[i] - std::pow(full.values[i], c.p)));
  }
  r["full_line_residual"] = residual;
  r["full_line_residual_window"] = window;
  r["oddness_error"] = oddness;
  r["phi_at_zero"] = sol.profile.values.front();
  r["phi_at_edge"] = sol.profile.values.back();

  out.profile = Profile::half_line(sc.grid.scaled(scale), sol.profile.values, 1.0);
  out.exit_code = sol.trace.converged ? exit_success : exit_not_verified;
  std::ostringstream s;
  s << "solve-kink p=" << c.p << ": " << to_string(sol.trace.termination) << " after "
    << sol.trace.iterations_used << " iterations, residual " << sol.trace.final_residual;
  out.summary = s.str();
  return out;
}

RunOutcome full_line(const RunConfig& c) {
  SolverConfig sc;
  sc.p = c.p;
  sc.grid = full_line_grid(c);
  sc.tolerance = c.tolerance;
  sc.max_iterations = c.max_iterations;
  sc.method = c.method;
  const std::string seed = seed_name(c, "sgn");
  if (seed == "sgn") {
    sc.seed = SignStepSeed{};
  } else if (seed == "one") {
    sc.seed = ConstantOneSeed{};
  } else {
    const Profile loaded = load_profile_csv(seed, c.left_tail, c.right_tail);
    if (loaded.grid.kind() != DomainKind::full_line) {
      throw InputError("full-line seed file must hold a symmetric full-line profile");
    }
    sc.grid = loaded.grid;
    sc.seed = loaded;
  }

  const Solution sol = iterate_full_line(sc);
  RunOutcome out;
  json& r = out.report;
  r["grid"] = grid_json(sc.grid, 1.0);
  trace_json(r, sol.trace);
  r["left_tail_drift"] = sol.trace.left_tail_drift;
  r["right_tail_drift"] = sol.trace.right_tail_drift;
  r["residual_floor"] = sol.trace.residual_floor;
  r["nonconvergence_proxy"] = sol.trace.nonconvergence_proxy;
  if (c.p % 2 == 0) {
    r["residual_decreasing"] = sol.trace.residual_decreasing;
    r["branch_point_candidates"] = sol.trace.branch_point_candidates;
  }
  out.profile = sol.profile;
  out.exit_code = sol.trace.converged ? exit_success : exit_not_verified;
  std::ostringstream s;
  s << "full-line p=" << c.p << ": " << to_string(sol.trace.termination) << " after "
    << sol.trace.iterations_used << " iterations, residual " << sol.trace.final_residual;
  if (sol.trace.nonconvergence_proxy) s << " (non-convergence proxy triggered)";
  out.summary = s.str();
  return out;
}

RunOutcome verify_constants(const RunConfig& c) {
  const Grid g = full_line_grid(c);
  const FullLineOperator op(c.p, g, c.method);
  const ConstantReport rep = verify_constant_fixed_points(c.p, op);
  RunOutcome out;
  json& r = out.report;
  r["grid"] = grid_json(g, 1.0);
  json checks = json::array();
  std::vector<double> solutions;
  std::ostringstream s;
  s << "verify-constants p=" << c.p << ": solutions {";
  for (const ConstantCheck& k : rep.checks) {
    checks.push_back({{"c", k.c}, {"residual", k.residual}, {"is_solution", k.is_solution},
                      {"expected", k.expected}});
    if (k.is_solution) {
      s << (solutions.empty() ? "" : ", ") << k.c;
      solutions.push_back(k.c);
    }
  }
  s << "}";
  r["checks"] = checks;
  r["solutions"] = solutions;
  r["matches_parity"] = rep.matches_parity;
  r["converged"] = rep.matches_parity;
  out.exit_code = rep.matches_parity ? exit_success : exit_not_verified;
  out.summary = s.str();
  return out;
}

RunOutcome verify_soliton_cmd(const RunConfig& c) {
  const Grid g = full_line_grid(c);
  const SolitonReport rep = verify_soliton(c.p, g, c.method);
  RunOutcome out;
  json& r = out.report;
  r["grid"] = grid_json(g, 1.0);
  r["sup_residual"] = rep.sup_residual;
  r["centre_value"] = rep.centre_value;
  r["centre_convolved"] = rep.centre_convolved;
  r["amplitude_identity_error"] = rep.amplitude_identity_error;
  r["symbolic"] = {{"coefficient", rep.symbolic.coefficient}, {"rate", rep.symbolic.rate}};
  r["symbolic_amplitude_error"] = rep.symbolic_amplitude_error;
  r["symbolic_rate_error"] = rep.symbolic_rate_error;
  r["passed"] = rep.passed;
  out.exit_code = rep.passed ? exit_success : exit_not_verified;
  std::vector<double> values(g.points());
  for (std::size_t i = 0; i < g.points(); ++i) values[i] = evaluate(SolitonSolution{c.p}, g.node(i));
  out.profile = Profile(g, std::move(values), 0.0, 0.0);
  std::ostringstream s;
  s << "verify-soliton p=" << c.p << ": " << (rep.passed ? "passed" : "FAILED") << ", residual "
    << rep.sup_residual;
  out.summary = s.str();
  return out;
}

RunOutcome verify_growing(const RunConfig& c) {
  const GrowingReport rep = verify_growing_solution(c.p);
  RunOutcome out;
  json& r = out.report;
  r["alpha"] = rep.alpha;
  r["beta"] = rep.beta;
  r["convolved"] = {{"coefficient", rep.convolved.coefficient}, {"rate", rep.convolved.rate}};
  r["power"] = {{"coefficient", rep.power.coefficient}, {"rate", rep.power.rate}};
  r["amplitude_error"] = rep.amplitude_error;
  r["rate_error"] = rep.rate_error;
  r["diagnostic"] = rep.diagnostic;
  r["passed"] = rep.passed;
  out.exit_code = rep.passed ? exit_success : exit_not_verified;
  out.summary = "verify-growing p=" + std::to_string(c.p) + ": " + (rep.passed ? "passed" : "FAILED");
  return out;
}

RunOutcome verify_qbrane(const RunConfig& c) {
  if (c.q < 0 || c.q > c.d - 2) {
    throw InputError("verify-qbrane needs 0 <= q <= d - 2, got q = " + std::to_string(c.q) +
                     ", d = " + std::to_string(c.d));
  }
  const Grid g = full_line_grid(c);
  const QBraneReport rep = verify_q_brane(c.p, c.q, c.d, g);
  RunOutcome out;
  json& r = out.report;
  r["grid"] = grid_json(g, 1.0);
  r["q"] = rep.q;
  r["d"] = rep.d;
  r["transverse_dims"] = rep.transverse_dims;
  r["axis_residual"] = rep.axis_residual;
  r["accumulated_bound"] = rep.accumulated_bound;
  r["tensor_points"] = rep.tensor_points;
  r["sample_points"] = rep.sample_points;
  r["total_residual"] = rep.total_residual;
  r["total_bound"] = rep.total_bound;
  r["separability_error"] = rep.separability_error;
  r["product_evaluation_error"] = rep.product_evaluation_error;
  r["origin_value"] = rep.origin_value;
  r["origin_expected"] = rep.origin_expected;
  r["worldvolume_constant"] = rep.worldvolume_constant;
  r["passed"] = rep.passed;
  out.exit_code = rep.passed ? exit_success : exit_not_verified;
  out.summary = "verify-qbrane p=" + std::to_string(c.p) + " q=" + std::to_string(c.q) +
                " d=" + std::to_string(c.d) + ": " + (rep.passed ? "passed" : "FAILED");
  return out;
}

RunOutcome first_iterate(const RunConfig& c) {
  const Grid g = half_line_grid(c);
  const HalfLineOperator op(c.p, g);
  const Profile convolved = op.apply(Profile::constant(g, 1.0), c.method);
  std::vector<double> phi(g.points());
  double error = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi[i] = std::pow(std::max(convolved.values[i], 0.0), 1.0 / c.p);
    error = std::max(error, std::abs(phi[i] - std::pow(erf(g.node(i)), 1.0 / c.p)));
  }
  RunOutcome out;
  json& r = out.report;
  const double scale = rescale_factor(c.p);
  r["grid"] = grid_json(g, scale);
  r["sup_error"] = error;
  r["passed"] = error <= 1e-9;
  out.profile = Profile::half_line(g.scaled(scale), std::move(phi), 1.0);
  out.exit_code = error <= 1e-9 ? exit_success : exit_not_verified;
  std::ostringstream s;
  s << "first-iterate p=" << c.p << ": sup |phi_1 - erf^(1/p)| = " << error;
  out.summary = s.str();
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& field, std::size_t row, const std::string& path) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw InputError(path + ": row " + std::to_string(row) + ": cannot parse '" + field + "'");
  }
  if (!std::isfinite(v)) {
    throw InputError(path + ": row " + std::to_string(row) + ": non-finite value '" + field + "'");
  }
  return v;
}

}  // namespace

const char* to_string(Command c) {
  for (const auto& k : kCommands) {
    if (k.command == c) return k.name;
  }
  return "unknown";
}

void validate(const RunConfig& c) {
  if (c.p < 2) throw InputError("p must be an integer >= 2, got " + std::to_string(c.p));
  if (!(std::isfinite(c.half_width) && c.half_width > 0.0)) {
    throw InputError("half-width must be positive and finite");
  }
  if (c.points < static_cast<long long>(Grid::min_points)) {
    throw InputError("points must be >= 16, got " + std::to_string(c.points));
  }
  if (!(std::isfinite(c.tolerance) && c.tolerance > 0.0)) {
    throw InputError("tolerance must be positive and finite");
  }
  if (c.max_iterations < 1) throw InputError("max-iterations must be >= 1");
  for (const auto& tail : {c.left_tail, c.right_tail}) {
    if (tail && !std::isfinite(*tail)) throw InputError("tails must be finite");
  }
  if (c.command == Command::solve_kink && c.p % 2 == 0) {
    throw InputError("solve-kink needs odd p: the odd kink between -1 and 1 exists only for odd p, got p = " +
                     std::to_string(c.p));
  }
}

RunOutcome execute(const RunConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  switch (config.command) {
    case Command::solve_kink:
      out = solve_kink(config);
      break;
    case Command::full_line:
      out = full_line(config);
      break;
    case Command::verify_soliton:
      out = verify_soliton_cmd(config);
      break;
    case Command::verify_constants:
      out = verify_constants(config);
      break;
    case Command::verify_growing:
      out = verify_growing(config);
      break;
    case Command::verify_qbrane:
      out = verify_qbrane(config);
      break;
    case Command::first_iterate:
      out = first_iterate(config);
      break;
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  json& r = out.report;
  r["schema"] = 1;
  r["command"] = to_string(config.command);
  r["p"] = config.p;
  r["method"] = method_name(config.method);
  r["tolerance"] = config.tolerance;
  r["exit_code"] = out.exit_code;
  r["wall_time_ms"] = elapsed.count();
  return out;
}

int run(const RunConfig& config) {
  try {
    const RunOutcome out = execute(config);
    if (!config.out_profile.empty() && out.profile) {
      write_profile_csv(config.out_profile, *out.profile);
    }
    if (!config.out_report.empty()) {
      std::ofstream f(config.out_report);
      if (!(f << out.report.dump(2) << '\n')) {
        throw InputError("cannot write report to " + config.out_report);
      }
    }
    std::cout << out.summary << '\n';
    return out.exit_code;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return exit_invalid_input;
}

std::optional<RunConfig> parse(int argc, const char* const* argv, int& exit_code) {
  CLI::App app{"Solver for the p-adic string equation p^(box/2) Phi = Phi^p"};
  app.require_subcommand(1);
  RunConfig config;
  std::string method = "fft";

  for (const auto& k : kCommands) {
    CLI::App* sub = app.add_subcommand(k.name, k.help);
    sub->add_option("--p", config.p, "exponent p >= 2");
    sub->add_option("--half-width", config.half_width, "grid half width in rescaled units");
    sub->add_option("--points", config.points, "half-line grid points");
    sub->add_option("--tolerance", config.tolerance, "sup-norm stopping threshold");
    sub->add_option("--max-iterations", config.max_iterations, "iteration cap");
    sub->add_option("--method", method, "direct | fft")
        ->check(CLI::IsMember({"direct", "fft"}));
    sub->add_option("--seed", config.seed, "one | sgn | CSV path");
    sub->add_option("--out-profile", config.out_profile, "CSV output (t,phi)");
    sub->add_option("--out-report", config.out_report, "JSON report output");
    sub->add_option("--left-tail", config.left_tail, "override the seed's left limit");
    sub->add_option("--right-tail", config.right_tail, "override the seed's right limit");
    if (k.command == Command::verify_qbrane) {
      sub->add_option("--q", config.q, "worldvolume spatial dimensions");
      sub->add_option("--d", config.d, "spacetime dimension");
    }
    sub->callback([&config, command = k.command] { config.command = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    exit_code = code == 0 ? exit_success : exit_invalid_input;
    return std::nullopt;
  }
  config.method = method == "direct" ? Method::direct : Method::fft;
  return config;
}

int main(int argc, const char* const* argv) {
  int code = exit_success;
  const auto config = parse(argc, argv, code);
  if (!config) return code;
  return run(*config);
}

Profile load_profile_csv(const std::string& path, std::optional<double> left_tail,
                         std::optional<double> right_tail) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile " + path);

  std::vector<double> t;
  std::vector<double> phi;
  std::string line;
  std::size_t row = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++row;
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto comma = content.find(',');
    if (comma == std::string::npos || content.find(',', comma + 1) != std::string::npos) {
      throw InputError(path + ": row " + std::to_string(row) + ": expected two columns");
    }
    const std::string a = trim(std::string_view(content).substr(0, comma));
    const std::string b = trim(std::string_view(content).substr(comma + 1));
    if (!header) {
      if (a != "t" || b != "phi") throw InputError(path + ": missing header 't,phi'");
      header = true;
      continue;
    }
    t.push_back(parse_number(a, row, path));
    phi.push_back(parse_number(b, row, path));
  }
  if (!header) throw InputError(path + ": missing header 't,phi'");
  if (t.size() < Grid::min_points) {
    throw InputError(path + ": " + std::to_string(t.size()) + " rows, need at least 16");
  }

  const std::size_t n = t.size();
  const double span = t.back() - t.front();
  const double h = span / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw InputError(path + ": t must be strictly increasing");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(t[i] > t[i - 1])) throw InputError(path + ": t must be strictly increasing");
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * h) {
      throw InputError(path + ": non-uniform spacing at row " + std::to_string(i + 2));
    }
  }

  const double right = right_tail.value_or(phi.back());
  if (std::abs(t.front()) <= 1e-9 * h) {
    return Profile::half_line(Grid::half_line(t.back(), n), std::move(phi), right);
  }
  if (std::abs(t.front() + t.back()) <= 1e-9 * span) {
    const double left = left_tail.value_or(phi.front());
    return Profile(Grid::full_line(t.back(), n), std::move(phi), left, right);
  }
  throw InputError(path + ": grid neither starts at t = 0 nor is symmetric about 0");
}

void write_profile_csv(const std::string& path, const Profile& profile, double t_scale) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw InputError("cannot write profile to " + path);
  std::fputs("t,phi\n", f);
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    std::fprintf(f, "%.17g,%.17g\n", profile.grid.node(i) * t_scale, profile.values[i]);
  }
  if (std::fclose(f) != 0) throw InputError("cannot write profile to " + path);
}

}  // namespace padic::cli
