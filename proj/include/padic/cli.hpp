#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "padic/discrete_operator.hpp"
#include "padic/grid.hpp"

namespace padic::cli {

enum class Command {
  solve_kink,
  full_line,
  verify_soliton,
  verify_constants,
  verify_growing,
  verify_qbrane,
  first_iterate,
};

const char* to_string(Command c);

/// One invocation. half_width is in rescaled units for every command;
/// full-line commands use the mirrored grid with half width
/// half_width * sqrt(2 ln p) and 2 * points - 1 nodes.
struct RunConfig {
  Command command = Command::solve_kink;
  int p = 3;
  double half_width = 8.0;
  long long points = 4097;
  double tolerance = 1e-10;
  int max_iterations = 60;
  Method method = Method::fft;
  /// "one", "sgn", or a CSV path. Empty picks the command default:
  /// "one" for solve-kink, "sgn" for full-line.
  std::string seed;
  std::string out_profile;  // empty: no CSV
  std::string out_report;   // empty: no JSON
  std::optional<double> left_tail;
  std::optional<double> right_tail;
  int q = 0;  // verify-qbrane
  int d = 4;  // verify-qbrane
};

/// Invalid configuration or unreadable input; maps to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int exit_success = 0;
inline constexpr int exit_invalid_input = 1;
inline constexpr int exit_not_verified = 2;

/// Throws InputError on the first invalid field.
void validate(const RunConfig& config);

struct RunOutcome {
  int exit_code = exit_success;
  nlohmann::json report;
  /// Unscaled profile written to --out-profile, when the command produces one.
  std::optional<Profile> profile;
  std::string summary;
};

/// Runs a command without touching the file system for outputs. Throws
/// InputError (or std::invalid_argument from the library) on invalid input.
RunOutcome execute(const RunConfig& config);

/// execute() plus output files and a summary line; returns the exit code.
int run(const RunConfig& config);

/// Parses argv into a RunConfig. Returns nullopt after printing help or a
/// parse error; `exit_code` then holds the code to return.
std::optional<RunConfig> parse(int argc, const char* const* argv, int& exit_code);

/// parse() + run().
int main(int argc, const char* const* argv);

/// Reads a `t,phi` CSV. The grid is a half line when the first t is 0 and a
/// full line when the nodes are symmetric; spacing must be uniform to 1e-9
/// relative, with at least 16 rows. Tails default to the first and last
/// values (a half-line profile keeps left = -right). Throws InputError.
Profile load_profile_csv(const std::string& path, std::optional<double> left_tail = std::nullopt,
                         std::optional<double> right_tail = std::nullopt);

/// Writes `t,phi` rows with 17 significant digits, t = node * t_scale.
/// Throws InputError when the file cannot be written.
void write_profile_csv(const std::string& path, const Profile& profile, double t_scale = 1.0);

}  // namespace padic::cli
