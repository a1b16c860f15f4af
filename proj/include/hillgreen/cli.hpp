#ifndef HILLGREEN_CLI_HPP_
#define HILLGREEN_CLI_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hillgreen/comparison.hpp"
#include "hillgreen/errors.hpp"
#include "hillgreen/potential.hpp"

namespace hillgreen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Command { Spectrum, Green, Verify, Compare, Sweep, Examples };
enum class Format { Csv, Json };

std::string_view to_string(Command c) noexcept;

struct RunConfig {
  Command command = Command::Examples;
  std::filesystem::path potential_file;
  std::optional<double> T;  ///< defaults to the descriptor's T
  std::optional<double> lambda;
  std::optional<std::pair<double, double>> range;
  std::string bc = "all";
  int n = 100;
  std::optional<std::filesystem::path> output;
  Format format = Format::Csv;
  double tol = 1e-10;
  int points = 0;  ///< sweep samples, or the bracketing scan size for spectra (0 = default)
  int count = 0;   ///< spectrum: first count eigenvalues per problem; verify: interlacing indices
  bool strict = false;
  bool direct = false;          ///< periodic spectra from Delta = +-2 instead of the separated factorization
  std::string suite = "all";    ///< verify: identities, decomposition, relations, interlacing, signs, all
  std::string id;               ///< verify: a single identity id
  std::string relation;         ///< compare: dominance id
  std::string theorem;          ///< compare: comparison id
  std::string sigma1 = "1";
  std::string sigma2 = "0";
  std::vector<int> which;       ///< examples to run
  bool all = false;
};

/// Checks the fields a command needs; throws UsageError.
void validate(const RunConfig& config);

/// Runs a command and writes its artifact to config.output or `out`.
/// Returns one of the exit codes above; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line and calls run.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Forcing terms: a number ("1"), or "sin:A:W" / "cos:A:W" for A sin(W t) and
/// A cos(W t). Numbers may carry a "pi" suffix ("2pi").
Forcing parse_forcing(std::string_view text);

/// Built-in example potentials 1 to 4 with their half-period T.
std::pair<Potential, double> example_potential(int which);

}  // namespace hillgreen::cli

#endif  // HILLGREEN_CLI_HPP_
