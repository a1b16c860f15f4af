#ifndef HILLGREEN_COMPARISON_HPP_
#define HILLGREEN_COMPARISON_HPP_

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hillgreen/greens.hpp"
#include "hillgreen/spectrum.hpp"

namespace hillgreen {

inline constexpr double kZeroTolerance = 1e-7;
inline constexpr double kStrictSlack = 1e-9;
inline constexpr double kSolutionSlack = 1e-6;

enum class SignClass {
  StrictlyNegative,
  NonpositiveWithZeros,  ///< <= 0 with |G| <= zero_tol somewhere
  NonnegativeWithZeros,  ///< >= 0 with |G| <= zero_tol somewhere
  StrictlyPositive,
  SignChanging,
};

std::string_view to_string(SignClass c) noexcept;

struct GridPoint {
  int i = 0;
  int j = 0;
  double t = 0.0;
  double s = 0.0;
};

struct SignReport {
  SignClass classification = SignClass::SignChanging;
  double min_value = 0.0;
  double max_value = 0.0;
  double zero_tol = kZeroTolerance;
  std::vector<GridPoint> zero_locations;  ///< nodes with |G| <= zero_tol

  bool nonnegative() const noexcept {
    return classification == SignClass::StrictlyPositive || classification == SignClass::NonnegativeWithZeros;
  }
  bool nonpositive() const noexcept {
    return classification == SignClass::StrictlyNegative || classification == SignClass::NonpositiveWithZeros;
  }
};

SignReport classify_sign(const GreensFunction& g, double zero_tol = kZeroTolerance);

/// Samples the kernel on n intervals and classifies it. Where a constant-sign
/// grid vanishes on the edge of the square, the inward derivative must carry
/// the same sign; otherwise a sign change narrower than the grid sits at that
/// edge and the kernel is sign_changing.
SignReport classify_sign(const GreenKernel& k, int n, double zero_tol = kZeroTolerance);

/// Sign of G[a+lambda] as a function of lambda:
///   negative for lambda < negative_below,
///   nonnegative for nonnegative_from < lambda <= nonnegative_to,
///   sign-changing elsewhere (except at eigenvalues).
/// For D, M1 and M2 "negative" means negative on the open part of the square
/// where the kernel does not vanish identically by its boundary conditions.
struct SignPrediction {
  BoundaryCondition bc = BoundaryCondition::Neumann;
  double negative_below = 0.0;
  std::optional<std::pair<double, double>> nonnegative;
};

/// N: (-inf, lambda_P(e,2T)) and (lambda_P(e,2T), min(lambda_M1, lambda_M2)].
/// P: (-inf, lambda_P(a,T)) and (lambda_P(a,T), lambda_A(a,T)].
/// D, M1, M2: (-inf, lambda_first). A: no constant-sign range.
SignPrediction predicted_sign_interval(const Potential& p, double T, BoundaryCondition bc,
                                       const SpectrumOptions& options = {});

enum class PredictedSign { Negative, Nonnegative, SignChanging, None };

std::string_view to_string(PredictedSign s) noexcept;

/// Predicted sign at lambda; `margin` is the distance to the nearest interval endpoint.
PredictedSign predicted_sign(const SignPrediction& prediction, double lambda, double* margin = nullptr);

/// Whether a grid classification agrees with a predicted sign for bc.
bool sign_matches(BoundaryCondition bc, PredictedSign predicted, SignClass observed);

struct ThresholdSample {
  double lambda = 0.0;
  PredictedSign predicted = PredictedSign::None;
  SignClass observed = SignClass::SignChanging;
  bool marginal = false;  ///< within the endpoint margin; not asserted
  bool pass = false;
};

struct ThresholdReport {
  BoundaryCondition bc = BoundaryCondition::Neumann;
  SignPrediction prediction;
  std::vector<ThresholdSample> samples;
  bool pass() const;
};

/// Classifies G[a+lambda] of the problem on [0, T] at each
/// lambda and compares with the prediction. Samples within `margin` of an
/// endpoint or at a resonance are marked marginal.
ThresholdReport threshold_consistency(const Potential& p, double T, BoundaryCondition bc,
                                      const std::vector<double>& lambdas, int n = kDefaultGrid,
                                      double zero_tol = kZeroTolerance, double margin = 1e-4,
                                      const SpectrumOptions& options = {});

struct DominanceInfo {
  std::string_view id;
  std::string_view hypothesis;
  std::string_view conclusion;
};

inline constexpr std::array<DominanceInfo, 9> kDominanceCatalog = {{
    {"ND_pos", "G_P[e,2T] >= 0", "G_N[a,T] >= |G_D[a,T]| = -G_D[a,T]"},
    {"ND_neg", "G_P[e,2T] < 0", "G_N[a,T] < G_D[a,T] <= 0"},
    {"NM1_pos", "G_N[e,2T] >= 0", "G_N[a,T] >= |G_M1[a,T]| = -G_M1[a,T]"},
    {"NM1_neg", "G_N[e,2T] < 0", "G_N[a,T] < G_M1[a,T] <= 0"},
    {"M2D", "G_D[e,2T] <= 0", "G_M2[a,T] < G_D[a,T] <= 0"},
    {"N_2P", "G_N[a,T] >= 0", "G_N[a,T](t,s) <= 2 G_P[e,2T](2T-t,s)"},
    {"D_2P", "G_N[a,T] >= 0", "0 >= G_D[a,T](t,s) >= -2 G_P[e,2T](2T-t,s)"},
    {"N_2N", "G_N[a,T] >= 0", "G_N[a,T](t,s) <= 2 G_N[e,2T](2T-t,s)"},
    {"M1_2N", "G_N[a,T] >= 0", "0 >= G_M1[a,T](t,s) >= -2 G_N[e,2T](2T-t,s)"},
}};

bool is_dominance(std::string_view id);

struct InequalityCheck {
  std::string name;
  bool strict = false;
  double min_margin = std::numeric_limits<double>::infinity();  ///< min over the grid of rhs - lhs
  GridPoint worst;
  bool pass = false;
};

struct DominanceReport {
  std::string id;
  double lambda = 0.0;
  int n = 0;
  SignReport hypothesis_sign;
  std::vector<InequalityCheck> checks;
  bool pass() const;
};

/// Checks one dominance relation on the grid t_i = s_j = T i / n. The sign
/// hypothesis is verified first with classify_sign and HypothesisError is
/// thrown when it fails. Non-strict inequalities allow a slack of tol; strict
/// ones require rhs - lhs > -tol as well and report the margin.
DominanceReport verify_dominance(const Potential& p, double T, double lambda, std::string_view id,
                                 int n = kDefaultGrid, double tol = kStrictSlack,
                                 double zero_tol = kZeroTolerance);

using Forcing = std::function<double(double)>;

struct ComparisonInfo {
  std::string_view id;
  std::string_view hypothesis;
  std::string_view forcing;
  std::string_view conclusion;
};

inline constexpr std::array<ComparisonInfo, 5> kComparisonCatalog = {{
    {"4.13", "G_P[e,2T] >= 0", "|s2| <= s1", "|u_D[s2]| <= u_N[s1]"},
    {"4.14", "G_P[e,2T] < 0", "0 <= s2 <= s1 (or 0 >= s2 >= s1)", "u_N[s1] <= u_D[s2] <= 0 (or >= >= 0)"},
    {"4.15", "G_N[e,2T] >= 0", "|s2| <= s1", "|u_M1[s2]| <= u_N[s1]"},
    {"4.16", "G_N[e,2T] < 0", "0 <= s2 <= s1 (or 0 >= s2 >= s1)", "u_N[s1] <= u_M1[s2] <= 0 (or >= >= 0)"},
    {"4.17", "G_D[e,2T] <= 0", "0 <= s2 <= s1 (or 0 >= s2 >= s1)", "u_M2[s1] <= u_D[s2] <= 0 (or >= >= 0)"},
}};

bool is_comparison(std::string_view id);

struct ComparisonReport {
  std::string id;
  double lambda = 0.0;
  int n = 0;
  bool hypothesis_met = false;
  std::string hypothesis_failure;  ///< kernel sign or forcing point that failed
  SignReport hypothesis_sign;
  std::vector<InequalityCheck> checks;
  bool pass() const { return hypothesis_met && !checks.empty() && checks_pass(); }
  bool checks_pass() const;
};

/// Solves both boundary value problems with solve_bvp and checks the
/// conclusion at the n + 1 grid points with slack kSolutionSlack. The kernel
/// sign hypothesis and the forcing order are checked first; when either fails
/// the report has hypothesis_met = false and names the first failing point.
ComparisonReport verify_solution_comparison(const Potential& p, double T, double lambda, std::string_view id,
                                            const Forcing& sigma1, const Forcing& sigma2, int n = kDefaultGrid,
                                            double slack = kSolutionSlack, double zero_tol = kZeroTolerance);

struct ZeroSetReport {
  BoundaryCondition bc = BoundaryCondition::Neumann;
  SignReport sign;
  std::vector<GridPoint> misplaced;  ///< zeros outside the allowed set
  bool constant_sign = false;
  bool pass() const { return constant_sign && misplaced.empty(); }
};

/// Zeros of a constant-sign kernel must lie on the diagonal or at the corners
/// (0,L), (L,0) for P and A, at (0,0) or (T,T) for N, and on the diagonal or
/// the boundary of the square for D, M1 and M2.
ZeroSetReport zero_set_check(const GreensFunction& g, double zero_tol = kZeroTolerance);

nlohmann::json to_json(const SignReport& r);
nlohmann::json to_json(const SignPrediction& p);
nlohmann::json to_json(const ThresholdReport& r);
nlohmann::json to_json(const DominanceReport& r);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const ZeroSetReport& r);

}  // namespace hillgreen

#endif  // HILLGREEN_COMPARISON_HPP_
