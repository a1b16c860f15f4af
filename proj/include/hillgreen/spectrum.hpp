#ifndef HILLGREEN_SPECTRUM_HPP_
#define HILLGREEN_SPECTRUM_HPP_

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hillgreen/boundary.hpp"
#include "hillgreen/integrator.hpp"
#include "hillgreen/potential.hpp"

namespace hillgreen {

/// Delta - 2 (P), Delta + 2 (A), y1'(L) (N), y2(L) (D), y1(L) (M1), y2'(L) (M2).
/// Zero exactly at the eigenvalues of the corresponding problem on [0, L].
double characteristic_value(const Potential& p, double lambda, double length, BoundaryCondition bc,
                            double tol = kDefaultTolerance);

/// Number of eigenvalues of a separated problem on [0, L] strictly below
/// lambda, from the unwrapped Pruefer angle of the solution meeting the
/// condition at 0.
int eigenvalue_count_below(const Potential& p, double lambda, double length, BoundaryCondition bc,
                           double tol = kDefaultTolerance);

/// Interior zeros of the solution meeting the left condition, on (0, L).
int interior_zero_count(const Potential& p, double lambda, double length, BoundaryCondition bc,
                        double tol = kDefaultTolerance);

struct Eigenvalue {
  int k = 0;             ///< index of the (first copy of the) eigenvalue
  double value = 0.0;
  int multiplicity = 1;  ///< 2 for coexisting periodic or anti-periodic eigenvalues
};

enum class SpectrumMethod {
  /// Separated problems by their characteristic function. Periodic and
  /// anti-periodic problems of an even extension by the unions
  /// P = N u D and A = M1 u M2 of the half; otherwise as Discriminant.
  Factorized,
  /// Roots of Delta -/+ 2 with tangency detection at extrema of Delta.
  Discriminant,
};

struct SpectrumOptions {
  int scan_points = 2000;
  double root_tol = 1e-10;
  double integrator_tol = kDefaultTolerance;
  bool polish = true;
  /// |Delta -/+ 2| at an extremum below which the extremum is a double root.
  /// Refinement evaluates Delta -/+ 2 as a determinant of the monodromy, whose
  /// noise vanishes at coexistence. Gaps narrower than about root_tol or
  /// sqrt(tangency_tol / |Delta''|) read as coexistence.
  double tangency_tol = 1e-16;
  SpectrumMethod method = SpectrumMethod::Factorized;
};

/// Eigenvalues of one problem inside [lower, upper], sorted and merged.
struct Spectrum {
  BoundaryCondition bc = BoundaryCondition::Periodic;
  double length = 0.0;
  std::vector<Eigenvalue> eigenvalues;
  double lower = 0.0;
  double upper = 0.0;
  double root_tol = 0.0;
  double scan_step = 0.0;  ///< spacing of the bracketing scan
  /// Separated problems: eigenvalue count in range from the Pruefer angle,
  /// -1 when not audited. Equals the number found unless a root was missed.
  int audited_count = -1;

  /// Values repeated by multiplicity.
  std::vector<double> values() const;
  std::size_t count() const;
};

/// All eigenvalues in [lower, upper] (at most max_count counting multiplicity).
Spectrum find_eigenvalues(const Potential& p, double length, BoundaryCondition bc, double lower, double upper,
                          const SpectrumOptions& options = {},
                          std::size_t max_count = std::numeric_limits<std::size_t>::max());

/// Smallest eigenvalue; the search starts below -sup(a) where none can lie.
double first_eigenvalue(const Potential& p, double length, BoundaryCondition bc, const SpectrumOptions& options = {});

/// The first `count` eigenvalues counting multiplicity.
Spectrum first_eigenvalues(const Potential& p, double length, BoundaryCondition bc, std::size_t count,
                           const SpectrumOptions& options = {});

/// Multiset comparison of two eigenvalue lists.
struct SetEquality {
  std::string name;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> unmatched_lhs;
  std::vector<double> unmatched_rhs;
  double max_pair_error = 0.0;
  bool pass = false;
};

struct DecompositionReport {
  std::vector<SetEquality> checks;
  bool pass() const;
};

/// Range [lower, upper] that holds the first `count` eigenvalues of every set
/// compared by verify_spectral_decomposition. The count-th Dirichlet
/// eigenvalue on [0, T] bounds them all.
std::pair<double, double> decomposition_window(const Potential& p, double T, std::size_t count,
                                               const SpectrumOptions& options = {});

/// Checks, for a on [0, T] with even extensions e (2T) and ee (4T):
///   N u D = P[e,2T],  M1 u M2 = A[e,2T],  P[e,2T] u A[e,2T] = P[ee,4T],
///   N u M1 = N[e,2T], D u M2 = D[e,2T].
/// Left sides use the separated spectra on [0, T]; periodic and anti-periodic
/// sides come from the discriminant, so the checks are independent. Values
/// within 1e-6 of `upper` are dropped; with compare_count > 0 only the first
/// compare_count entries of each side are paired.
DecompositionReport verify_spectral_decomposition(const Potential& p, double T, double lower, double upper,
                                                  double pairing_tol = 1e-5, std::size_t compare_count = 0,
                                                  const SpectrumOptions& options = {});

enum class Relation { Equal, Less, LessEqual };

/// One checked relation lhs (op) rhs.
struct RelationCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::Equal;
  double margin = 0.0;  ///< rhs - lhs for inequalities, |lhs - rhs| for equalities
  bool pass = false;
};

struct RelationReport {
  std::vector<RelationCheck> checks;
  bool pass() const;
};

/// First-eigenvalue relations for a on [0, T]:
///   lambda_N(a,T) = lambda_N(e,2T) = lambda_P(e,2T)
///   lambda_M2(a,T) is the first root of lambda -> G_P[e+lambda,2T](0,0) above lambda_P
///   lambda_M1(a,T) is the first root of lambda -> G_P[e+lambda,2T](T,T) above lambda_P
///   lambda_A(e,2T) = min(lambda_M1, lambda_M2)
///   lambda_M2(a,T) = lambda_D(e,2T) < lambda_D(a,T)
///   lambda_N(a,T) < lambda_M1(a,T)
/// Equalities pass within eq_tol, strict inequalities need a margin above strict_margin.
RelationReport first_eigenvalue_relations(const Potential& p, double T, double eq_tol = 1e-5,
                                          double strict_margin = 1e-6, const SpectrumOptions& options = {});

/// First root above lambda_P(e,2T) of lambda -> G_P[e+lambda,2T](x,x), x in {0, T}.
double periodic_corner_root(const Potential& p, double T, bool at_end, const SpectrumOptions& options = {});

/// Ordering chains for the first `indices` eigenvalues of each problem:
///   N_k < M1_k < N_k+1,  M2_k < D_k < M2_k+1,
///   N_k < M2_k < N_k+1,  M1_k < D_k < M1_k+1,
///   N_k < {M1_k, M2_k} < {D_k, N_k+1},
///   lambda_0 < lambda'_1 <= lambda'_2 < lambda_1 <= lambda_2 < ... for P/A on [0, 2T].
RelationReport verify_interlacing(const Potential& p, double T, int indices = 3, double strict_margin = 1e-6,
                                  const SpectrumOptions& options = {});

struct StabilityInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool stable = false;  ///< |Delta| < 2 inside
};

/// Stable and unstable lambda-intervals of u'' + (a + lambda) u = 0 with
/// period L = p.length() over [lower, upper]. Edges are the roots of
/// Delta = +-2; coexistence points (double roots) appear as zero-width
/// unstable intervals.
std::vector<StabilityInterval> stability_intervals(const Potential& p, double lower, double upper,
                                                   int scan_points = 2000, double edge_tol = 1e-8,
                                                   double tol = kDefaultTolerance);

/// `bc,k,lambda,multiplicity` rows.
void write_spectrum_csv(std::ostream& out, const std::vector<Spectrum>& spectra, bool header = true);
/// `lambda,delta` rows at `points` uniform samples of [lower, upper].
void write_sweep_csv(std::ostream& out, const Potential& p, double length, double lower, double upper, int points,
                     double tol = kDefaultTolerance);

nlohmann::json to_json(const Spectrum& s);
nlohmann::json to_json(const DecompositionReport& r);
nlohmann::json to_json(const RelationReport& r);
nlohmann::json to_json(const std::vector<StabilityInterval>& bands);

}  // namespace hillgreen

#endif  // HILLGREEN_SPECTRUM_HPP_
