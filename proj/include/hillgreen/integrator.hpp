#ifndef HILLGREEN_INTEGRATOR_HPP_
#define HILLGREEN_INTEGRATOR_HPP_

#include <Eigen/Core>

#include "hillgreen/dormand_prince.hpp"
#include "hillgreen/potential.hpp"

namespace hillgreen {

inline constexpr double kDefaultTolerance = 1e-10;

/// Fundamental solutions y1, y2 of u'' + (a(t) + lambda) u = 0 with
/// y1(0) = 1, y1'(0) = 0, y2(0) = 0, y2'(0) = 1, and their dense trajectory.
///
/// States are packed as (y1, y1', y2, y2').
class SolutionBasis {
 public:
  using State = Eigen::Vector4d;

  SolutionBasis(double lambda, double length, double tol, DenseTrajectory<double, 4> trajectory);

  double lambda() const noexcept { return lambda_; }
  double length() const noexcept { return length_; }
  double tolerance() const noexcept { return tol_; }

  double y1_end() const noexcept { return end()[0]; }
  double y1p_end() const noexcept { return end()[1]; }
  double y2_end() const noexcept { return end()[2]; }
  double y2p_end() const noexcept { return end()[3]; }
  const State& end() const noexcept { return trajectory_.end_state(); }

  /// (y1, y1', y2, y2') at t in [0, L].
  State state(double t) const;

  /// [[y1, y2], [y1', y2']] at t.
  Eigen::Matrix2d fundamental_matrix(double t) const;
  Eigen::Matrix2d monodromy() const;

  double wronskian(double t) const;
  double discriminant() const noexcept { return y1_end() + y2p_end(); }

  const DenseTrajectory<double, 4>& trajectory() const noexcept { return trajectory_; }

 private:
  double lambda_;
  double length_;
  double tol_;
  DenseTrajectory<double, 4> trajectory_;
};

SolutionBasis fundamental_solutions(const Potential& p, double lambda, double length,
                                    double tol = kDefaultTolerance);

/// Delta(lambda) = y1(L) + y2'(L).
double discriminant(const Potential& p, double lambda, double length, double tol = kDefaultTolerance);

struct DiscriminantSlope {
  double value;
  double slope;  ///< dDelta/dlambda from the variational equations
};

DiscriminantSlope discriminant_with_slope(const Potential& p, double lambda, double length,
                                          double tol = kDefaultTolerance);

/// Solution of u'' + (a + lambda) u = 0 with u(0) = u0, u'(0) = du0; states (u, u').
DenseTrajectory<double, 2> solve_initial_value(const Potential& p, double lambda, double length, double u0,
                                               double du0, double tol = kDefaultTolerance);

}  // namespace hillgreen

#endif  // HILLGREEN_INTEGRATOR_HPP_
