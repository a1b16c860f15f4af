#include "hillgreen/integrator.hpp"

#include <string>

#include "hillgreen/errors.hpp"

namespace hillgreen {

namespace {

void check_arguments(const Potential& p, double length, double tol) {
  if (!(length > 0.0) || length > p.length()) {
    throw DomainError("integration length " + std::to_string(length) + " outside (0, " +
                      std::to_string(p.length()) + "]");
  }
  if (!(tol >= 1e-14 && tol <= 1e-4)) throw DomainError("tolerance must lie in [1e-14, 1e-4]");
}

// Restarts the integrator at every breakpoint so discontinuous potentials
// produce Caratheodory solutions. `rhs(segment, lambda)` builds the right-hand
// side used inside one segment.
template <int Dim, typename MakeRhs>
Eigen::Matrix<double, Dim, 1> integrate_pieces(const Potential& p, double length, Eigen::Matrix<double, Dim, 1> y,
                                               double tol, MakeRhs&& make_rhs,
                                               DenseTrajectory<double, Dim>* trajectory) {
  StepControl<double> control;
  control.rtol = tol;
  control.atol = tol;
  control.max_step = length / 16.0;
  for (const Segment& segment : p.segments()) {
    if (segment.from >= length) break;
    const double end = std::min(segment.to, length);
    y = integrate_dopri5<double, Dim>(make_rhs(segment), segment.from, end, y, control, trajectory);
  }
  if (trajectory != nullptr) trajectory->set_end(length, y);
  return y;
}

}  // namespace

SolutionBasis::SolutionBasis(double lambda, double length, double tol, DenseTrajectory<double, 4> trajectory)
    : lambda_(lambda), length_(length), tol_(tol), trajectory_(std::move(trajectory)) {}

SolutionBasis::State SolutionBasis::state(double t) const {
  if (!(t >= 0.0 && t <= length_)) {
    throw DomainError("t = " + std::to_string(t) + " outside [0, " + std::to_string(length_) + "]");
  }
  if (t == 0.0) return State(1.0, 0.0, 0.0, 1.0);
  return trajectory_(t);
}

Eigen::Matrix2d SolutionBasis::fundamental_matrix(double t) const {
  const State s = state(t);
  Eigen::Matrix2d m;
  m << s[0], s[2], s[1], s[3];
  return m;
}

Eigen::Matrix2d SolutionBasis::monodromy() const { return fundamental_matrix(length_); }

double SolutionBasis::wronskian(double t) const {
  const State s = state(t);
  return s[0] * s[3] - s[1] * s[2];
}

SolutionBasis fundamental_solutions(const Potential& p, double lambda, double length, double tol) {
  check_arguments(p, length, tol);
  const double shift = p.shift() + lambda;
  auto make_rhs = [shift](const Segment& segment) {
    return [&segment, shift](double t, const Eigen::Vector4d& y) {
      const double q = segment(t) + shift;
      return Eigen::Vector4d(y[1], -q * y[0], y[3], -q * y[2]);
    };
  };
  DenseTrajectory<double, 4> trajectory;
  integrate_pieces<4>(p, length, Eigen::Vector4d(1.0, 0.0, 0.0, 1.0), tol, make_rhs, &trajectory);
  return SolutionBasis(lambda, length, tol, std::move(trajectory));
}

double discriminant(const Potential& p, double lambda, double length, double tol) {
  check_arguments(p, length, tol);
  const double shift = p.shift() + lambda;
  auto make_rhs = [shift](const Segment& segment) {
    return [&segment, shift](double t, const Eigen::Vector4d& y) {
      const double q = segment(t) + shift;
      return Eigen::Vector4d(y[1], -q * y[0], y[3], -q * y[2]);
    };
  };
  const Eigen::Vector4d end =
      integrate_pieces<4>(p, length, Eigen::Vector4d(1.0, 0.0, 0.0, 1.0), tol, make_rhs, nullptr);
  return end[0] + end[3];
}

DiscriminantSlope discriminant_with_slope(const Potential& p, double lambda, double length, double tol) {
  check_arguments(p, length, tol);
  const double shift = p.shift() + lambda;
  using State = Eigen::Matrix<double, 8, 1>;
  // (y1, y1', y2, y2', z1, z1', z2, z2') with z = dy/dlambda: z'' + q z = -y.
  auto make_rhs = [shift](const Segment& segment) {
    return [&segment, shift](double t, const State& y) {
      const double q = segment(t) + shift;
      State d;
      d << y[1], -q * y[0], y[3], -q * y[2], y[5], -q * y[4] - y[0], y[7], -q * y[6] - y[2];
      return d;
    };
  };
  State y0 = State::Zero();
  y0[0] = 1.0;
  y0[3] = 1.0;
  const State end = integrate_pieces<8>(p, length, y0, tol, make_rhs, nullptr);
  return {end[0] + end[3], end[4] + end[7]};
}

DenseTrajectory<double, 2> solve_initial_value(const Potential& p, double lambda, double length, double u0,
                                               double du0, double tol) {
  check_arguments(p, length, tol);
  const double shift = p.shift() + lambda;
  auto make_rhs = [shift](const Segment& segment) {
    return [&segment, shift](double t, const Eigen::Vector2d& y) {
      return Eigen::Vector2d(y[1], -(segment(t) + shift) * y[0]);
    };
  };
  DenseTrajectory<double, 2> trajectory;
  integrate_pieces<2>(p, length, Eigen::Vector2d(u0, du0), tol, make_rhs, &trajectory);
  return trajectory;
}

}  // namespace hillgreen
