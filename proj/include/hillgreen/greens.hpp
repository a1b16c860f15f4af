#ifndef HILLGREEN_GREENS_HPP_
#define HILLGREEN_GREENS_HPP_

#include <Eigen/Core>
#include <Eigen/LU>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hillgreen/boundary.hpp"
#include "hillgreen/errors.hpp"
#include "hillgreen/integrator.hpp"
#include "hillgreen/potential.hpp"

namespace hillgreen {

/// Relative threshold on the boundary determinant below which a problem is
/// treated as resonant.
inline constexpr double kResonanceThreshold = 1e-10;
inline constexpr int kDefaultGrid = 100;

/// Problem label used in error messages, e.g. "N on [0, 2]".
std::string problem_name(BoundaryCondition bc, double length);

/// Green's function of u'' + (a + lambda) u = sigma evaluated from the
/// fundamental solutions. Each branch is a bilinear form in phi = (y1, y2):
///
///   G(t, s) = phi(t)^T lower_form phi(s)   for s <= t,
///   G(t, s) = phi(t)^T upper_form phi(s)   for t <= s.
///
/// Both forms are analytic on the whole square, so either branch may be
/// evaluated past the diagonal.
class GreenKernel {
 public:
  GreenKernel(const Potential& p, double lambda, double length, BoundaryCondition bc,
              double tol = kDefaultTolerance);

  double operator()(double t, double s) const { return s <= t ? lower(t, s) : upper(t, s); }
  double lower(double t, double s) const;
  double upper(double t, double s) const;
  /// dG/dt of each branch.
  double lower_dt(double t, double s) const;
  double upper_dt(double t, double s) const;

  BoundaryCondition bc() const noexcept { return bc_; }
  double length() const noexcept { return basis_->length(); }
  double lambda() const noexcept { return basis_->lambda(); }
  /// Boundary determinant: W for separated conditions, 2 -/+ Delta otherwise.
  double determinant() const noexcept { return determinant_; }

  const SolutionBasis& basis() const noexcept { return *basis_; }
  const Eigen::Matrix2d& lower_form() const noexcept { return lower_form_; }
  const Eigen::Matrix2d& upper_form() const noexcept { return upper_form_; }

 private:
  Eigen::Vector2d phi(double t) const;
  Eigen::Vector2d dphi(double t) const;

  BoundaryCondition bc_;
  std::shared_ptr<const SolutionBasis> basis_;
  Eigen::Matrix2d lower_form_;
  Eigen::Matrix2d upper_form_;
  double determinant_ = 0.0;
};

/// Grid sample of a kernel on [0, L]^2 with n intervals per axis.
///
/// `lower` holds the s <= t branch and `upper` the t <= s branch, each
/// evaluated on the full grid. Interpolation uses the table of the branch
/// that owns the query point, so the diagonal kink is never smeared.
/// Index order is (t index, s index).
class GreensFunction {
 public:
  GreensFunction(BoundaryCondition bc, double length, double lambda, Eigen::MatrixXd lower, Eigen::MatrixXd upper,
                 std::size_t potential_hash = 0);

  BoundaryCondition bc() const noexcept { return bc_; }
  double length() const noexcept { return length_; }
  double lambda() const noexcept { return lambda_; }
  int n() const noexcept { return static_cast<int>(lower_.rows()) - 1; }
  std::size_t potential_hash() const noexcept { return potential_hash_; }

  const Eigen::MatrixXd& lower() const noexcept { return lower_; }
  const Eigen::MatrixXd& upper() const noexcept { return upper_; }

  double node(int i) const noexcept { return length_ * i / n(); }
  /// Sample at grid node (t_i, s_j).
  double at(int i, int j) const { return j <= i ? lower_(i, j) : upper_(i, j); }
  /// Bilinear interpolation inside the owning branch. Throws DomainError off the square.
  double operator()(double t, double s) const;

  /// Node values with the owning branch chosen per cell.
  Eigen::MatrixXd values() const;

  /// max_i |lower(i, i) - upper(i, i)|.
  double diagonal_mismatch() const;
  /// max_{i,j} |G(t_i, s_j) - G(t_j, s_i)|.
  double asymmetry() const;

 private:
  BoundaryCondition bc_;
  double length_;
  double lambda_;
  Eigen::MatrixXd lower_;
  Eigen::MatrixXd upper_;
  std::size_t potential_hash_;
};

/// Samples a kernel on the (n + 1)^2 grid. Columns are filled in parallel;
/// every cell is a pure function of its node values.
GreensFunction sample(const GreenKernel& kernel, int n, std::size_t potential_hash = 0);

/// Green's function of u'' + (a + lambda) u = sigma on [0, length] under bc.
/// Throws ResonanceError when the boundary determinant is below threshold.
GreensFunction build_green(const Potential& p, double lambda, double length, BoundaryCondition bc,
                           int n = kDefaultGrid, double tol = kDefaultTolerance);

/// Closed-form kernels for the constant potential a = m^2 (a = 0 with
/// lambda = m^2). Periodic and anti-periodic kernels live on [0, 2L].
template <typename Scalar>
struct ConstantPotentialKernel {
  Scalar m;
  Scalar half;  ///< T: the separated problems live on [0, T], P and A on [0, 2T]
  BoundaryCondition bc;

  ConstantPotentialKernel(Scalar m_, Scalar half_, BoundaryCondition bc_) : m(m_), half(half_), bc(bc_) {
    using std::abs;
    using std::cos;
    using std::sin;
    const Scalar denom = bc == BoundaryCondition::Periodic || bc == BoundaryCondition::Neumann ||
                                 bc == BoundaryCondition::Dirichlet
                             ? m * sin(m * half)
                             : m * cos(m * half);
    if (!(m > Scalar(0))) throw DomainError("closed forms need m > 0");
    if (abs(denom) < Scalar(1e-12)) {
      throw PoleError("closed form for " + std::string(tag(bc)) + " has a pole at m = " +
                      std::to_string(static_cast<double>(m)));
    }
  }

  Scalar domain_length() const noexcept { return is_separated(bc) ? half : Scalar(2) * half; }

  /// s <= t branch.
  Scalar lower(Scalar t, Scalar s) const {
    using std::cos;
    using std::sin;
    const Scalar T = half;
    switch (bc) {
      case BoundaryCondition::Periodic: return cos(m * (s - t + T)) / (Scalar(2) * m * sin(m * T));
      case BoundaryCondition::AntiPeriodic: return -sin(m * (s - t + T)) / (Scalar(2) * m * cos(m * T));
      case BoundaryCondition::Neumann: return cos(m * s) * cos(m * (T - t)) / (m * sin(m * T));
      case BoundaryCondition::Dirichlet: return sin(m * s) * sin(m * (t - T)) / (m * sin(m * T));
      case BoundaryCondition::Mixed1: return cos(m * s) * sin(m * (t - T)) / (m * cos(m * T));
      case BoundaryCondition::Mixed2: return -sin(m * s) * cos(m * (T - t)) / (m * cos(m * T));
    }
    return Scalar(0);
  }

  /// t <= s branch.
  Scalar upper(Scalar t, Scalar s) const {
    using std::cos;
    using std::sin;
    const Scalar T = half;
    switch (bc) {
      case BoundaryCondition::Periodic: return cos(m * (s - t - T)) / (Scalar(2) * m * sin(m * T));
      case BoundaryCondition::AntiPeriodic: return -sin(m * (-s + t + T)) / (Scalar(2) * m * cos(m * T));
      case BoundaryCondition::Neumann: return cos(m * t) * cos(m * (T - s)) / (m * sin(m * T));
      case BoundaryCondition::Dirichlet: return sin(m * t) * sin(m * (s - T)) / (m * sin(m * T));
      case BoundaryCondition::Mixed1: return cos(m * t) * sin(m * (s - T)) / (m * cos(m * T));
      case BoundaryCondition::Mixed2: return -sin(m * t) * cos(m * (T - s)) / (m * cos(m * T));
    }
    return Scalar(0);
  }

  Scalar operator()(Scalar t, Scalar s) const { return s <= t ? lower(t, s) : upper(t, s); }
};

/// Periodic kernel on [0, T] for the constant potential (pi / T)^2.
template <typename Scalar>
struct ResonantPiPeriodicKernel {
  Scalar period;

  Scalar lower(Scalar t, Scalar s) const {
    using std::sin;
    const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
    return period / (Scalar(2) * pi) * sin(pi * (t - s) / period);
  }
  Scalar upper(Scalar t, Scalar s) const {
    using std::sin;
    const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
    return period / (Scalar(2) * pi) * sin(pi * (t - s + period) / period);
  }
  Scalar operator()(Scalar t, Scalar s) const { return s <= t ? lower(t, s) : upper(t, s); }
};

/// Grid sample of ConstantPotentialKernel (lambda = m^2 on the zero potential).
GreensFunction closed_form_constant(double m, double length, BoundaryCondition bc, int n = kDefaultGrid);

/// Grid sample of the periodic kernel for a = (pi / T)^2 on [0, T].
GreensFunction closed_form_periodic_pi(double period, int n = kDefaultGrid);

/// Solution u(t) = int_0^L G(t, s) sigma(s) ds of the forced problem.
///
/// The integral is split at s = t and at the potential's breakpoints; each
/// piece uses composite Simpson with a fixed panel count, so the quadrature
/// error is smooth in t between breakpoints.
class BvpSolution {
 public:
  BvpSolution(GreenKernel kernel, std::function<double(double)> sigma, int panels,
              std::vector<double> breakpoints = {});

  double operator()(double t) const;
  /// u at the n + 1 uniform nodes of [0, L].
  Eigen::VectorXd sample(int n) const;

  const GreenKernel& kernel() const noexcept { return kernel_; }
  double length() const noexcept { return kernel_.length(); }

 private:
  Eigen::Vector2d simpson(double a, double b) const;
  Eigen::Vector2d weighted_integral(double a, double b) const;

  GreenKernel kernel_;
  std::function<double(double)> sigma_;
  int panels_;
  std::vector<double> breakpoints_;
};

BvpSolution solve_bvp(const Potential& p, double lambda, double length, BoundaryCondition bc,
                      std::function<double(double)> sigma, int n = kDefaultGrid, double tol = kDefaultTolerance);

}  // namespace hillgreen

#endif  // HILLGREEN_GREENS_HPP_
