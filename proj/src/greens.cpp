#include "hillgreen/greens.hpp"

#include <algorithm>
#include <sstream>

#include "hillgreen/io.hpp"
#include "hillgreen/parallel.hpp"

namespace hillgreen {

namespace {

const Eigen::Matrix2d kSymplectic = (Eigen::Matrix2d() << 0.0, -1.0, 1.0, 0.0).finished();

struct SeparatedData {
  Eigen::Vector2d left;   // coefficients of the solution meeting the condition at 0
  Eigen::Vector2d right;  // ... and at L
};

// With phi(0) = I the Wronskian of left.phi and right.phi is left x right.
SeparatedData separated_solutions(BoundaryCondition bc, const SolutionBasis& basis) {
  const double y1 = basis.y1_end(), y1p = basis.y1p_end(), y2 = basis.y2_end(), y2p = basis.y2p_end();
  const Eigen::Vector2d y1_start(1.0, 0.0);
  const Eigen::Vector2d y2_start(0.0, 1.0);
  const Eigen::Vector2d zero_derivative_at_end(-y2p, y1p);  // y1'(L) y2 - y2'(L) y1
  const Eigen::Vector2d zero_value_at_end(y2, -y1);         // y2(L) y1 - y1(L) y2
  switch (bc) {
    case BoundaryCondition::Neumann: return {y1_start, zero_derivative_at_end};
    case BoundaryCondition::Dirichlet: return {y2_start, zero_value_at_end};
    case BoundaryCondition::Mixed1: return {y1_start, zero_value_at_end};
    case BoundaryCondition::Mixed2: return {y2_start, zero_derivative_at_end};
    default: break;
  }
  throw DomainError("not a separated boundary condition");
}

int cell_index(double x, int n, double& fraction) {
  const int i = std::clamp(static_cast<int>(std::floor(x)), 0, n - 1);
  fraction = x - i;
  return i;
}

}  // namespace

std::string problem_name(BoundaryCondition bc, double length) {
  std::ostringstream os;
  os << tag(bc) << " on [0, " << format_number(length) << "]";
  return os.str();
}

GreenKernel::GreenKernel(const Potential& p, double lambda, double length, BoundaryCondition bc, double tol)
    : bc_(bc), basis_(std::make_shared<const SolutionBasis>(fundamental_solutions(p, lambda, length, tol))) {
  const Eigen::Matrix2d monodromy = basis_->monodromy();
  const double scale = std::max(1.0, monodromy.cwiseAbs().maxCoeff());

  if (is_separated(bc)) {
    const SeparatedData d = separated_solutions(bc, *basis_);
    determinant_ = d.left[0] * d.right[1] - d.left[1] * d.right[0];
    if (std::abs(determinant_) < kResonanceThreshold * scale) {
      throw ResonanceError(problem_name(bc, length), determinant_);
    }
    lower_form_ = d.right * d.left.transpose() / determinant_;
    upper_form_ = d.left * d.right.transpose() / determinant_;
    return;
  }

  // G = H(t - s) K(t, s) + phi(t)^T C phi(s) with K the causal kernel
  // phi(t)^T J phi(s); the (anti-)periodicity conditions fix C.
  const double sign = bc == BoundaryCondition::Periodic ? 1.0 : -1.0;
  const Eigen::Matrix2d shifted = monodromy - sign * Eigen::Matrix2d::Identity();
  determinant_ = shifted.determinant();
  if (std::abs(determinant_) < kResonanceThreshold * scale) {
    throw ResonanceError(problem_name(bc, length), determinant_);
  }
  upper_form_ = -shifted.inverse() * monodromy * kSymplectic;
  lower_form_ = kSymplectic + upper_form_;
}

Eigen::Vector2d GreenKernel::phi(double t) const {
  const auto s = basis_->state(t);
  return {s[0], s[2]};
}

Eigen::Vector2d GreenKernel::dphi(double t) const {
  const auto s = basis_->state(t);
  return {s[1], s[3]};
}

double GreenKernel::lower(double t, double s) const { return phi(t).dot(lower_form_ * phi(s)); }
double GreenKernel::upper(double t, double s) const { return phi(t).dot(upper_form_ * phi(s)); }
double GreenKernel::lower_dt(double t, double s) const { return dphi(t).dot(lower_form_ * phi(s)); }
double GreenKernel::upper_dt(double t, double s) const { return dphi(t).dot(upper_form_ * phi(s)); }

GreensFunction::GreensFunction(BoundaryCondition bc, double length, double lambda, Eigen::MatrixXd lower,
                               Eigen::MatrixXd upper, std::size_t potential_hash)
    : bc_(bc),
      length_(length),
      lambda_(lambda),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      potential_hash_(potential_hash) {
  if (lower_.rows() < 2 || lower_.rows() != lower_.cols() || upper_.rows() != lower_.rows() ||
      upper_.cols() != lower_.cols()) {
    throw DomainError("kernel tables must be matching square grids with n >= 1");
  }
}

double GreensFunction::operator()(double t, double s) const {
  const double slack = 1e-12 * length_;
  if (t < -slack || t > length_ + slack || s < -slack || s > length_ + slack) {
    throw DomainError("kernel query outside [0, L]^2");
  }
  const int grid = n();
  const Eigen::MatrixXd& table = s <= t ? lower_ : upper_;
  double ft, fs;
  const int i = cell_index(t / length_ * grid, grid, ft);
  const int j = cell_index(s / length_ * grid, grid, fs);
  return (1 - ft) * ((1 - fs) * table(i, j) + fs * table(i, j + 1)) +
         ft * ((1 - fs) * table(i + 1, j) + fs * table(i + 1, j + 1));
}

Eigen::MatrixXd GreensFunction::values() const {
  Eigen::MatrixXd v = upper_;
  v.triangularView<Eigen::Lower>() = lower_;
  return v;
}

double GreensFunction::diagonal_mismatch() const {
  return (lower_.diagonal() - upper_.diagonal()).cwiseAbs().maxCoeff();
}

double GreensFunction::asymmetry() const {
  const Eigen::MatrixXd v = values();
  return (v - v.transpose()).cwiseAbs().maxCoeff();
}

GreensFunction sample(const GreenKernel& kernel, int n, std::size_t potential_hash) {
  if (n < 1) throw DomainError("grid size must be at least 1");
  const double length = kernel.length();
  Eigen::Matrix2Xd phi(2, n + 1);
  parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t i) {
    const auto s = kernel.basis().state(i == static_cast<std::size_t>(n) ? length : length * i / n);
    phi(0, i) = s[0];
    phi(1, i) = s[2];
  });
  Eigen::MatrixXd lower = phi.transpose() * kernel.lower_form() * phi;
  Eigen::MatrixXd upper = phi.transpose() * kernel.upper_form() * phi;
  return GreensFunction(kernel.bc(), length, kernel.lambda(), std::move(lower), std::move(upper), potential_hash);
}

GreensFunction build_green(const Potential& p, double lambda, double length, BoundaryCondition bc, int n,
                           double tol) {
  return sample(GreenKernel(p, lambda, length, bc, tol), n, potential_hash(p));
}

GreensFunction closed_form_constant(double m, double length, BoundaryCondition bc, int n) {
  const ConstantPotentialKernel<double> kernel(m, length, bc);
  const double domain = kernel.domain_length();
  Eigen::MatrixXd lower(n + 1, n + 1), upper(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = domain * i / n;
    for (int j = 0; j <= n; ++j) {
      const double s = domain * j / n;
      lower(i, j) = kernel.lower(t, s);
      upper(i, j) = kernel.upper(t, s);
    }
  }
  return GreensFunction(bc, domain, m * m, std::move(lower), std::move(upper),
                        potential_hash(Potential::constant(0.0, domain)));
}

GreensFunction closed_form_periodic_pi(double period, int n) {
  const ResonantPiPeriodicKernel<double> kernel{period};
  Eigen::MatrixXd lower(n + 1, n + 1), upper(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = period * i / n;
    for (int j = 0; j <= n; ++j) {
      const double s = period * j / n;
      lower(i, j) = kernel.lower(t, s);
      upper(i, j) = kernel.upper(t, s);
    }
  }
  const double pi_over_t = 3.141592653589793 / period;
  return GreensFunction(BoundaryCondition::Periodic, period, 0.0, std::move(lower), std::move(upper),
                        potential_hash(Potential::constant(pi_over_t * pi_over_t, period)));
}

BvpSolution::BvpSolution(GreenKernel kernel, std::function<double(double)> sigma, int panels,
                         std::vector<double> breakpoints)
    : kernel_(std::move(kernel)), sigma_(std::move(sigma)), panels_(panels + panels % 2) {
  if (panels_ < 2) throw DomainError("quadrature needs at least two panels");
  for (double b : breakpoints) {
    if (b > 0.0 && b < kernel_.length()) breakpoints_.push_back(b);
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

Eigen::Vector2d BvpSolution::weighted_integral(double a, double b) const {
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  double from = a;
  for (double c : breakpoints_) {
    if (c <= from) continue;
    if (c >= b) break;
    acc += simpson(from, c);
    from = c;
  }
  return acc + simpson(from, b);
}

Eigen::Vector2d BvpSolution::simpson(double a, double b) const {
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  if (!(b > a)) return acc;
  const double h = (b - a) / panels_;
  for (int k = 0; k <= panels_; ++k) {
    const double s = k == panels_ ? b : a + h * k;
    const auto state = kernel_.basis().state(s);
    const double w = (k == 0 || k == panels_) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * sigma_(s) * Eigen::Vector2d(state[0], state[2]);
  }
  return acc * (h / 3.0);
}

double BvpSolution::operator()(double t) const {
  const double length = kernel_.length();
  if (!(t >= 0.0 && t <= length)) throw DomainError("t outside [0, L]");
  const auto state = kernel_.basis().state(t);
  const Eigen::Vector2d phi_t(state[0], state[2]);
  const Eigen::Vector2d left = weighted_integral(0.0, t);
  const Eigen::Vector2d right = weighted_integral(t, length);
  return phi_t.dot(kernel_.lower_form() * left + kernel_.upper_form() * right);
}

Eigen::VectorXd BvpSolution::sample(int n) const {
  Eigen::VectorXd u(n + 1);
  const double length = kernel_.length();
  parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t i) {
    u[static_cast<Eigen::Index>(i)] = (*this)(i == static_cast<std::size_t>(n) ? length : length * i / n);
  });
  return u;
}

BvpSolution solve_bvp(const Potential& p, double lambda, double length, BoundaryCondition bc,
                      std::function<double(double)> sigma, int n, double tol) {
  return BvpSolution(GreenKernel(p, lambda, length, bc, tol), std::move(sigma), 2 * n, p.breakpoints());
}

}  // namespace hillgreen
