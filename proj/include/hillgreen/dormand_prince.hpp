#ifndef HILLGREEN_DORMAND_PRINCE_HPP_
#define HILLGREEN_DORMAND_PRINCE_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hillgreen/errors.hpp"

namespace hillgreen {

/// Dormand-Prince 5(4) coefficients with Hairer's continuous extension.
template <typename Scalar>
struct DormandPrinceTableau {
  static constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;

  static constexpr Scalar a21 = Scalar(1) / 5;
  static constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  static constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
  static constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187, a53 = Scalar(64448) / 6561,
                          a54 = Scalar(-212) / 729;
  static constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                          a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
  static constexpr Scalar a71 = Scalar(35) / 384, a73 = Scalar(500) / 1113, a74 = Scalar(125) / 192,
                          a75 = Scalar(-2187) / 6784, a76 = Scalar(11) / 84;

  static constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                          e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;

  static constexpr Scalar d1 = Scalar(-12715105075.0L / 11282082432.0L), d3 = Scalar(87487479700.0L / 32700410799.0L),
                          d4 = Scalar(-10690763975.0L / 1880347072.0L), d5 = Scalar(701980252875.0L / 199316789632.0L),
                          d6 = Scalar(-1453857185.0L / 822651844.0L), d7 = Scalar(69997945.0L / 29380423.0L);
};

/// Accepted step with the coefficients of its continuous extension.
template <typename Scalar, int Dim>
struct DenseStep {
  using State = Eigen::Matrix<Scalar, Dim, 1>;
  Scalar t0;
  Scalar h;
  State r1, r2, r3, r4, r5;

  State operator()(Scalar t) const {
    const Scalar theta = (t - t0) / h;
    const Scalar theta1 = Scalar(1) - theta;
    return r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
  }
};

/// Piecewise dense output over [t_begin, t_end].
template <typename Scalar, int Dim>
class DenseTrajectory {
 public:
  using State = Eigen::Matrix<Scalar, Dim, 1>;

  void push(DenseStep<Scalar, Dim> step) { steps_.push_back(std::move(step)); }
  void set_end(Scalar t, const State& y) {
    t_end_ = t;
    y_end_ = y;
  }

  bool empty() const noexcept { return steps_.empty(); }
  Scalar t_end() const noexcept { return t_end_; }
  const State& end_state() const noexcept { return y_end_; }
  std::size_t size() const noexcept { return steps_.size(); }
  const std::vector<DenseStep<Scalar, Dim>>& steps() const noexcept { return steps_; }

  /// Interpolated state; exact at t_end.
  State operator()(Scalar t) const {
    if (t >= t_end_) return y_end_;
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](Scalar v, const DenseStep<Scalar, Dim>& s) { return v < s.t0; });
    if (it == steps_.begin()) return steps_.front().r1;
    return (*(it - 1))(t);
  }

 private:
  std::vector<DenseStep<Scalar, Dim>> steps_;
  Scalar t_end_ = Scalar(0);
  State y_end_ = State::Zero();
};

template <typename Scalar>
struct StepControl {
  Scalar rtol = Scalar(1e-10);
  Scalar atol = Scalar(1e-10);
  Scalar max_step = Scalar(0);  // 0: unbounded
};

/// Integrates y' = f(t, y) from t0 to t1 with adaptive DP5(4) steps, appending
/// every accepted step to `trajectory`. Returns the state at t1 (hit exactly).
template <typename Scalar, int Dim, typename Rhs>
Eigen::Matrix<Scalar, Dim, 1> integrate_dopri5(Rhs&& f, Scalar t0, Scalar t1, Eigen::Matrix<Scalar, Dim, 1> y,
                                                const StepControl<Scalar>& control,
                                                DenseTrajectory<Scalar, Dim>* trajectory) {
  using State = Eigen::Matrix<Scalar, Dim, 1>;
  using T = DormandPrinceTableau<Scalar>;
  using std::abs;
  using std::max;
  using std::min;
  using std::pow;
  using std::sqrt;

  const Scalar span = t1 - t0;
  if (!(span > Scalar(0))) return y;

  auto error_norm = [&](const State& err, const State& y0, const State& y1) {
    Scalar acc(0);
    for (int i = 0; i < Dim; ++i) {
      const Scalar sk = control.atol + control.rtol * max(abs(y0[i]), abs(y1[i]));
      acc += (err[i] / sk) * (err[i] / sk);
    }
    return sqrt(acc / Scalar(Dim));
  };

  State k1 = f(t0, y);

  // Initial step guess (Hairer, Norsett & Wanner, II.4).
  Scalar h;
  {
    const Scalar d0 = error_norm(y, State::Zero(), State::Zero()) * sqrt(Scalar(Dim));
    const Scalar d1 = error_norm(k1, y, y);
    Scalar h0 = (d0 < Scalar(1e-5) || d1 < Scalar(1e-5)) ? Scalar(1e-6) : Scalar(0.01) * d0 / d1;
    h0 = min(h0, span);
    const State y_euler = y + h0 * k1;
    const State f_euler = f(t0 + h0, y_euler);
    const Scalar d2 = error_norm(f_euler - k1, y, y) / h0;
    const Scalar dm = max(d1, d2);
    const Scalar h1 = dm <= Scalar(1e-15) ? max(Scalar(1e-6), h0 * Scalar(1e-3)) : pow(Scalar(0.01) / dm, Scalar(0.2));
    h = min(Scalar(100) * h0, h1);
  }
  if (control.max_step > Scalar(0)) h = min(h, control.max_step);

  Scalar t = t0;
  Scalar err_old = Scalar(1e-4);
  bool last_rejected = false;
  while (t < t1) {
    if (control.max_step > Scalar(0)) h = min(h, control.max_step);
    bool last = false;
    if (t + h >= t1 || t + Scalar(1.01) * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < Scalar(64) * std::numeric_limits<Scalar>::epsilon() * max(Scalar(1), abs(t))) {
      throw IntegrationError("step size underflow at t = " + std::to_string(static_cast<double>(t)),
                             static_cast<double>(t));
    }

    const State k2 = f(t + T::c2 * h, y + h * (T::a21 * k1));
    const State k3 = f(t + T::c3 * h, y + h * (T::a31 * k1 + T::a32 * k2));
    const State k4 = f(t + T::c4 * h, y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
    const State k5 = f(t + T::c5 * h, y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
    const Scalar t_next = last ? t1 : t + h;
    const State k6 =
        f(t_next, y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5));
    const State y_next = y + h * (T::a71 * k1 + T::a73 * k3 + T::a74 * k4 + T::a75 * k5 + T::a76 * k6);
    const State k7 = f(t_next, y_next);

    const State err = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
    const Scalar e = error_norm(err, y, y_next);

    if (!(e == e)) {
      throw IntegrationError("non-finite state at t = " + std::to_string(static_cast<double>(t)),
                             static_cast<double>(t));
    }

    if (e <= Scalar(1)) {
      if (trajectory != nullptr) {
        DenseStep<Scalar, Dim> step;
        step.t0 = t;
        step.h = h;
        step.r1 = y;
        step.r2 = y_next - y;
        step.r3 = h * k1 - step.r2;
        step.r4 = step.r2 - h * k7 - step.r3;
        step.r5 = h * (T::d1 * k1 + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 + T::d6 * k6 + T::d7 * k7);
        trajectory->push(std::move(step));
      }
      // PI controller with beta = 0.04.
      const Scalar fac = pow(max(e, Scalar(1e-10)), Scalar(0.17)) * pow(err_old, Scalar(-0.04)) / Scalar(0.9);
      Scalar h_new = h / min(Scalar(5), max(Scalar(0.2), fac));
      if (last_rejected) h_new = min(h_new, h);
      err_old = max(e, Scalar(1e-4));
      t = t_next;
      y = y_next;
      k1 = k7;
      h = h_new;
      last_rejected = false;
      if (last) break;
    } else {
      h = h / min(Scalar(5), max(Scalar(1), pow(e, Scalar(0.2)) / Scalar(0.9)));
      last_rejected = true;
    }
  }
  return y;
}

}  // namespace hillgreen

#endif  // HILLGREEN_DORMAND_PRINCE_HPP_
