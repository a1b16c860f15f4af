// Independent reference computations used by the tests. Nothing here calls
// the adaptive integrator.
#ifndef HILLGREEN_TESTS_ORACLES_HPP_
#define HILLGREEN_TESTS_ORACLES_HPP_

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "hillgreen/potential.hpp"

namespace oracle {

using Forcing = std::function<double(double)>;

// Classic RK4 for u'' + (a + lambda) u = sigma with state (u, u').
// Steps are aligned to the potential's breakpoints so each step sees one
// analytic piece; within a piece the segment is evaluated directly.
struct Rk4 {
  const hillgreen::Potential& p;
  double lambda;
  int steps_per_unit = 4000;

  std::array<double, 2> rhs(const hillgreen::Segment& seg, double t, const std::array<double, 2>& y,
                            const Forcing& sigma) const {
    const double q = seg(t) + p.shift() + lambda;
    return {y[1], (sigma ? sigma(t) : 0.0) - q * y[0]};
  }

  // Integrates from 0 to t_end; samples(k) gets the state at each grid time
  // listed in `times` (sorted, within [0, t_end]).
  std::array<double, 2> run(std::array<double, 2> y, double t_end, const Forcing& sigma = {},
                            const std::vector<double>& times = {},
                            std::vector<std::array<double, 2>>* samples = nullptr) const {
    std::size_t next = 0;
    auto record = [&](double t, const std::array<double, 2>& s) {
      while (samples && next < times.size() && std::abs(times[next] - t) <= 1e-13 * (1 + t_end)) {
        samples->push_back(s);
        ++next;
      }
    };
    record(0.0, y);
    for (const auto& seg : p.segments()) {
      const double a = seg.from;
      const double b = std::min(seg.to, t_end);
      if (b <= a) break;
      // Sub-intervals end exactly on every requested sample time.
      std::vector<double> stops;
      for (double tt : times) {
        if (tt > a && tt < b) stops.push_back(tt);
      }
      stops.push_back(b);
      double t0 = a;
      for (double stop : stops) {
        const int m = std::max(1, static_cast<int>(std::ceil((stop - t0) * steps_per_unit)));
        const double h = (stop - t0) / m;
        for (int k = 0; k < m; ++k) {
          const double t = t0 + k * h;
          const auto k1 = rhs(seg, t, y, sigma);
          const auto k2 = rhs(seg, t + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]}, sigma);
          const auto k3 = rhs(seg, t + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]}, sigma);
          const auto k4 = rhs(seg, t + h, {y[0] + h * k3[0], y[1] + h * k3[1]}, sigma);
          y[0] += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
          y[1] += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        }
        t0 = stop;
        record(stop, y);
      }
      if (seg.to >= t_end) break;
    }
    return y;
  }

  // (y1, y1', y2, y2') at t_end.
  std::array<double, 4> basis(double t_end) const {
    const auto a = run({1.0, 0.0}, t_end);
    const auto b = run({0.0, 1.0}, t_end);
    return {a[0], a[1], b[0], b[1]};
  }
};

// Linear shooting for u'' + (a + lambda) u = sigma with u(0) = u(L) = 0:
// u = w + c v where w solves the forced problem from (0, 0) and v the
// homogeneous one from (0, 1).
inline std::vector<double> shoot_dirichlet(const hillgreen::Potential& p, double lambda, double length,
                                           const Forcing& sigma, int n, int steps_per_unit = 4000) {
  std::vector<double> times(n + 1);
  for (int i = 0; i <= n; ++i) times[i] = i == n ? length : length * i / n;
  Rk4 rk{p, lambda, steps_per_unit};
  std::vector<std::array<double, 2>> w, v;
  const auto w_end = rk.run({0.0, 0.0}, length, sigma, times, &w);
  const auto v_end = rk.run({0.0, 1.0}, length, {}, times, &v);
  const double c = -w_end[0] / v_end[0];
  std::vector<double> u(n + 1);
  for (int i = 0; i <= n; ++i) u[i] = w[i][0] + c * v[i][0];
  return u;
}

// Bisection on a scalar function with a sign change in [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Eigenvalues of a separated problem by RK4 shooting: scan lambda for sign
// changes of the boundary functional, then bisect.
inline std::vector<double> shooting_eigenvalues(const hillgreen::Potential& p, double length, int kind, double lo,
                                                double hi, int scan = 400, int steps_per_unit = 2000) {
  // kind: 0 = N (y1'), 1 = D (y2), 2 = M1 (y1), 3 = M2 (y2')
  auto f = [&](double lambda) {
    Rk4 rk{p, lambda, steps_per_unit};
    const auto b = rk.basis(length);
    switch (kind) {
      case 0: return b[1];
      case 1: return b[2];
      case 2: return b[0];
      default: return b[3];
    }
  };
  std::vector<double> roots;
  double prev_l = lo, prev_f = f(lo);
  for (int i = 1; i <= scan; ++i) {
    const double l = lo + (hi - lo) * i / scan;
    const double fl = f(l);
    if ((fl < 0) != (prev_f < 0)) roots.push_back(bisect(f, prev_l, l, 1e-11));
    prev_l = l;
    prev_f = fl;
  }
  return roots;
}

}  // namespace oracle

#endif  // HILLGREEN_TESTS_ORACLES_HPP_
