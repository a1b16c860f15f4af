#include "hillgreen/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>

#include "hillgreen/errors.hpp"
#include "hillgreen/greens.hpp"
#include "hillgreen/io.hpp"
#include "hillgreen/parallel.hpp"

namespace hillgreen {

namespace {

using BC = BoundaryCondition;
constexpr double kPi = std::numbers::pi;

double separated_value(const SolutionBasis& b, BC bc) {
  switch (bc) {
    case BC::Neumann: return b.y1p_end();
    case BC::Dirichlet: return b.y2_end();
    case BC::Mixed1: return b.y1_end();
    case BC::Mixed2: return b.y2p_end();
    case BC::Periodic: return b.discriminant() - 2.0;
    case BC::AntiPeriodic: return b.discriminant() + 2.0;
  }
  return 0.0;
}

bool starts_with_value_one(BC bc) { return bc == BC::Neumann || bc == BC::Mixed1; }

// Unwrapped Pruefer angle atan2(u, u') at L of the solution meeting the left
// condition: (1, 0) for N and M1, (0, 1) for D and M2.
double pruefer_angle(const Potential& p, double lambda, double length, BC bc, double tol) {
  if (!is_separated(bc)) throw DomainError("oscillation counts need a separated condition");
  const SolutionBasis b = fundamental_solutions(p, lambda, length, tol);
  const int iu = starts_with_value_one(bc) ? 0 : 2;
  double theta = starts_with_value_one(bc) ? kPi / 2 : 0.0;
  double previous = theta;
  auto advance = [&](const SolutionBasis::State& s) {
    const double raw = std::atan2(s[iu], s[iu + 1]);
    double d = raw - previous;
    while (d > kPi) d -= 2 * kPi;
    while (d <= -kPi) d += 2 * kPi;
    theta += d;
    previous = raw;
  };
  constexpr int kSubsteps = 8;
  for (const auto& step : b.trajectory().steps()) {
    for (int j = 1; j <= kSubsteps; ++j) advance(step(step.t0 + step.h * j / kSubsteps));
  }
  advance(b.end());
  return theta;
}

// Sign convention for bracketing: zero counts as nonnegative.
bool negative(double x) { return x < 0.0; }

double bisect(const std::function<double(double)>& f, double a, double b, double fa, double tol) {
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (negative(fm) == negative(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> scan_grid(double lower, double upper, int points) {
  std::vector<double> xs(points + 1);
  for (int i = 0; i <= points; ++i) xs[i] = i == points ? upper : lower + (upper - lower) * i / points;
  return xs;
}

struct Root {
  double value;
  int multiplicity;
};

std::vector<Root> merge_roots(std::vector<Root> roots, double tol) {
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.value < b.value; });
  std::vector<Root> out;
  for (const auto& r : roots) {
    if (!out.empty() && std::abs(r.value - out.back().value) <= tol * std::max(1.0, std::abs(r.value))) {
      out.back().multiplicity += r.multiplicity;
      out.back().value = 0.5 * (out.back().value + r.value);
    } else {
      out.push_back(r);
    }
  }
  return out;
}

// Simple roots of a separated characteristic function by scan and bisection.
std::vector<Root> separated_roots(const Potential& p, double length, BC bc, double lower, double upper,
                                  int points, const SpectrumOptions& o) {
  auto f = [&](double x) { return characteristic_value(p, x, length, bc, o.integrator_tol); };
  const auto xs = scan_grid(lower, upper, points);
  std::vector<double> fs(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { fs[i] = f(xs[i]); });
  std::vector<Root> roots;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (fs[i] == 0.0) {
      roots.push_back({xs[i], 1});
      continue;
    }
    if (negative(fs[i]) != negative(fs[i + 1]) && fs[i + 1] != 0.0) {
      roots.push_back({bisect(f, xs[i], xs[i + 1], fs[i], o.root_tol), 1});
    }
  }
  if (fs.back() == 0.0) roots.push_back({xs.back(), 1});
  return roots;
}

// Samples of Delta and dDelta/dlambda shared by the P and A root searches.
struct DiscriminantScan {
  std::vector<double> xs;
  std::vector<DiscriminantSlope> samples;
};

DiscriminantScan scan_discriminant(const Potential& p, double length, double lower, double upper, int points,
                                   double tol) {
  DiscriminantScan s{scan_grid(lower, upper, points), {}};
  s.samples.resize(s.xs.size());
  parallel_for(s.xs.size(), [&](std::size_t i) { s.samples[i] = discriminant_with_slope(p, s.xs[i], length, tol); });
  return s;
}

// Roots of Delta - target in [lower, upper]. A cell whose slope changes sign
// holds an extremum; when Delta there is within tangency_tol of the target
// (plus the error from locating it) the extremum is a double root, otherwise
// the cell is split at it.
std::vector<Root> discriminant_roots(const Potential& p, double length, const DiscriminantScan& scan, double target,
                                     const SpectrumOptions& o) {
  // Refinement runs at a tighter tolerance: near an extremum Delta is flat and
  // its integration error sets both the root error and the tangency floor.
  const double tight = std::max(1e-13, 1e-2 * o.integrator_tol);
  // Delta - 2 sigma = -sigma det(M - sigma I) for target = 2 sigma. Near a
  // coexistence point M - sigma I is small entrywise, so the determinant
  // carries far less integration noise than the trace.
  const double sigma = target > 0.0 ? 1.0 : -1.0;
  auto f = [&](double x) {
    const Eigen::Matrix2d m = fundamental_solutions(p, x, length, tight).monodromy() - sigma * Eigen::Matrix2d::Identity();
    return -sigma * m.determinant();
  };
  auto slope = [&](double x) { return discriminant_with_slope(p, x, length, tight).slope; };

  auto simple_root = [&](double a, double b, double fa) {
    double x = bisect(f, a, b, fa, o.root_tol);
    if (o.polish) {
      const double fx = f(x);
      const double dx = slope(x);
      if (std::abs(dx) > 1e-6) {
        const double nx = x - fx / dx;
        if (nx >= a && nx <= b && std::abs(f(nx)) <= std::abs(fx)) x = nx;
      }
    }
    return x;
  };

  std::vector<Root> roots;
  const auto& xs = scan.xs;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double a = xs[i], b = xs[i + 1];
    const double fa = scan.samples[i].value - target, fb = scan.samples[i + 1].value - target;
    if (fa == 0.0) {
      roots.push_back({a, std::abs(scan.samples[i].slope) < 1e-12 ? 2 : 1});
      continue;
    }
    const double sa = scan.samples[i].slope, sb = scan.samples[i + 1].slope;
    if ((sa < 0.0) != (sb < 0.0)) {
      const double xm = bisect(slope, a, b, sa, o.root_tol);
      const double fm = f(xm);
      // xm is only known to root_tol, which leaves |Delta''| root_tol^2 / 2 at a true double root.
      const double curvature = std::abs(sb - sa) / (b - a);
      if (std::abs(fm) <= o.tangency_tol + 2 * curvature * o.root_tol * o.root_tol) {
        roots.push_back({xm, 2});
        // An odd number of crossings leaves one simple root beside the tangency.
        if (negative(fa) != negative(fb) && fb != 0.0) {
          const bool left = std::abs(fa) < std::abs(fb);
          roots.push_back(left ? Root{simple_root(a, xm, fa), 1} : Root{simple_root(xm, b, fm), 1});
        }
        continue;
      }
      if (negative(fa) != negative(fm)) roots.push_back({simple_root(a, xm, fa), 1});
      if (negative(fm) != negative(fb) && fb != 0.0) roots.push_back({simple_root(xm, b, fm), 1});
      continue;
    }
    if (negative(fa) != negative(fb) && fb != 0.0) roots.push_back({simple_root(a, b, fa), 1});
  }
  if (scan.samples.back().value - target == 0.0) roots.push_back({xs.back(), 1});
  return merge_roots(std::move(roots), 1e-9);
}

int count_below(const Potential& p, double lambda, double length, BC bc, double tol) {
  return eigenvalue_count_below(p, lambda, length, bc, tol);
}

Spectrum make_spectrum(BC bc, double length, double lower, double upper, const SpectrumOptions& o, int points,
                       std::vector<Root> roots, int first_index, std::size_t max_count) {
  Spectrum s;
  s.bc = bc;
  s.length = length;
  s.lower = lower;
  s.upper = upper;
  s.root_tol = o.root_tol;
  s.scan_step = (upper - lower) / points;
  int k = first_index;
  std::size_t total = 0;
  for (const auto& r : roots) {
    if (total >= max_count) break;
    const int m = static_cast<int>(std::min<std::size_t>(r.multiplicity, max_count - total));
    s.eigenvalues.push_back({k, r.value, m});
    k += m;
    total += m;
  }
  return s;
}

bool factorizable(const Potential& p, double length) {
  return p.mirrored_half() != nullptr && length == p.length();
}

}  // namespace

double characteristic_value(const Potential& p, double lambda, double length, BoundaryCondition bc, double tol) {
  return separated_value(fundamental_solutions(p, lambda, length, tol), bc);
}

int eigenvalue_count_below(const Potential& p, double lambda, double length, BoundaryCondition bc, double tol) {
  const double theta = pruefer_angle(p, lambda, length, bc, tol);
  // Eigenvalues sit where theta(L) = j pi - c, j >= 1, with c = pi/2 when the
  // right condition is on u'.
  const double c = (bc == BC::Neumann || bc == BC::Mixed2) ? kPi / 2 : 0.0;
  return std::max(0, static_cast<int>(std::ceil((theta + c) / kPi)) - 1);
}

int interior_zero_count(const Potential& p, double lambda, double length, BoundaryCondition bc, double tol) {
  const double theta = pruefer_angle(p, lambda, length, bc, tol);
  return std::max(0, static_cast<int>(std::ceil(theta / kPi)) - 1);
}

std::vector<double> Spectrum::values() const {
  std::vector<double> v;
  for (const auto& e : eigenvalues) v.insert(v.end(), e.multiplicity, e.value);
  return v;
}

std::size_t Spectrum::count() const {
  std::size_t n = 0;
  for (const auto& e : eigenvalues) n += e.multiplicity;
  return n;
}

Spectrum find_eigenvalues(const Potential& p, double length, BoundaryCondition bc, double lower, double upper,
                          const SpectrumOptions& o, std::size_t max_count) {
  if (!(std::isfinite(lower) && std::isfinite(upper) && lower < upper)) {
    throw DomainError("eigenvalue search needs a finite range lower < upper");
  }
  if (!(o.root_tol >= 1e-12)) throw DomainError("root tolerance must be at least 1e-12");
  if (o.scan_points < 2) throw DomainError("scan needs at least two points");

  if (is_separated(bc)) {
    const int below = count_below(p, lower, length, bc, o.integrator_tol);
    const int audited = count_below(p, upper, length, bc, o.integrator_tol) - below;
    int points = o.scan_points;
    std::vector<Root> roots = separated_roots(p, length, bc, lower, upper, points, o);
    // A cell holding two roots shows no sign change; the oscillation count
    // exposes it and a finer scan separates them.
    for (int refine = 0; refine < 3 && static_cast<int>(roots.size()) < audited; ++refine) {
      points *= 4;
      roots = separated_roots(p, length, bc, lower, upper, points, o);
    }
    Spectrum s = make_spectrum(bc, length, lower, upper, o, points, std::move(roots), below, max_count);
    s.audited_count = audited;
    return s;
  }

  if (o.method == SpectrumMethod::Factorized && factorizable(p, length)) {
    const Potential& half = *p.mirrored_half();
    const double T = half.length();
    const BC first = bc == BC::Periodic ? BC::Neumann : BC::Mixed1;
    const BC second = bc == BC::Periodic ? BC::Dirichlet : BC::Mixed2;
    const Spectrum a = find_eigenvalues(half, T, first, lower, upper, o);
    const Spectrum b = find_eigenvalues(half, T, second, lower, upper, o);
    std::vector<Root> roots;
    for (const auto* s : {&a, &b}) {
      for (const auto& e : s->eigenvalues) roots.push_back({e.value, 1});
    }
    const int below = count_below(half, lower, T, first, o.integrator_tol) +
                      count_below(half, lower, T, second, o.integrator_tol);
    Spectrum s = make_spectrum(bc, length, lower, upper, o, o.scan_points, merge_roots(std::move(roots), 1e-8),
                               below, max_count);
    s.audited_count = a.audited_count + b.audited_count;
    return s;
  }

  const DiscriminantScan scan = scan_discriminant(p, length, lower, upper, o.scan_points, o.integrator_tol);
  auto roots = discriminant_roots(p, length, scan, bc == BC::Periodic ? 2.0 : -2.0, o);
  int below = 0;
  if (factorizable(p, length)) {
    const Potential& half = *p.mirrored_half();
    const BC first = bc == BC::Periodic ? BC::Neumann : BC::Mixed1;
    const BC second = bc == BC::Periodic ? BC::Dirichlet : BC::Mixed2;
    below = count_below(half, lower, half.length(), first, o.integrator_tol) +
            count_below(half, lower, half.length(), second, o.integrator_tol);
  }
  return make_spectrum(bc, length, lower, upper, o, o.scan_points, std::move(roots), below, max_count);
}

namespace {

// No eigenvalue of any of the six problems lies below -sup(a).
double spectral_floor(const Potential& p) { return -p.sup() - 1.0; }

}  // namespace

Spectrum first_eigenvalues(const Potential& p, double length, BoundaryCondition bc, std::size_t count,
                           const SpectrumOptions& o) {
  const double lower = spectral_floor(p);
  double width = std::max(4.0, std::pow((count + 2) * kPi / length, 2));
  for (int attempt = 0; attempt < 12; ++attempt, width *= 2) {
    // Keep the scan step fixed relative to the expected eigenvalue spacing.
    SpectrumOptions wide = o;
    wide.scan_points = std::max(o.scan_points, static_cast<int>(o.scan_points * width / 50.0));
    Spectrum s = find_eigenvalues(p, length, bc, lower, lower + width, wide, count);
    if (s.count() >= count) return s;
  }
  throw DomainError("could not bracket " + std::to_string(count) + " eigenvalues of " + problem_name(bc, length));
}

double first_eigenvalue(const Potential& p, double length, BoundaryCondition bc, const SpectrumOptions& o) {
  return first_eigenvalues(p, length, bc, 1, o).eigenvalues.front().value;
}

// ---------------------------------------------------------------------------
// Decomposition and ordering reports

namespace {

std::vector<double> sorted_union(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

std::vector<double> clip(std::vector<double> v, double lower, double upper, std::size_t count) {
  constexpr double kEdge = 1e-6;
  v.erase(std::remove_if(v.begin(), v.end(), [&](double x) { return x < lower + kEdge || x > upper - kEdge; }),
          v.end());
  if (count > 0 && v.size() > count) v.resize(count);
  return v;
}

SetEquality compare_sets(std::string name, std::vector<double> lhs, std::vector<double> rhs, double tol) {
  SetEquality r;
  r.name = std::move(name);
  std::size_t i = 0, j = 0;
  while (i < lhs.size() && j < rhs.size()) {
    const double d = lhs[i] - rhs[j];
    if (std::abs(d) <= tol) {
      r.max_pair_error = std::max(r.max_pair_error, std::abs(d));
      ++i;
      ++j;
    } else if (d < 0) {
      r.unmatched_lhs.push_back(lhs[i++]);
    } else {
      r.unmatched_rhs.push_back(rhs[j++]);
    }
  }
  r.unmatched_lhs.insert(r.unmatched_lhs.end(), lhs.begin() + i, lhs.end());
  r.unmatched_rhs.insert(r.unmatched_rhs.end(), rhs.begin() + j, rhs.end());
  r.pass = r.unmatched_lhs.empty() && r.unmatched_rhs.empty() && !lhs.empty();
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

RelationCheck relation(std::string name, double lhs, double rhs, Relation rel, double eq_tol, double strict_margin) {
  RelationCheck c{std::move(name), lhs, rhs, rel, 0.0, false};
  switch (rel) {
    case Relation::Equal:
      c.margin = std::abs(lhs - rhs);
      c.pass = c.margin <= eq_tol;
      break;
    case Relation::Less:
      c.margin = rhs - lhs;
      c.pass = c.margin > strict_margin;
      break;
    case Relation::LessEqual:
      c.margin = rhs - lhs;
      c.pass = c.margin >= -eq_tol;
      break;
  }
  return c;
}

SpectrumOptions direct(SpectrumOptions o) {
  o.method = SpectrumMethod::Discriminant;
  return o;
}

}  // namespace

bool DecompositionReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const SetEquality& c) { return c.pass; });
}

bool RelationReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const RelationCheck& c) { return c.pass; });
}

DecompositionReport verify_spectral_decomposition(const Potential& p, double T, double lower, double upper,
                                                  double pairing_tol, std::size_t compare_count,
                                                  const SpectrumOptions& o) {
  const Potential a = truncated(p, T);
  const Potential e = even_extension(a);
  const Potential ee = even_extension(e);
  auto values = [&](const Potential& q, double L, BC bc, const SpectrumOptions& opts) {
    return find_eigenvalues(q, L, bc, lower, upper, opts).values();
  };
  const auto n = values(a, T, BC::Neumann, o);
  const auto d = values(a, T, BC::Dirichlet, o);
  const auto m1 = values(a, T, BC::Mixed1, o);
  const auto m2 = values(a, T, BC::Mixed2, o);
  const auto p2 = values(e, 2 * T, BC::Periodic, direct(o));
  const auto a2 = values(e, 2 * T, BC::AntiPeriodic, direct(o));
  const auto p4 = values(ee, 4 * T, BC::Periodic, direct(o));
  const auto n2 = values(e, 2 * T, BC::Neumann, o);
  const auto d2 = values(e, 2 * T, BC::Dirichlet, o);

  auto check = [&](std::string name, std::vector<double> lhs, std::vector<double> rhs) {
    return compare_sets(std::move(name), clip(std::move(lhs), lower, upper, compare_count),
                        clip(std::move(rhs), lower, upper, compare_count), pairing_tol);
  };
  DecompositionReport r;
  r.checks.push_back(check("N u D = P[e,2T]", sorted_union(n, d), p2));
  r.checks.push_back(check("M1 u M2 = A[e,2T]", sorted_union(m1, m2), a2));
  r.checks.push_back(check("P[e,2T] u A[e,2T] = P[ee,4T]", sorted_union(p2, a2), p4));
  r.checks.push_back(check("N u M1 = N[e,2T]", sorted_union(n, m1), n2));
  r.checks.push_back(check("D u M2 = D[e,2T]", sorted_union(d, m2), d2));
  return r;
}

std::pair<double, double> decomposition_window(const Potential& p, double T, std::size_t count,
                                               const SpectrumOptions& o) {
  if (count == 0) throw DomainError("decomposition window needs count >= 1");
  const Potential a = truncated(p, T);
  const auto d = first_eigenvalues(a, T, BC::Dirichlet, count + 1, o).values();
  return {spectral_floor(a), 0.5 * (d[count - 1] + d[count])};
}

double periodic_corner_root(const Potential& p, double T, bool at_end, const SpectrumOptions& o) {
  const Potential e = even_extension(truncated(p, T));
  const Spectrum periodic = first_eigenvalues(e, 2 * T, BC::Periodic, 3, direct(o));
  const double first = periodic.eigenvalues.front().value;
  if (periodic.eigenvalues.size() < 2) throw DomainError("corner search needs two periodic eigenvalues");
  const double next = periodic.eigenvalues[1].value;
  const double x = at_end ? T : 0.0;
  auto corner = [&](double lambda) { return GreenKernel(e, lambda, 2 * T, BC::Periodic, o.integrator_tol)(x, x); };
  const double gap = next - first;
  const double from = first + 1e-6 * gap, to = next - 1e-6 * gap;
  constexpr int kScan = 400;
  double prev_x = from, prev_f = corner(from);
  for (int i = 1; i <= kScan; ++i) {
    const double xi = from + (to - from) * i / kScan;
    const double fi = corner(xi);
    if (negative(prev_f) != negative(fi)) return bisect(corner, prev_x, xi, prev_f, o.root_tol);
    prev_x = xi;
    prev_f = fi;
  }
  throw DomainError("corner value of the periodic kernel has no root below the second periodic eigenvalue");
}

RelationReport first_eigenvalue_relations(const Potential& p, double T, double eq_tol, double strict_margin,
                                          const SpectrumOptions& o) {
  const Potential a = truncated(p, T);
  const Potential e = even_extension(a);
  const double n = first_eigenvalue(a, T, BC::Neumann, o);
  const double d = first_eigenvalue(a, T, BC::Dirichlet, o);
  const double m1 = first_eigenvalue(a, T, BC::Mixed1, o);
  const double m2 = first_eigenvalue(a, T, BC::Mixed2, o);
  const double n2 = first_eigenvalue(e, 2 * T, BC::Neumann, o);
  const double d2 = first_eigenvalue(e, 2 * T, BC::Dirichlet, o);
  const double p2 = first_eigenvalue(e, 2 * T, BC::Periodic, direct(o));
  const double a2 = first_eigenvalue(e, 2 * T, BC::AntiPeriodic, direct(o));
  const double corner0 = periodic_corner_root(a, T, false, o);
  const double cornerT = periodic_corner_root(a, T, true, o);

  auto rel = [&](std::string name, double l, double r, Relation k) {
    return relation(std::move(name), l, r, k, eq_tol, strict_margin);
  };
  RelationReport r;
  r.checks.push_back(rel("lambda_N(a,T) = lambda_N(e,2T)", n, n2, Relation::Equal));
  r.checks.push_back(rel("lambda_N(a,T) = lambda_P(e,2T)", n, p2, Relation::Equal));
  r.checks.push_back(rel("first root of G_P[e+l,2T](0,0) = lambda_M2(a,T)", corner0, m2, Relation::Equal));
  r.checks.push_back(rel("first root of G_P[e+l,2T](T,T) = lambda_M1(a,T)", cornerT, m1, Relation::Equal));
  r.checks.push_back(rel("lambda_A(e,2T) = min(lambda_M1, lambda_M2)", a2, std::min(m1, m2), Relation::Equal));
  r.checks.push_back(rel("lambda_M2(a,T) = lambda_D(e,2T)", m2, d2, Relation::Equal));
  r.checks.push_back(rel("lambda_D(e,2T) < lambda_D(a,T)", d2, d, Relation::Less));
  r.checks.push_back(rel("lambda_N(a,T) < lambda_M1(a,T)", n, m1, Relation::Less));
  return r;
}

RelationReport verify_interlacing(const Potential& p, double T, int indices, double strict_margin,
                                  const SpectrumOptions& o) {
  if (indices < 1) throw DomainError("interlacing needs at least one index");
  const Potential a = truncated(p, T);
  const Potential e = even_extension(a);
  const std::size_t count = indices + 1;
  const auto n = first_eigenvalues(a, T, BC::Neumann, count, o).values();
  const auto d = first_eigenvalues(a, T, BC::Dirichlet, count, o).values();
  const auto m1 = first_eigenvalues(a, T, BC::Mixed1, count, o).values();
  const auto m2 = first_eigenvalues(a, T, BC::Mixed2, count, o).values();
  const auto per = first_eigenvalues(e, 2 * T, BC::Periodic, 2 * indices - 1, direct(o)).values();
  const auto anti = first_eigenvalues(e, 2 * T, BC::AntiPeriodic, 2 * indices - 2 > 0 ? 2 * indices - 2 : 1,
                                      direct(o)).values();

  RelationReport r;
  auto less = [&](std::string name, double l, double rr) {
    r.checks.push_back(relation(std::move(name), l, rr, Relation::Less, 1e-8, strict_margin));
  };
  auto less_equal = [&](std::string name, double l, double rr) {
    r.checks.push_back(relation(std::move(name), l, rr, Relation::LessEqual, 1e-8, strict_margin));
  };
  auto idx = [](const char* s, int k) { return std::string(s) + "_" + std::to_string(k); };

  for (int k = 0; k < indices; ++k) {
    less(idx("N", k) + " < " + idx("M1", k), n[k], m1[k]);
    less(idx("M1", k) + " < " + idx("N", k + 1), m1[k], n[k + 1]);
    less(idx("M2", k) + " < " + idx("D", k), m2[k], d[k]);
    less(idx("D", k) + " < " + idx("M2", k + 1), d[k], m2[k + 1]);
    less(idx("N", k) + " < " + idx("M2", k), n[k], m2[k]);
    less(idx("M2", k) + " < " + idx("N", k + 1), m2[k], n[k + 1]);
    less(idx("M1", k) + " < " + idx("D", k), m1[k], d[k]);
    less(idx("D", k) + " < " + idx("M1", k + 1), d[k], m1[k + 1]);
    // Global order {M1_k, M2_k} < {D_k, N_k+1} < {M1_k+1, M2_k+1}.
    less(idx("M1", k) + " < " + idx("D", k), m1[k], d[k]);
    less(idx("M2", k) + " < " + idx("N", k + 1), m2[k], n[k + 1]);
    less(idx("D", k) + " < " + idx("M1", k + 1), d[k], m1[k + 1]);
    less(idx("N", k + 1) + " < " + idx("M1", k + 1), n[k + 1], m1[k + 1]);
    less(idx("N", k + 1) + " < " + idx("M2", k + 1), n[k + 1], m2[k + 1]);
  }

  // lambda_0 < lambda'_1 <= lambda'_2 < lambda_1 <= lambda_2 < lambda'_3 ...
  std::vector<std::pair<std::string, double>> chain;
  chain.emplace_back("P_0", per[0]);
  std::size_t pi = 1, ai = 0;
  while (ai + 1 < anti.size() + 1 && (ai < anti.size() || pi < per.size())) {
    if (ai + 1 < anti.size()) {
      chain.emplace_back("A_" + std::to_string(ai + 1), anti[ai]);
      chain.emplace_back("A_" + std::to_string(ai + 2), anti[ai + 1]);
    }
    ai += 2;
    if (pi + 1 < per.size()) {
      chain.emplace_back("P_" + std::to_string(pi), per[pi]);
      chain.emplace_back("P_" + std::to_string(pi + 1), per[pi + 1]);
    }
    pi += 2;
    if (ai >= anti.size() && pi >= per.size()) break;
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    // Links inside a pair may be equal (coexistence); links between pairs are strict.
    const std::string name = chain[i].first + (i % 2 == 0 ? " < " : " <= ") + chain[i + 1].first + " on [0,2T]";
    if (i % 2 == 0) {
      less(name, chain[i].second, chain[i + 1].second);
    } else {
      less_equal(name, chain[i].second, chain[i + 1].second);
    }
  }
  return r;
}

std::vector<StabilityInterval> stability_intervals(const Potential& p, double lower, double upper, int scan_points,
                                                   double edge_tol, double tol) {
  if (!(lower < upper)) throw DomainError("stability scan needs lower < upper");
  SpectrumOptions o;
  o.root_tol = std::max(1e-12, std::min(edge_tol, 1e-8));
  o.integrator_tol = tol;
  const double L = p.length();
  const DiscriminantScan scan = scan_discriminant(p, L, lower, upper, scan_points, tol);
  auto edges = discriminant_roots(p, L, scan, 2.0, o);
  const auto anti = discriminant_roots(p, L, scan, -2.0, o);
  edges.insert(edges.end(), anti.begin(), anti.end());
  std::sort(edges.begin(), edges.end(), [](const Root& x, const Root& y) { return x.value < y.value; });

  auto stable_at = [&](double x) { return std::abs(discriminant(p, x, L, tol)) < 2.0; };
  std::vector<StabilityInterval> out;
  auto push = [&](double lo, double hi, bool stable) {
    if (!out.empty() && out.back().stable == stable && out.back().upper == lo && out.back().upper > out.back().lower &&
        hi > lo) {
      out.back().upper = hi;
      return;
    }
    out.push_back({lo, hi, stable});
  };
  double from = lower;
  for (const auto& edge : edges) {
    if (edge.value > from) push(from, edge.value, stable_at(0.5 * (from + edge.value)));
    if (edge.multiplicity == 2) out.push_back({edge.value, edge.value, false});
    from = std::max(from, edge.value);
  }
  if (upper > from) push(from, upper, stable_at(0.5 * (from + upper)));
  return out;
}

void write_spectrum_csv(std::ostream& out, const std::vector<Spectrum>& spectra, bool header) {
  if (header) out << "bc,k,lambda,multiplicity\n";
  for (const auto& s : spectra) {
    for (const auto& e : s.eigenvalues) {
      out << tag(s.bc) << ',' << e.k << ',' << format_number(e.value) << ',' << e.multiplicity << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, const Potential& p, double length, double lower, double upper, int points,
                     double tol) {
  if (points < 2) throw DomainError("sweep needs at least two points");
  const auto xs = scan_grid(lower, upper, points - 1);
  std::vector<double> ds(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { ds[i] = discriminant(p, xs[i], length, tol); });
  out << "lambda,delta\n";
  for (std::size_t i = 0; i < xs.size(); ++i) out << format_number(xs[i]) << ',' << format_number(ds[i]) << '\n';
}

nlohmann::json to_json(const Spectrum& s) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& e : s.eigenvalues) values.push_back({{"k", e.k}, {"lambda", e.value}, {"multiplicity", e.multiplicity}});
  nlohmann::json j{{"bc", std::string(tag(s.bc))},
                   {"length", s.length},
                   {"range", {s.lower, s.upper}},
                   {"root_tol", s.root_tol},
                   {"scan_step", s.scan_step},
                   {"eigenvalues", values}};
  if (s.audited_count >= 0) j["audited_count"] = s.audited_count;
  return j;
}

nlohmann::json to_json(const DecompositionReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"unmatched_lhs", c.unmatched_lhs},
                      {"unmatched_rhs", c.unmatched_rhs},
                      {"max_pair_error", c.max_pair_error},
                      {"pass", c.pass}});
  }
  return {{"pass", r.pass()}, {"checks", checks}};
}

nlohmann::json to_json(const RelationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    const char* op = c.relation == Relation::Equal ? "=" : c.relation == Relation::Less ? "<" : "<=";
    checks.push_back(
        {{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"relation", op}, {"margin", c.margin}, {"pass", c.pass}});
  }
  return {{"pass", r.pass()}, {"checks", checks}};
}

nlohmann::json to_json(const std::vector<StabilityInterval>& bands) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& b : bands) {
    j.push_back({{"lower", b.lower}, {"upper", b.upper}, {"stable", b.stable}});
  }
  return j;
}

}  // namespace hillgreen
