#include "hillgreen/comparison.hpp"

#include <algorithm>
#include <cmath>

#include "hillgreen/errors.hpp"
#include "hillgreen/io.hpp"
#include "hillgreen/parallel.hpp"

namespace hillgreen {

namespace {

using BC = BoundaryCondition;

GridPoint grid_point(const GreensFunction& g, int i, int j) { return {i, j, g.node(i), g.node(j)}; }

SpectrumOptions direct(SpectrumOptions o) {
  o.method = SpectrumMethod::Discriminant;
  return o;
}

// Records rhs - lhs over the grid for lhs (op) rhs.
class InequalityBuilder {
 public:
  InequalityBuilder(std::string name, bool strict, double slack) : slack_(slack) {
    check_.name = std::move(name);
    check_.strict = strict;
  }
  void add(double lhs, double rhs, GridPoint where) {
    const double margin = rhs - lhs;
    if (margin < check_.min_margin) {
      check_.min_margin = margin;
      check_.worst = where;
    }
  }
  InequalityCheck finish() {
    check_.pass = check_.min_margin > -slack_;
    return check_;
  }

 private:
  InequalityCheck check_;
  double slack_;
};

}  // namespace

std::string_view to_string(SignClass c) noexcept {
  switch (c) {
    case SignClass::StrictlyNegative: return "strictly_negative";
    case SignClass::NonpositiveWithZeros: return "nonpositive_with_zeros";
    case SignClass::NonnegativeWithZeros: return "nonnegative_with_zeros";
    case SignClass::StrictlyPositive: return "strictly_positive";
    case SignClass::SignChanging: return "sign_changing";
  }
  return "?";
}

std::string_view to_string(PredictedSign s) noexcept {
  switch (s) {
    case PredictedSign::Negative: return "negative";
    case PredictedSign::Nonnegative: return "nonnegative";
    case PredictedSign::SignChanging: return "sign_changing";
    case PredictedSign::None: return "none";
  }
  return "?";
}

SignReport classify_sign(const GreensFunction& g, double zero_tol) {
  SignReport r;
  r.zero_tol = zero_tol;
  r.min_value = std::numeric_limits<double>::infinity();
  r.max_value = -std::numeric_limits<double>::infinity();
  const int n = g.n();
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double v = g.at(i, j);
      r.min_value = std::min(r.min_value, v);
      r.max_value = std::max(r.max_value, v);
      if (std::abs(v) <= zero_tol) r.zero_locations.push_back(grid_point(g, i, j));
    }
  }
  if (r.min_value > zero_tol) {
    r.classification = SignClass::StrictlyPositive;
  } else if (r.max_value < -zero_tol) {
    r.classification = SignClass::StrictlyNegative;
  } else if (r.min_value >= -zero_tol) {
    r.classification = SignClass::NonnegativeWithZeros;
  } else if (r.max_value <= zero_tol) {
    r.classification = SignClass::NonpositiveWithZeros;
  } else {
    r.classification = SignClass::SignChanging;
  }
  return r;
}

SignReport classify_sign(const GreenKernel& k, int n, double zero_tol) {
  SignReport r = classify_sign(sample(k, n), zero_tol);
  if (r.classification != SignClass::NonnegativeWithZeros && r.classification != SignClass::NonpositiveWithZeros) {
    return r;
  }
  const double sign = r.classification == SignClass::NonnegativeWithZeros ? 1.0 : -1.0;
  const double L = k.length();
  // Inward t-derivative at (0, x) and (L, x); edges in s follow by symmetry.
  // At a diagonal corner the edge branch applies when the kernel vanishes
  // along the edge, and the branch across the diagonal otherwise.
  const double h = L / n;
  auto inward = [&](bool at_start, double x) {
    if (at_start) {
      const bool edge = x > 0.0 || std::abs(k(0.0, h)) <= zero_tol;
      return edge ? k.upper_dt(0.0, x) : k.lower_dt(0.0, x);
    }
    const bool edge = x < L || std::abs(k(L, L - h)) <= zero_tol;
    return edge ? -k.lower_dt(L, x) : -k.upper_dt(L, x);
  };
  for (const auto& z : r.zero_locations) {
    std::vector<double> slopes;
    if (z.i == 0) slopes.push_back(inward(true, z.s));
    if (z.i == n) slopes.push_back(inward(false, z.s));
    if (z.j == 0) slopes.push_back(inward(true, z.t));
    if (z.j == n) slopes.push_back(inward(false, z.t));
    for (double d : slopes) {
      if (sign * d < -zero_tol) {
        r.classification = SignClass::SignChanging;
        return r;
      }
    }
  }
  return r;
}

SignPrediction predicted_sign_interval(const Potential& p, double T, BoundaryCondition bc,
                                       const SpectrumOptions& o) {
  const Potential a = truncated(p, T);
  SignPrediction r;
  r.bc = bc;
  switch (bc) {
    case BC::Neumann: {
      const Potential e = even_extension(a);
      const double first = first_eigenvalue(e, 2 * T, BC::Periodic, o);
      const double second = std::min(first_eigenvalue(a, T, BC::Mixed1, o), first_eigenvalue(a, T, BC::Mixed2, o));
      r.negative_below = first;
      r.nonnegative = std::pair{first, second};
      break;
    }
    case BC::Periodic: {
      const double first = first_eigenvalue(a, T, BC::Periodic, direct(o));
      r.negative_below = first;
      r.nonnegative = std::pair{first, first_eigenvalue(a, T, BC::AntiPeriodic, direct(o))};
      break;
    }
    case BC::AntiPeriodic:
      r.negative_below = -std::numeric_limits<double>::infinity();
      break;
    default:
      r.negative_below = first_eigenvalue(a, T, bc, o);
      break;
  }
  return r;
}

PredictedSign predicted_sign(const SignPrediction& pr, double lambda, double* margin) {
  std::vector<double> ends{pr.negative_below};
  if (pr.nonnegative) {
    ends.push_back(pr.nonnegative->first);
    ends.push_back(pr.nonnegative->second);
  }
  if (margin) {
    *margin = std::numeric_limits<double>::infinity();
    for (double e : ends) {
      if (std::isfinite(e)) *margin = std::min(*margin, std::abs(lambda - e));
    }
  }
  if (lambda < pr.negative_below) return PredictedSign::Negative;
  if (pr.nonnegative && lambda > pr.nonnegative->first && lambda <= pr.nonnegative->second) {
    return PredictedSign::Nonnegative;
  }
  return PredictedSign::SignChanging;
}

bool sign_matches(BoundaryCondition bc, PredictedSign predicted, SignClass observed) {
  switch (predicted) {
    case PredictedSign::Negative:
      if (bc == BC::Neumann || bc == BC::Periodic) return observed == SignClass::StrictlyNegative;
      return observed == SignClass::StrictlyNegative || observed == SignClass::NonpositiveWithZeros;
    case PredictedSign::Nonnegative:
      return observed == SignClass::StrictlyPositive || observed == SignClass::NonnegativeWithZeros;
    case PredictedSign::SignChanging: return observed == SignClass::SignChanging;
    case PredictedSign::None: return false;
  }
  return false;
}

bool ThresholdReport::pass() const {
  return std::all_of(samples.begin(), samples.end(), [](const ThresholdSample& s) { return s.marginal || s.pass; });
}

ThresholdReport threshold_consistency(const Potential& p, double T, BoundaryCondition bc,
                                      const std::vector<double>& lambdas, int n, double zero_tol, double margin,
                                      const SpectrumOptions& o) {
  ThresholdReport r;
  r.bc = bc;
  r.prediction = predicted_sign_interval(p, T, bc, o);
  const Potential a = truncated(p, T);
  r.samples.resize(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t k) {
    ThresholdSample& s = r.samples[k];
    s.lambda = lambdas[k];
    double distance = 0.0;
    s.predicted = predicted_sign(r.prediction, s.lambda, &distance);
    s.marginal = distance <= margin;
    try {
      s.observed = classify_sign(GreenKernel(a, s.lambda, T, bc, o.integrator_tol), n, zero_tol).classification;
      s.pass = sign_matches(bc, s.predicted, s.observed);
    } catch (const ResonanceError&) {
      s.marginal = true;
    }
  });
  return r;
}

bool is_dominance(std::string_view id) {
  return std::any_of(kDominanceCatalog.begin(), kDominanceCatalog.end(),
                     [id](const DominanceInfo& d) { return d.id == id; });
}

bool DominanceReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.pass; });
}

DominanceReport verify_dominance(const Potential& p, double T, double lambda, std::string_view id, int n,
                                 double tol, double zero_tol) {
  if (!is_dominance(id)) throw DomainError("unknown dominance relation '" + std::string(id) + "'");
  if (!(T > 0.0 && T <= p.length())) throw DomainError("T must lie in (0, L]");
  if (n < 1) throw DomainError("grid size must be at least 1");
  const Potential a = truncated(p, T);
  const Potential e = even_extension(a);
  auto half = [&](BC bc) { return build_green(a, lambda, T, bc, n); };
  auto ext = [&](BC bc) { return build_green(e, lambda, 2 * T, bc, 2 * n); };

  DominanceReport r;
  r.id = std::string(id);
  r.lambda = lambda;
  r.n = n;

  // Hypothesis kernel and the sign it must have.
  enum class Need { Nonnegative, Negative, Nonpositive };
  const bool on_extension = id.starts_with("ND") || id.starts_with("NM1") || id == "M2D";
  const BC hyp_bc = id.starts_with("ND") ? BC::Periodic : id.starts_with("NM1") ? BC::Neumann
                                                        : id == "M2D"            ? BC::Dirichlet
                                                                                 : BC::Neumann;
  const Need need = id.ends_with("_neg") ? Need::Negative : id == "M2D" ? Need::Nonpositive : Need::Nonnegative;
  r.hypothesis_sign = on_extension ? classify_sign(GreenKernel(e, lambda, 2 * T, hyp_bc), 2 * n, zero_tol)
                                    : classify_sign(GreenKernel(a, lambda, T, hyp_bc), n, zero_tol);
  const bool met = need == Need::Nonnegative ? r.hypothesis_sign.nonnegative()
                   : need == Need::Negative  ? r.hypothesis_sign.classification == SignClass::StrictlyNegative
                                             : r.hypothesis_sign.nonpositive();
  if (!met) {
    throw HypothesisError(std::string(id) + ": hypothesis kernel " + problem_name(hyp_bc, on_extension ? 2 * T : T) +
                          " at lambda = " + format_number(lambda) + " is " +
                          std::string(to_string(r.hypothesis_sign.classification)));
  }

  const GreensFunction gn = half(BC::Neumann);
  auto over_grid = [&](const std::string& name, bool strict, auto&& sides) {
    InequalityBuilder b(name, strict, tol);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const auto [lhs, rhs] = sides(i, j);
        b.add(lhs, rhs, grid_point(gn, i, j));
      }
    }
    r.checks.push_back(b.finish());
  };
  auto nonpositive = [&](const GreensFunction& g, const std::string& name) {
    over_grid(name + " <= 0", false, [&](int i, int j) { return std::pair{g.at(i, j), 0.0}; });
  };

  if (id == "ND_pos" || id == "NM1_pos") {
    const GreensFunction g = half(id == "ND_pos" ? BC::Dirichlet : BC::Mixed1);
    const std::string name = id == "ND_pos" ? "G_D" : "G_M1";
    nonpositive(g, name);
    over_grid("-" + name + " <= G_N", false, [&](int i, int j) { return std::pair{-g.at(i, j), gn.at(i, j)}; });
  } else if (id == "ND_neg" || id == "NM1_neg") {
    const GreensFunction g = half(id == "ND_neg" ? BC::Dirichlet : BC::Mixed1);
    const std::string name = id == "ND_neg" ? "G_D" : "G_M1";
    over_grid("G_N < " + name, true, [&](int i, int j) { return std::pair{gn.at(i, j), g.at(i, j)}; });
    nonpositive(g, name);
  } else if (id == "M2D") {
    const GreensFunction gd = half(BC::Dirichlet), gm2 = half(BC::Mixed2);
    over_grid("G_M2 < G_D", true, [&](int i, int j) { return std::pair{gm2.at(i, j), gd.at(i, j)}; });
    nonpositive(gd, "G_D");
  } else {
    const GreensFunction mirror = ext(id == "N_2P" || id == "D_2P" ? BC::Periodic : BC::Neumann);
    const std::string mname = id == "N_2P" || id == "D_2P" ? "G_P[e,2T]" : "G_N[e,2T]";
    auto reflected = [&](int i, int j) { return mirror.at(2 * n - i, j); };
    if (id == "N_2P" || id == "N_2N") {
      over_grid("G_N <= 2 " + mname + "(2T-t,s)", false,
                [&](int i, int j) { return std::pair{gn.at(i, j), 2 * reflected(i, j)}; });
    } else {
      const GreensFunction g = half(id == "D_2P" ? BC::Dirichlet : BC::Mixed1);
      const std::string name = id == "D_2P" ? "G_D" : "G_M1";
      nonpositive(g, name);
      over_grid("-2 " + mname + "(2T-t,s) <= " + name, false,
                [&](int i, int j) { return std::pair{-2 * reflected(i, j), g.at(i, j)}; });
    }
  }
  return r;
}

bool is_comparison(std::string_view id) {
  return std::any_of(kComparisonCatalog.begin(), kComparisonCatalog.end(),
                     [id](const ComparisonInfo& c) { return c.id == id; });
}

bool ComparisonReport::checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.pass; });
}

ComparisonReport verify_solution_comparison(const Potential& p, double T, double lambda, std::string_view id,
                                            const Forcing& sigma1, const Forcing& sigma2, int n, double slack,
                                            double zero_tol) {
  if (!is_comparison(id)) throw DomainError("unknown comparison theorem '" + std::string(id) + "'");
  if (!(T > 0.0 && T <= p.length())) throw DomainError("T must lie in (0, L]");
  if (n < 1) throw DomainError("grid size must be at least 1");
  const Potential a = truncated(p, T);
  const Potential e = even_extension(a);

  ComparisonReport r;
  r.id = std::string(id);
  r.lambda = lambda;
  r.n = n;

  // Kernel sign hypothesis on [0, 2T].
  const bool absolute = id == "4.13" || id == "4.15";
  const BC hyp_bc = id == "4.13" || id == "4.14" ? BC::Periodic : id == "4.17" ? BC::Dirichlet : BC::Neumann;
  r.hypothesis_sign = classify_sign(GreenKernel(e, lambda, 2 * T, hyp_bc), 2 * n, zero_tol);
  const bool kernel_ok = absolute        ? r.hypothesis_sign.nonnegative()
                         : id == "4.17"  ? r.hypothesis_sign.nonpositive()
                                         : r.hypothesis_sign.classification == SignClass::StrictlyNegative;
  if (!kernel_ok) {
    r.hypothesis_failure = problem_name(hyp_bc, 2 * T) + " kernel is " +
                           std::string(to_string(r.hypothesis_sign.classification));
    return r;
  }

  // Forcing order on the quadrature grid. Case 1: 0 <= s2 <= s1; case 2: 0 >= s2 >= s1.
  const int points = 4 * n;
  auto first_violation = [&](auto&& holds) -> std::optional<double> {
    for (int k = 0; k <= points; ++k) {
      const double t = k == points ? T : T * k / points;
      if (!holds(sigma1(t), sigma2(t))) return t;
    }
    return std::nullopt;
  };
  constexpr double kForcingSlack = 1e-12;
  int sign_case = 1;
  if (absolute) {
    if (auto t = first_violation([](double s1, double s2) { return std::abs(s2) <= s1 + kForcingSlack; })) {
      r.hypothesis_failure = "|sigma2| <= sigma1 fails at t = " + format_number(*t);
      return r;
    }
  } else {
    const auto up = first_violation([](double s1, double s2) { return s2 >= -kForcingSlack && s2 <= s1 + kForcingSlack; });
    const auto down =
        first_violation([](double s1, double s2) { return s2 <= kForcingSlack && s2 >= s1 - kForcingSlack; });
    if (up && down) {
      r.hypothesis_failure = "0 <= sigma2 <= sigma1 fails at t = " + format_number(*up) +
                             " and 0 >= sigma2 >= sigma1 fails at t = " + format_number(*down);
      return r;
    }
    sign_case = up ? 2 : 1;
  }
  r.hypothesis_met = true;

  // u1 solves the first problem with sigma1, u2 the second with sigma2.
  // u1 solves the problem with the smaller kernel under sigma1, u2 the other under sigma2.
  BC bc1 = BC::Neumann, bc2 = BC::Dirichlet;
  std::string n1 = "u_N", n2 = "u_D";
  if (id == "4.15" || id == "4.16") bc2 = BC::Mixed1, n2 = "u_M1";
  if (id == "4.17") bc1 = BC::Mixed2, n1 = "u_M2";
  const Eigen::VectorXd u1 = solve_bvp(a, lambda, T, bc1, sigma1, n).sample(n);
  const Eigen::VectorXd u2 = solve_bvp(a, lambda, T, bc2, sigma2, n).sample(n);

  auto check = [&](const std::string& name, bool strict, auto&& sides) {
    InequalityBuilder b(name, strict, slack);
    for (int i = 0; i <= n; ++i) {
      const auto [lhs, rhs] = sides(i);
      b.add(lhs, rhs, GridPoint{i, 0, T * i / n, 0.0});
    }
    r.checks.push_back(b.finish());
  };
  if (absolute) {
    check("|" + n2 + "| <= " + n1, false, [&](int i) { return std::pair{std::abs(u2[i]), u1[i]}; });
  } else if (sign_case == 1) {
    check(n1 + " <= " + n2, false, [&](int i) { return std::pair{u1[i], u2[i]}; });
    check(n2 + " <= 0", false, [&](int i) { return std::pair{u2[i], 0.0}; });
  } else {
    check(n2 + " <= " + n1, false, [&](int i) { return std::pair{u2[i], u1[i]}; });
    check("0 <= " + n2, false, [&](int i) { return std::pair{0.0, u2[i]}; });
  }
  return r;
}

ZeroSetReport zero_set_check(const GreensFunction& g, double zero_tol) {
  ZeroSetReport r;
  r.bc = g.bc();
  r.sign = classify_sign(g, zero_tol);
  r.constant_sign = r.sign.classification != SignClass::SignChanging;
  const int n = g.n();
  for (const auto& z : r.sign.zero_locations) {
    const bool diagonal = z.i == z.j;
    const bool boundary = z.i == 0 || z.j == 0 || z.i == n || z.j == n;
    bool allowed = false;
    switch (g.bc()) {
      case BC::Neumann: allowed = (z.i == 0 && z.j == 0) || (z.i == n && z.j == n); break;
      case BC::Periodic:
      case BC::AntiPeriodic: allowed = diagonal || (z.i == 0 && z.j == n) || (z.i == n && z.j == 0); break;
      default: allowed = diagonal || boundary; break;
    }
    if (!allowed) r.misplaced.push_back(z);
  }
  return r;
}

namespace {

nlohmann::json point_json(const GridPoint& p) { return {p.t, p.s}; }

nlohmann::json checks_json(const std::vector<InequalityCheck>& checks) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : checks) {
    j.push_back({{"name", c.name},
                 {"strict", c.strict},
                 {"min_margin", c.min_margin},
                 {"worst", point_json(c.worst)},
                 {"pass", c.pass}});
  }
  return j;
}

}  // namespace

nlohmann::json to_json(const SignReport& r) {
  nlohmann::json zeros = nlohmann::json::array();
  for (const auto& z : r.zero_locations) zeros.push_back(point_json(z));
  return {{"classification", std::string(to_string(r.classification))},
          {"min_value", r.min_value},
          {"max_value", r.max_value},
          {"zero_tol", r.zero_tol},
          {"zero_locations", zeros}};
}

nlohmann::json to_json(const SignPrediction& p) {
  nlohmann::json j{{"bc", std::string(tag(p.bc))}};
  j["negative_below"] = std::isfinite(p.negative_below) ? nlohmann::json(p.negative_below) : nlohmann::json(nullptr);
  j["nonnegative"] = p.nonnegative ? nlohmann::json{p.nonnegative->first, p.nonnegative->second} : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const ThresholdReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"lambda", s.lambda},
                       {"predicted", std::string(to_string(s.predicted))},
                       {"observed", std::string(to_string(s.observed))},
                       {"marginal", s.marginal},
                       {"pass", s.pass}});
  }
  return {{"prediction", to_json(r.prediction)}, {"samples", samples}, {"pass", r.pass()}};
}

nlohmann::json to_json(const DominanceReport& r) {
  return {{"id", r.id},
          {"lambda", r.lambda},
          {"n", r.n},
          {"hypothesis", to_json(r.hypothesis_sign)["classification"]},
          {"checks", checks_json(r.checks)},
          {"pass", r.pass()}};
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json j{{"id", r.id},
                   {"lambda", r.lambda},
                   {"n", r.n},
                   {"hypothesis_met", r.hypothesis_met},
                   {"hypothesis_kernel", to_json(r.hypothesis_sign)["classification"]},
                   {"checks", checks_json(r.checks)},
                   {"pass", r.pass()}};
  if (!r.hypothesis_failure.empty()) j["hypothesis_failure"] = r.hypothesis_failure;
  return j;
}

nlohmann::json to_json(const ZeroSetReport& r) {
  nlohmann::json misplaced = nlohmann::json::array();
  for (const auto& z : r.misplaced) misplaced.push_back(point_json(z));
  return {{"bc", std::string(tag(r.bc))},
          {"sign", to_json(r.sign)},
          {"constant_sign", r.constant_sign},
          {"misplaced", misplaced},
          {"pass", r.pass()}};
}

}  // namespace hillgreen
