#include "hillgreen/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hillgreen/greens.hpp"
#include "hillgreen/identities.hpp"
#include "hillgreen/io.hpp"
#include "hillgreen/parallel.hpp"
#include "hillgreen/spectrum.hpp"

namespace hillgreen::cli {

namespace {

using json = nlohmann::json;
using BC = BoundaryCondition;

constexpr double kPi = 3.141592653589793;
constexpr int kDefaultSweepPoints = 201;
constexpr double kExampleTolerance = 2e-3;

const std::vector<std::string> kSuites = {"identities", "decomposition", "relations", "interlacing", "signs", "all"};

double parse_scalar(std::string_view text) {
  std::string s(text);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = kPi;
    s.resize(s.size() - 2);
    if (s.empty() || s == "+" || s == "-") s += "1";
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + std::string(text) + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + std::string(text) + "'");
  return value * factor;
}

std::vector<BC> parse_bcs(const std::string& text) {
  if (text == "all") return {kAllBoundaryConditions.begin(), kAllBoundaryConditions.end()};
  std::vector<BC> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto bc = parse_boundary_condition(item);
    if (!bc) throw UsageError("unknown boundary condition '" + item + "'");
    out.push_back(*bc);
  }
  if (out.empty()) throw UsageError("--bc is empty");
  return out;
}

// Separated problems live on [0, T]; P and A on the even extension over [0, 2T].
struct Problem {
  Potential potential;
  double length;
};

Problem problem(const Potential& a, double T, BC bc) {
  if (is_separated(bc)) return {a, T};
  return {even_extension(a), 2 * T};
}

struct Loaded {
  Potential full;
  Potential a;
  double T;
};

Loaded load(const RunConfig& c) {
  Potential p = load_potential(c.potential_file);
  const double T = c.T.value_or(p.length());
  if (!(T > 0.0) || T > p.length() * (1 + 1e-12)) {
    throw UsageError("--T must lie in (0, " + format_number(p.length()) + "]");
  }
  const double length = std::min(T, p.length());
  Potential a = truncated(p, length);
  return {std::move(p), std::move(a), length};
}

SpectrumOptions spectrum_options(const RunConfig& c) {
  SpectrumOptions o;
  o.integrator_tol = c.tol;
  if (c.points > 0) o.scan_points = c.points;
  if (c.direct) o.method = SpectrumMethod::Discriminant;
  return o;
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const Loaded in = load(c);
  const SpectrumOptions o = spectrum_options(c);
  const std::vector<BC> bcs = parse_bcs(c.bc);
  std::vector<Spectrum> spectra;
  for (BC bc : bcs) {
    const Problem pr = problem(in.a, in.T, bc);
    if (c.range) {
      spectra.push_back(find_eigenvalues(pr.potential, pr.length, bc, c.range->first, c.range->second, o));
    } else {
      spectra.push_back(first_eigenvalues(pr.potential, pr.length, bc, static_cast<std::size_t>(c.count), o));
    }
  }
  if (c.format == Format::Csv) {
    write_spectrum_csv(out, spectra);
  } else {
    json list = json::array();
    for (const auto& s : spectra) list.push_back(to_json(s));
    write_json(out, {{"T", in.T}, {"potential", potential_to_json(in.a)}, {"spectra", list}});
  }
  return kExitOk;
}

int cmd_green(const RunConfig& c, std::ostream& out) {
  const Loaded in = load(c);
  const BC bc = parse_bcs(c.bc).front();
  const Problem pr = problem(in.a, in.T, bc);
  const GreensFunction g = build_green(pr.potential, *c.lambda, pr.length, bc, c.n, c.tol);
  if (c.format == Format::Csv) {
    write_kernel_csv(out, g);
    return kExitOk;
  }
  json nodes = json::array();
  for (int i = 0; i <= g.n(); ++i) nodes.push_back(g.node(i));
  json rows = json::array();
  for (int i = 0; i <= g.n(); ++i) {
    json row = json::array();
    for (int j = 0; j <= g.n(); ++j) row.push_back(g.at(i, j));
    rows.push_back(std::move(row));
  }
  write_json(out, {{"bc", std::string(tag(bc))},
                   {"problem", problem_name(bc, pr.length)},
                   {"length", pr.length},
                   {"lambda", g.lambda()},
                   {"n", g.n()},
                   {"sign", to_json(classify_sign(GreenKernel(pr.potential, g.lambda(), pr.length, bc, c.tol), c.n))},
                   {"nodes", nodes},
                   {"G", rows}});
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const Loaded in = load(c);
  const Potential e = even_extension(in.a);
  const int points = c.points > 0 ? c.points : kDefaultSweepPoints;
  const auto [lo, hi] = *c.range;
  if (c.format == Format::Csv) {
    write_sweep_csv(out, e, 2 * in.T, lo, hi, points, c.tol);
    return kExitOk;
  }
  std::vector<double> xs(static_cast<std::size_t>(points)), ds(xs.size());
  for (int i = 0; i < points; ++i) xs[i] = lo + (hi - lo) * i / (points - 1);
  parallel_for(xs.size(), [&](std::size_t i) { ds[i] = discriminant(e, xs[i], 2 * in.T, c.tol); });
  json samples = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) samples.push_back({{"lambda", xs[i]}, {"delta", ds[i]}});
  write_json(out, {{"length", 2 * in.T},
                   {"samples", samples},
                   {"bands", to_json(stability_intervals(e, lo, hi, std::max(points, 200), 1e-8, c.tol))}});
  return kExitOk;
}

struct Row {
  std::string group;
  std::string name;
  double value = 0.0;
  bool pass = false;
};

void write_rows(std::ostream& out, const std::vector<Row>& rows) {
  out << "group,check,value,pass\n";
  for (const auto& r : rows) {
    out << r.group << ",\"" << r.name << "\"," << format_number(r.value) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const Loaded in = load(c);
  const SpectrumOptions o = spectrum_options(c);
  const bool all = c.suite == "all";
  std::vector<Row> rows;
  json report = json::object();

  if ((all && c.lambda) || c.suite == "identities") {
    std::vector<IdentityReport> ids;
    if (!c.id.empty()) {
      ids.push_back(verify_identity(c.id, in.a, in.T, *c.lambda, c.n));
    } else {
      ids = verify_all(in.a, in.T, *c.lambda, c.n);
    }
    for (const auto& r : ids) {
      if (!r.skipped) rows.push_back({"identities", r.id, r.residual, r.pass});
    }
    report["identities"] = to_json(ids);
  }
  if (all || c.suite == "decomposition") {
    std::size_t count = c.count > 0 ? static_cast<std::size_t>(c.count) : 6;
    std::pair<double, double> window;
    if (c.range) {
      window = *c.range;
      count = static_cast<std::size_t>(std::max(c.count, 0));
    } else {
      window = decomposition_window(in.a, in.T, count, o);
    }
    const DecompositionReport r = verify_spectral_decomposition(in.a, in.T, window.first, window.second, 1e-5, count, o);
    for (const auto& s : r.checks) rows.push_back({"decomposition", s.name, s.max_pair_error, s.pass});
    report["decomposition"] = to_json(r);
  }
  if (all || c.suite == "relations") {
    const RelationReport r = first_eigenvalue_relations(in.a, in.T, 1e-5, 1e-6, o);
    for (const auto& s : r.checks) rows.push_back({"relations", s.name, s.margin, s.pass});
    report["relations"] = to_json(r);
  }
  if (all || c.suite == "interlacing") {
    const RelationReport r = verify_interlacing(in.a, in.T, c.count > 0 ? c.count : 3, 1e-6, o);
    for (const auto& s : r.checks) rows.push_back({"interlacing", s.name, s.margin, s.pass});
    report["interlacing"] = to_json(r);
  }
  if (all || c.suite == "signs") {
    json signs = json::array();
    for (BC bc : kAllBoundaryConditions) {
      const SignPrediction pred = predicted_sign_interval(in.a, in.T, bc, o);
      double lo = std::isfinite(pred.negative_below) ? pred.negative_below : -1.0;
      double hi = pred.nonnegative ? pred.nonnegative->second : lo;
      lo -= 1.5;
      hi += 1.0;
      std::vector<double> lambdas;
      for (int k = 0; k < 20; ++k) lambdas.push_back(lo + (hi - lo) * (k + 0.5) / 20);
      const ThresholdReport r = threshold_consistency(in.a, in.T, bc, lambdas, c.n, kZeroTolerance, 1e-4, o);
      for (const auto& s : r.samples) {
        if (s.marginal) continue;
        rows.push_back({"signs", std::string(tag(bc)) + " " + std::string(to_string(s.predicted)) + " vs " +
                                     std::string(to_string(s.observed)),
                        s.lambda, s.pass});
      }
      signs.push_back(to_json(r));
    }
    report["signs"] = signs;
  }

  if (c.format == Format::Csv) {
    write_rows(out, rows);
  } else {
    write_json(out, report);
  }
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
  return c.strict && !ok ? kExitVerificationFailed : kExitOk;
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
  const Loaded in = load(c);
  const double lambda = *c.lambda;
  std::vector<std::string> dominance, comparison;
  if (c.all) {
    for (const auto& d : kDominanceCatalog) dominance.emplace_back(d.id);
    for (const auto& d : kComparisonCatalog) comparison.emplace_back(d.id);
  }
  if (!c.relation.empty()) dominance.push_back(c.relation);
  if (!c.theorem.empty()) comparison.push_back(c.theorem);
  const Forcing s1 = parse_forcing(c.sigma1);
  const Forcing s2 = parse_forcing(c.sigma2);

  std::vector<Row> rows;
  json reports = json::array();
  bool applicable = false;
  for (const auto& id : dominance) {
    try {
      const DominanceReport r = verify_dominance(in.a, in.T, lambda, id, c.n);
      for (const auto& ch : r.checks) rows.push_back({id, ch.name, ch.min_margin, ch.pass});
      reports.push_back(to_json(r));
      applicable = true;
    } catch (const HypothesisError& e) {
      reports.push_back({{"id", id}, {"lambda", lambda}, {"hypothesis_met", false}, {"hypothesis_failure", e.what()}});
    }
  }
  for (const auto& id : comparison) {
    const ComparisonReport r = verify_solution_comparison(in.a, in.T, lambda, id, s1, s2, c.n);
    if (r.hypothesis_met) {
      for (const auto& ch : r.checks) rows.push_back({id, ch.name, ch.min_margin, ch.pass});
      applicable = true;
    }
    reports.push_back(to_json(r));
  }
  if (c.format == Format::Csv) {
    write_rows(out, rows);
  } else {
    write_json(out, reports);
  }
  const bool ok = applicable && std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
  return c.strict && !ok ? kExitVerificationFailed : kExitOk;
}

// Example reproduction.

struct ExampleRow {
  int example = 0;
  std::string quantity;
  double computed = 0.0;
  std::string relation;  ///< "approx", "eq", "lt" or "le"
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

class ExampleTable {
 public:
  explicit ExampleTable(int example) : example_(example) {}

  void approx(std::string q, double computed, double reference, double tol = kExampleTolerance) {
    rows_.push_back({example_, std::move(q), computed, "approx", reference, tol,
                     std::abs(computed - reference) <= tol});
  }
  void equal(std::string q, double computed, double reference) {
    rows_.push_back({example_, std::move(q), computed, "eq", reference, 0.0, computed == reference});
  }
  void less(std::string q, double lhs, double rhs) {
    rows_.push_back({example_, std::move(q), lhs, "lt", rhs, 0.0, lhs < rhs});
  }
  void relations(const RelationReport& r) {
    for (const auto& c : r.checks) {
      const char* rel = c.relation == Relation::Equal ? "approx" : c.relation == Relation::Less ? "lt" : "le";
      rows_.push_back({example_, c.name, c.lhs, rel, c.rhs, c.relation == Relation::Equal ? 1e-5 : 0.0, c.pass});
    }
  }
  // A computed spectrum against reference values with multiplicities.
  void set(const std::string& name, const Spectrum& s, const std::vector<std::pair<double, int>>& reference) {
    equal(name + " distinct count", static_cast<double>(s.eigenvalues.size()), static_cast<double>(reference.size()));
    for (const auto& [value, mult] : reference) {
      const Eigenvalue* best = nullptr;
      for (const auto& e : s.eigenvalues) {
        if (!best || std::abs(e.value - value) < std::abs(best->value - value)) best = &e;
      }
      const std::string q = name + " near " + format_number(value);
      approx(q, best ? best->value : NAN, value);
      equal(q + " multiplicity", best ? best->multiplicity : 0, mult);
    }
  }

  std::vector<ExampleRow>& rows() { return rows_; }

 private:
  int example_;
  std::vector<ExampleRow> rows_;
};

std::vector<ExampleRow> example1() {
  ExampleTable t(1);
  const auto [a, T] = example_potential(1);
  for (double m : {0.5, 1.0, 2.0}) {
    for (BC bc : kAllBoundaryConditions) {
      const Problem pr = problem(a, T, bc);
      const GreensFunction g = build_green(pr.potential, m * m, pr.length, bc, kDefaultGrid);
      const ConstantPotentialKernel<double> closed(m, T, bc);
      double err = 0.0;
      for (int i = 0; i <= g.n(); ++i) {
        for (int j = 0; j <= g.n(); ++j) err = std::max(err, std::abs(g.at(i, j) - closed(g.node(i), g.node(j))));
      }
      t.approx("G_" + std::string(tag(bc)) + " m=" + format_number(m) + " sup error", err, 0.0, 1e-8);
    }
  }
  const double q = kPi * kPi / (4 * T * T);
  t.approx("lambda_N", first_eigenvalue(a, T, BC::Neumann), 0.0, 1e-6);
  t.approx("lambda_D", first_eigenvalue(a, T, BC::Dirichlet), 4 * q, 1e-6);
  t.approx("lambda_M1", first_eigenvalue(a, T, BC::Mixed1), q, 1e-6);
  t.approx("lambda_M2", first_eigenvalue(a, T, BC::Mixed2), q, 1e-6);
  const Potential e = even_extension(a);
  t.approx("lambda_P[e,2T]", first_eigenvalue(e, 2 * T, BC::Periodic), 0.0, 1e-6);
  t.approx("lambda_A[e,2T]", first_eigenvalue(e, 2 * T, BC::AntiPeriodic), q, 1e-6);
  t.approx("lambda_D[e,2T]", first_eigenvalue(e, 2 * T, BC::Dirichlet), q, 1e-6);
  return std::move(t.rows());
}

std::vector<ExampleRow> example2() {
  ExampleTable t(2);
  const auto [a, T] = example_potential(2);
  t.approx("lambda_N", first_eigenvalue(a, T, BC::Neumann), -0.0508);
  t.approx("lambda_M2", first_eigenvalue(a, T, BC::Mixed2), 0.5346);
  t.approx("lambda_M1", first_eigenvalue(a, T, BC::Mixed1), 0.5984);
  t.approx("lambda_D", first_eigenvalue(a, T, BC::Dirichlet), 2.4170);
  const Potential ee = even_extension(even_extension(a));
  const auto p4 = first_eigenvalues(ee, 4 * T, BC::Periodic, 3).values();
  t.approx("P[ee,4T] first", p4[0], -0.0508);
  t.approx("P[ee,4T] second", p4[1], 0.5346);
  t.approx("P[ee,4T] third", p4[2], 0.5984);
  t.relations(first_eigenvalue_relations(a, T));
  return std::move(t.rows());
}

std::vector<ExampleRow> example3() {
  ExampleTable t(3);
  const auto [a, T] = example_potential(3);
  const double n = first_eigenvalue(a, T, BC::Neumann);
  const double m1 = first_eigenvalue(a, T, BC::Mixed1);
  const double m2 = first_eigenvalue(a, T, BC::Mixed2);
  t.approx("lambda_N", n, -0.378);
  t.approx("lambda_M1", m1, -0.348);
  t.approx("lambda_M2", m2, 0.5948);
  t.approx("lambda_D", first_eigenvalue(a, T, BC::Dirichlet), 0.918);
  t.less("lambda_M1 < lambda_M2", m1, m2);
  const Potential e = even_extension(a);
  t.approx("lambda_P[ee,4T]", first_eigenvalue(even_extension(e), 4 * T, BC::Periodic), -0.378);
  t.approx("lambda_A[e,2T]", first_eigenvalue(e, 2 * T, BC::AntiPeriodic), -0.348);
  t.relations(first_eigenvalue_relations(a, T));
  return std::move(t.rows());
}

std::vector<ExampleRow> example4() {
  ExampleTable t(4);
  const auto [a, T] = example_potential(4);
  const Potential e = even_extension(a);
  const Potential ee = even_extension(e);
  constexpr double lo = -1.0, hi = 4.2;
  t.set("P[ee,4T]", find_eigenvalues(ee, 4 * T, BC::Periodic, lo, hi),
        {{-0.1218, 1}, {0.0923, 2}, {0.47065, 1}, {1.4668, 1}, {2.34076, 2}, {3.9792, 1}, {4.1009, 1}});
  t.set("N", find_eigenvalues(a, T, BC::Neumann, lo, hi), {{-0.1218, 1}, {0.47065, 1}, {4.1009, 1}});
  t.set("D", find_eigenvalues(a, T, BC::Dirichlet, lo, hi), {{1.4668, 1}, {3.9792, 1}});
  t.set("M1", find_eigenvalues(a, T, BC::Mixed1, lo, hi), {{0.0923, 1}, {2.34076, 1}});
  t.set("M2", find_eigenvalues(a, T, BC::Mixed2, lo, hi), {{0.0923, 1}, {2.34076, 1}});
  SpectrumOptions direct;
  direct.method = SpectrumMethod::Discriminant;
  // Delta(lambda) = -2 has double roots: the anti-periodic eigenvalues coexist.
  t.set("A[e,2T] double roots of Delta = -2", find_eigenvalues(e, 2 * T, BC::AntiPeriodic, lo, hi, direct),
        {{0.0923, 2}, {2.34076, 2}});
  const auto n = first_eigenvalues(a, T, BC::Neumann, 3).values();
  const auto d = first_eigenvalues(a, T, BC::Dirichlet, 2).values();
  t.less("lambda_0^N < lambda_1^N", n[0], n[1]);
  t.less("lambda_1^N < lambda_0^D", n[1], d[0]);
  t.less("lambda_0^D < lambda_1^D", d[0], d[1]);
  t.less("lambda_1^D < lambda_2^N", d[1], n[2]);
  t.relations(first_eigenvalue_relations(a, T));
  return std::move(t.rows());
}

int cmd_examples(const RunConfig& c, std::ostream& out) {
  std::vector<int> which = c.which;
  if (c.all) which = {1, 2, 3, 4};
  std::sort(which.begin(), which.end());
  which.erase(std::unique(which.begin(), which.end()), which.end());
  std::vector<ExampleRow> rows;
  for (int k : which) {
    std::vector<ExampleRow> part = k == 1 ? example1() : k == 2 ? example2() : k == 3 ? example3() : example4();
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (c.format == Format::Csv) {
    out << "example,quantity,computed,relation,reference,tolerance,pass\n";
    for (const auto& r : rows) {
      out << r.example << ",\"" << r.quantity << "\"," << format_number(r.computed) << ',' << r.relation << ','
          << format_number(r.reference) << ',' << format_number(r.tolerance) << ',' << (r.pass ? "true" : "false")
          << '\n';
    }
  } else {
    json list = json::array();
    for (const auto& r : rows) {
      list.push_back({{"example", r.example},
                      {"quantity", r.quantity},
                      {"computed", r.computed},
                      {"relation", r.relation},
                      {"reference", r.reference},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass}});
    }
    write_json(out, list);
  }
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const ExampleRow& r) { return r.pass; });
  return c.strict && !ok ? kExitVerificationFailed : kExitOk;
}

int dispatch(const RunConfig& c, std::ostream& out) {
  switch (c.command) {
    case Command::Spectrum: return cmd_spectrum(c, out);
    case Command::Green: return cmd_green(c, out);
    case Command::Verify: return cmd_verify(c, out);
    case Command::Compare: return cmd_compare(c, out);
    case Command::Sweep: return cmd_sweep(c, out);
    case Command::Examples: return cmd_examples(c, out);
  }
  return kExitUsage;
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Green: return "green";
    case Command::Verify: return "verify";
    case Command::Compare: return "compare";
    case Command::Sweep: return "sweep";
    case Command::Examples: return "examples";
  }
  return "?";
}

Forcing parse_forcing(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    const double value = parse_scalar(text);
    return [value](double) { return value; };
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  const auto second = rest.find(':');
  if (second == std::string_view::npos || (kind != "sin" && kind != "cos")) {
    throw UsageError("forcing must be a number, sin:A:W or cos:A:W, got '" + std::string(text) + "'");
  }
  const double amplitude = parse_scalar(rest.substr(0, second));
  const double omega = parse_scalar(rest.substr(second + 1));
  if (kind == "sin") return [=](double t) { return amplitude * std::sin(omega * t); };
  return [=](double t) { return amplitude * std::cos(omega * t); };
}

std::pair<Potential, double> example_potential(int which) {
  switch (which) {
    case 1: return {Potential::constant(0.0, 1.0), 1.0};
    case 2:
      return {Potential({Segment{0.0, 1.0, ConstantPiece{0.0}}, Segment{1.0, 2.0, ConstantPiece{0.1}}}), 2.0};
    case 3: return {Potential::cosine(0.0, 1.0, 1.0, 0.0, kPi), kPi};
    case 4: return {Potential::cosine(0.0, 1.0, 2.0, 0.0, kPi), kPi};
    default: throw UsageError("examples are numbered 1 to 4");
  }
}

void validate(const RunConfig& c) {
  const bool needs_potential = c.command != Command::Examples;
  if (needs_potential && c.potential_file.empty()) throw UsageError("--potential is required");
  if (c.T && !(*c.T > 0.0)) throw UsageError("--T must be positive");
  if (c.n < 2) throw UsageError("--n must be at least 2");
  if (!(c.tol > 0.0) || c.tol >= 1e-2) throw UsageError("--tol must lie in (0, 1e-2)");
  if (c.points < 0 || c.points == 1) throw UsageError("--points must be at least 2");
  if (c.count < 0) throw UsageError("--count must be nonnegative");
  if (c.range && !(c.range->first < c.range->second)) throw UsageError("--range needs lower < upper");
  switch (c.command) {
    case Command::Spectrum:
      parse_bcs(c.bc);
      if (!c.range && c.count == 0) throw UsageError("spectrum needs --range or --count");
      break;
    case Command::Green:
      if (!c.lambda) throw UsageError("green needs --lambda");
      if (c.bc == "all" || parse_bcs(c.bc).size() != 1) throw UsageError("green needs a single --bc");
      break;
    case Command::Sweep:
      if (!c.range) throw UsageError("sweep needs --range");
      break;
    case Command::Verify:
      if (std::find(kSuites.begin(), kSuites.end(), c.suite) == kSuites.end()) {
        throw UsageError("unknown suite '" + c.suite + "'");
      }
      if (c.suite == "identities" && !c.lambda) throw UsageError("the identities suite needs --lambda");
      if (!c.id.empty() && !is_identity(c.id)) throw UsageError("unknown identity '" + c.id + "'");
      break;
    case Command::Compare:
      if (!c.lambda) throw UsageError("compare needs --lambda");
      if (!c.all && c.relation.empty() && c.theorem.empty()) {
        throw UsageError("compare needs --relation, --theorem or --all");
      }
      if (!c.relation.empty() && !is_dominance(c.relation)) throw UsageError("unknown relation '" + c.relation + "'");
      if (!c.theorem.empty() && !is_comparison(c.theorem)) throw UsageError("unknown theorem '" + c.theorem + "'");
      parse_forcing(c.sigma1);
      parse_forcing(c.sigma2);
      break;
    case Command::Examples:
      if (!c.all && c.which.empty()) throw UsageError("examples needs --which or --all");
      for (int k : c.which) {
        if (k < 1 || k > 4) throw UsageError("examples are numbered 1 to 4");
      }
      break;
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    std::ostringstream buffer;
    const int status = dispatch(config, buffer);
    if (config.output) {
      std::ofstream file(*config.output, std::ios::binary);
      if (!file) throw UsageError("cannot write " + config.output->string());
      file << buffer.str();
    } else {
      out << buffer.str();
    }
    if (status == kExitVerificationFailed) err << "verification failed\n";
    return status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DescriptorError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResonanceError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const PoleError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IntegrationError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Green's functions, spectra and comparison principles of Hill operators", "hillgreen"};
  app.require_subcommand(1);
  RunConfig c;
  std::vector<double> range;
  double T = 0.0, lambda = 0.0;
  std::string format = "csv";
  std::string output;

  auto potential = [&](CLI::App* s) {
    s->add_option("--potential", c.potential_file, "JSON potential descriptor")->required();
    s->add_option("--T", T, "half period T (default: the descriptor's T)");
  };
  auto io = [&](CLI::App* s) {
    s->add_option("--output,-o", output, "output file (default: stdout)");
    s->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto range_option = [&](CLI::App* s) {
    s->add_option("--range", range, "lambda range: lower upper")->expected(2);
  };
  auto tol = [&](CLI::App* s) { s->add_option("--tol", c.tol, "integrator tolerance"); };

  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of the boundary value problems");
  potential(spectrum);
  spectrum->add_option("--bc", c.bc, "P, A, N, D, M1, M2, a comma list, or all");
  range_option(spectrum);
  spectrum->add_option("--count", c.count, "first count eigenvalues per problem instead of a range");
  spectrum->add_option("--points", c.points, "bracketing scan points");
  spectrum->add_flag("--direct", c.direct, "periodic spectra from the discriminant");
  tol(spectrum);
  io(spectrum);

  CLI::App* green = app.add_subcommand("green", "Green's function on an (n+1) x (n+1) grid");
  potential(green);
  green->add_option("--lambda", lambda, "spectral parameter")->required();
  green->add_option("--bc", c.bc, "P, A, N, D, M1 or M2")->required();
  green->add_option("--n", c.n, "grid intervals");
  tol(green);
  io(green);

  CLI::App* verify = app.add_subcommand("verify", "decomposition identities and spectral relations");
  potential(verify);
  verify->add_option("--lambda", lambda, "spectral parameter for the identity suite");
  verify->add_option("--suite", c.suite, "identities, decomposition, relations, interlacing, signs or all");
  verify->add_option("--id", c.id, "single identity id");
  range_option(verify);
  verify->add_option("--count", c.count, "eigenvalues compared (decomposition) or indices (interlacing)");
  verify->add_option("--n", c.n, "grid intervals");
  tol(verify);
  verify->add_flag("--strict", c.strict, "exit 1 when a check fails");
  io(verify);

  CLI::App* compare = app.add_subcommand("compare", "Green's function dominance and comparison principles");
  potential(compare);
  compare->add_option("--lambda", lambda, "spectral parameter")->required();
  compare->add_option("--relation", c.relation, "dominance relation id");
  compare->add_option("--theorem", c.theorem, "comparison id (4.13 to 4.17)");
  compare->add_flag("--all", c.all, "every relation and comparison");
  compare->add_option("--sigma1", c.sigma1, "forcing sigma1: number, sin:A:W or cos:A:W");
  compare->add_option("--sigma2", c.sigma2, "forcing sigma2");
  compare->add_option("--n", c.n, "grid intervals");
  compare->add_flag("--strict", c.strict, "exit 1 when a check fails");
  io(compare);

  CLI::App* sweep = app.add_subcommand("sweep", "discriminant of the even extension over [0, 2T]");
  potential(sweep);
  range_option(sweep);
  sweep->add_option("--points", c.points, "samples including both ends");
  tol(sweep);
  io(sweep);

  CLI::App* examples = app.add_subcommand("examples", "reproduce the built-in examples 1 to 4");
  examples->add_option("--which", c.which, "example numbers");
  examples->add_flag("--all", c.all, "all examples");
  examples->add_flag("--strict", c.strict, "exit 1 when a value is off");
  io(examples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::pair<CLI::App*, Command> commands[] = {{spectrum, Command::Spectrum}, {green, Command::Green},
                                                    {verify, Command::Verify},     {compare, Command::Compare},
                                                    {sweep, Command::Sweep},       {examples, Command::Examples}};
  for (const auto& [sub, cmd] : commands) {
    if (!sub->parsed()) continue;
    c.command = cmd;
    auto given = [sub](const char* name) {
      const CLI::Option* o = sub->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };
    if (given("--T")) c.T = T;
    if (given("--lambda")) c.lambda = lambda;
    if (given("--range")) c.range = std::pair{range[0], range[1]};
    if (given("--output")) c.output = output;
  }
  c.format = format == "json" ? Format::Json : Format::Csv;
  return run(c, out, err);
}

}  // namespace hillgreen::cli
