#include <doctest.h>

#include <cmath>
#include <sstream>

#include "../oracles.hpp"
#include "hillgreen/errors.hpp"
#include "hillgreen/spectrum.hpp"

using namespace hillgreen;
using BC = BoundaryCondition;

namespace {

constexpr double kPaperTol = 2e-3;

Potential example2() {
  return Potential({Segment{0.0, 1.0, ConstantPiece{0.0}}, Segment{1.0, 2.0, ConstantPiece{0.1}}});
}
Potential example3() { return Potential::cosine(0.0, 1.0, 1.0, 0.0, M_PI); }
Potential example4() { return Potential::cosine(0.0, 1.0, 2.0, 0.0, M_PI); }

int oracle_kind(BC bc) {
  switch (bc) {
    case BC::Neumann: return 0;
    case BC::Dirichlet: return 1;
    case BC::Mixed1: return 2;
    default: return 3;
  }
}

void check_values(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    INFO("got " << got[i] << " want " << want[i]);
    CHECK(std::abs(got[i] - want[i]) <= tol);
  }
}

bool within(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("oscillation counts for the zero potential") {
  const Potential z = Potential::constant(0.0, 1.0);
  const double lambda = 4.5 * M_PI * M_PI;
  CHECK(eigenvalue_count_below(z, lambda, 1.0, BC::Dirichlet) == 2);
  CHECK(eigenvalue_count_below(z, lambda, 1.0, BC::Neumann) == 3);
  CHECK(eigenvalue_count_below(z, lambda, 1.0, BC::Mixed1) == 2);
  CHECK(eigenvalue_count_below(z, lambda, 1.0, BC::Mixed2) == 2);
  CHECK(eigenvalue_count_below(z, -5.0, 1.0, BC::Neumann) == 0);
  CHECK(eigenvalue_count_below(z, -5.0, 1.0, BC::Dirichlet) == 0);
  CHECK(interior_zero_count(z, lambda, 1.0, BC::Dirichlet) == 2);
  CHECK(interior_zero_count(z, lambda, 1.0, BC::Neumann) == 2);
  CHECK_THROWS_AS(eigenvalue_count_below(z, 1.0, 1.0, BC::Periodic), DomainError);
}

TEST_CASE("characteristic values vanish at closed-form eigenvalues") {
  const Potential z = Potential::constant(0.0, 1.0);
  CHECK(std::abs(characteristic_value(z, M_PI * M_PI, 1.0, BC::Dirichlet)) < 1e-9);
  CHECK(std::abs(characteristic_value(z, M_PI * M_PI / 4, 1.0, BC::Mixed1)) < 1e-9);
  CHECK(std::abs(characteristic_value(z, M_PI * M_PI / 4, 1.0, BC::Mixed2)) < 1e-9);
  CHECK(std::abs(characteristic_value(z, 0.0, 1.0, BC::Neumann)) < 1e-12);
  CHECK(std::abs(characteristic_value(z, 4 * M_PI * M_PI, 1.0, BC::Periodic)) < 1e-9);
  CHECK(std::abs(characteristic_value(z, M_PI * M_PI, 1.0, BC::AntiPeriodic)) < 1e-9);
}

TEST_CASE("separated spectra agree with RK4 shooting") {
  for (const auto& [p, T] : {std::pair{example2(), 2.0}, std::pair{example3(), M_PI}}) {
    for (BC bc : kSeparatedConditions) {
      const Spectrum s = find_eigenvalues(p, T, bc, -1.0, 20.0);
      const auto want = oracle::shooting_eigenvalues(p, T, oracle_kind(bc), -1.0, 20.0);
      INFO(tag(bc));
      REQUIRE(s.count() == want.size());
      CHECK(s.audited_count == static_cast<int>(want.size()));
      for (std::size_t i = 0; i < want.size(); ++i) CHECK(within(s.values()[i], want[i], 1e-6));
    }
  }
}

TEST_CASE("separated indices continue the oscillation count") {
  const Potential z = Potential::constant(0.0, 1.0);
  const Spectrum s = find_eigenvalues(z, 1.0, BC::Dirichlet, 20.0, 100.0);
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(s.eigenvalues[0].k == 1);
  CHECK(within(s.eigenvalues[0].value, 4 * M_PI * M_PI, 1e-8));
  CHECK(s.eigenvalues[1].k == 2);
}

TEST_CASE("a coarse scan is refined until the oscillation count is met") {
  const Potential z = Potential::constant(0.0, 1.0);
  SpectrumOptions o;
  o.scan_points = 2;
  const Spectrum s = find_eigenvalues(z, 1.0, BC::Dirichlet, 5.0, 100.0, o);
  CHECK(s.audited_count == 3);
  REQUIRE(s.count() == 3);
  for (int k = 1; k <= 3; ++k) CHECK(within(s.values()[k - 1], k * k * M_PI * M_PI, 1e-8));
}

TEST_CASE("periodic spectrum of the zero potential detects coexistence") {
  const Potential z = Potential::constant(0.0, 2.0);
  for (SpectrumMethod m : {SpectrumMethod::Factorized, SpectrumMethod::Discriminant}) {
    SpectrumOptions o;
    o.method = m;
    const Spectrum s = find_eigenvalues(z, 2.0, BC::Periodic, -1.0, 40.0, o);
    REQUIRE(s.eigenvalues.size() == 3);
    CHECK(s.eigenvalues[0].multiplicity == 1);
    CHECK(std::abs(s.eigenvalues[0].value) < 1e-8);
    CHECK(s.eigenvalues[1].multiplicity == 2);
    CHECK(within(s.eigenvalues[1].value, M_PI * M_PI / 1.0, 1e-7));
    CHECK(s.eigenvalues[2].k == 3);
    CHECK(within(s.eigenvalues[2].value, 4 * M_PI * M_PI / 1.0, 1e-7));
    const Spectrum a = find_eigenvalues(z, 2.0, BC::AntiPeriodic, -1.0, 40.0, o);
    REQUIRE(a.eigenvalues.size() == 2);
    CHECK(a.eigenvalues[0].multiplicity == 2);
    CHECK(within(a.eigenvalues[0].value, M_PI * M_PI / 4, 1e-7));
    CHECK(within(a.eigenvalues[1].value, 9 * M_PI * M_PI / 4, 1e-7));
  }
}

TEST_CASE("factorized and discriminant routes agree on an even extension") {
  const Potential e = even_extension(example2());
  SpectrumOptions direct;
  direct.method = SpectrumMethod::Discriminant;
  for (BC bc : {BC::Periodic, BC::AntiPeriodic}) {
    const auto f = find_eigenvalues(e, 4.0, bc, -1.0, 15.0).values();
    const auto d = find_eigenvalues(e, 4.0, bc, -1.0, 15.0, direct).values();
    REQUIRE(f.size() == d.size());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(within(f[i], d[i], 1e-7));
  }
}

TEST_CASE("first eigenvalues of the paper examples") {
  SUBCASE("zero potential") {
    const Potential z = Potential::constant(0.0, 1.0);
    const Potential e = even_extension(z);
    CHECK(std::abs(first_eigenvalue(z, 1.0, BC::Neumann)) < 1e-8);
    const double quarter = M_PI * M_PI / 4;
    CHECK(within(first_eigenvalue(z, 1.0, BC::Mixed1), quarter, 1e-8));
    CHECK(within(first_eigenvalue(z, 1.0, BC::Mixed2), quarter, 1e-8));
    CHECK(within(first_eigenvalue(e, 2.0, BC::AntiPeriodic), quarter, 1e-8));
    CHECK(within(first_eigenvalue(e, 2.0, BC::Dirichlet), quarter, 1e-8));
    CHECK(within(first_eigenvalue(z, 1.0, BC::Dirichlet), M_PI * M_PI, 1e-8));
  }
  SUBCASE("step potential") {
    const Potential a = example2();
    CHECK(within(first_eigenvalue(a, 2.0, BC::Neumann), -0.0508, kPaperTol));
    CHECK(within(first_eigenvalue(a, 2.0, BC::Mixed2), 0.5346, kPaperTol));
    CHECK(within(first_eigenvalue(a, 2.0, BC::Mixed1), 0.5984, kPaperTol));
    CHECK(within(first_eigenvalue(a, 2.0, BC::Dirichlet), 2.4170, kPaperTol));
  }
  SUBCASE("cos t") {
    const Potential a = example3();
    CHECK(within(first_eigenvalue(a, M_PI, BC::Neumann), -0.378, kPaperTol));
    CHECK(within(first_eigenvalue(a, M_PI, BC::Mixed1), -0.348, kPaperTol));
    CHECK(within(first_eigenvalue(a, M_PI, BC::Mixed2), 0.5948, kPaperTol));
    CHECK(within(first_eigenvalue(a, M_PI, BC::Dirichlet), 0.918, kPaperTol));
  }
}

TEST_CASE("cos 2t spectra match the tabulated values") {
  const Potential a = example4();
  const Potential ee = even_extension(even_extension(a));
  SpectrumOptions direct;
  direct.method = SpectrumMethod::Discriminant;
  const Spectrum p4 = find_eigenvalues(ee, 4 * M_PI, BC::Periodic, -1.0, 4.2, direct);
  check_values(p4.values(), {-0.1218, 0.0923, 0.0923, 0.47065, 1.4668, 2.34076, 2.34076, 3.9792, 4.1009}, kPaperTol);
  CHECK(p4.eigenvalues[1].multiplicity == 2);
  CHECK(p4.eigenvalues[4].multiplicity == 2);
  check_values(find_eigenvalues(a, M_PI, BC::Neumann, -1.0, 4.2).values(), {-0.1218, 0.47065, 4.1009}, kPaperTol);
  check_values(find_eigenvalues(a, M_PI, BC::Dirichlet, -1.0, 4.2).values(), {1.4668, 3.9792}, kPaperTol);
  check_values(find_eigenvalues(a, M_PI, BC::Mixed1, -1.0, 4.2).values(), {0.0923, 2.34076}, kPaperTol);
  check_values(find_eigenvalues(a, M_PI, BC::Mixed2, -1.0, 4.2).values(), {0.0923, 2.34076}, kPaperTol);
}

TEST_CASE("spectral decomposition holds for the examples") {
  for (const auto& [p, T] : {std::pair{Potential::constant(0.0, 1.0), 1.0}, std::pair{example2(), 2.0},
                             std::pair{example3(), M_PI}, std::pair{example4(), M_PI}}) {
    const DecompositionReport r = verify_spectral_decomposition(p, T, -1.0, 12.0);
    REQUIRE(r.checks.size() == 5);
    for (const auto& c : r.checks) {
      INFO(c.name);
      CHECK(c.pass);
      // Resolves the 2.2e-6 periodic gap of cos t near 9.0143.
      CHECK(c.max_pair_error <= 1e-8);
    }
  }
}

TEST_CASE("a missing eigenvalue breaks the multiset comparison") {
  // N u D on [0, T] against P on [0, 2T] of a potential that is not the even extension.
  const Potential a = example2();
  const Potential wrong = Potential::constant(0.05, 4.0);
  const auto n = find_eigenvalues(a, 2.0, BC::Neumann, -1.0, 5.0).values();
  const auto p = find_eigenvalues(wrong, 4.0, BC::Periodic, -1.0, 5.0).values();
  CHECK(n.front() != doctest::Approx(p.front()).epsilon(1e-5));
}

TEST_CASE("first-eigenvalue relations and corner roots") {
  for (const auto& [p, T] : {std::pair{Potential::constant(0.0, 1.0), 1.0}, std::pair{example2(), 2.0},
                             std::pair{example3(), M_PI}, std::pair{example4(), M_PI}}) {
    const RelationReport r = first_eigenvalue_relations(p, T);
    for (const auto& c : r.checks) {
      INFO(c.name << " lhs=" << c.lhs << " rhs=" << c.rhs);
      CHECK(c.pass);
    }
  }
  // The (0,0) corner root is M2 and the (T,T) corner root is M1; they differ for the step.
  const Potential a = example2();
  const double c0 = periodic_corner_root(a, 2.0, false);
  const double cT = periodic_corner_root(a, 2.0, true);
  CHECK(within(c0, first_eigenvalue(a, 2.0, BC::Mixed2), 1e-6));
  CHECK(within(cT, first_eigenvalue(a, 2.0, BC::Mixed1), 1e-6));
  CHECK(std::abs(c0 - cT) > 1e-2);
}

TEST_CASE("interlacing chains hold") {
  for (const auto& [p, T] : {std::pair{example2(), 2.0}, std::pair{example3(), M_PI}, std::pair{example4(), M_PI}}) {
    const RelationReport r = verify_interlacing(p, T, 3);
    CHECK(r.checks.size() > 20);
    for (const auto& c : r.checks) {
      INFO(c.name << " lhs=" << c.lhs << " rhs=" << c.rhs);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("stability intervals of the zero potential") {
  const auto bands = stability_intervals(Potential::constant(0.0, M_PI), -1.0, 10.0);
  // Edges at 0 (simple), 1, 4, 9 (coexistence points).
  REQUIRE(bands.size() == 8);
  CHECK_FALSE(bands[0].stable);
  CHECK(std::abs(bands[0].upper) < 1e-8);
  CHECK(bands[1].stable);
  CHECK(within(bands[1].upper, 1.0, 1e-8));
  CHECK_FALSE(bands[2].stable);
  CHECK(bands[2].lower == bands[2].upper);
  CHECK(bands[3].stable);
  CHECK(within(bands[4].lower, 4.0, 1e-8));
  CHECK(bands.back().stable);
  CHECK(bands.back().upper == 10.0);
}

TEST_CASE("stability intervals of the step extension open real gaps") {
  const Potential e = even_extension(example2());
  const auto bands = stability_intervals(e, -1.0, 3.0);
  int gaps = 0;
  for (const auto& b : bands) {
    if (!b.stable && b.upper > b.lower && b.lower > -1.0) ++gaps;
    if (b.stable) CHECK(std::abs(discriminant(e, 0.5 * (b.lower + b.upper), 4.0)) < 2.0);
  }
  CHECK(gaps >= 2);
}

TEST_CASE("first stable band of cos 2t over 2 pi") {
  const auto bands = stability_intervals(even_extension(example4()), -1.0, 0.3);
  REQUIRE(bands.size() >= 2);
  CHECK_FALSE(bands[0].stable);
  CHECK(bands[1].stable);
  CHECK(within(bands[1].lower, -0.1218, kPaperTol));
  CHECK(within(bands[1].upper, 0.0923, kPaperTol));
}

TEST_CASE("argument validation") {
  const Potential z = Potential::constant(0.0, 1.0);
  CHECK_THROWS_AS(find_eigenvalues(z, 1.0, BC::Neumann, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(find_eigenvalues(z, 1.0, BC::Neumann, 0.0, NAN), DomainError);
  SpectrumOptions o;
  o.root_tol = 1e-14;
  CHECK_THROWS_AS(find_eigenvalues(z, 1.0, BC::Neumann, 0.0, 1.0, o), DomainError);
  CHECK_THROWS_AS(stability_intervals(z, 1.0, 0.0), DomainError);
}

TEST_CASE("max_count truncates by multiplicity") {
  const Spectrum s = first_eigenvalues(Potential::constant(0.0, 2.0), 2.0, BC::Periodic, 4);
  CHECK(s.count() == 4);
  CHECK(s.eigenvalues.size() == 3);
  CHECK(s.eigenvalues.back().multiplicity == 1);
}

TEST_CASE("CSV and JSON output") {
  const Spectrum s = find_eigenvalues(Potential::constant(0.0, 1.0), 1.0, BC::Dirichlet, 0.0, 50.0);
  std::ostringstream csv;
  write_spectrum_csv(csv, {s});
  CHECK(csv.str().rfind("bc,k,lambda,multiplicity\nD,0,", 0) == 0);
  const auto j = to_json(s);
  CHECK(j["bc"] == "D");
  CHECK(j["eigenvalues"].size() == 2);
  CHECK(j["audited_count"] == 2);
  std::ostringstream sweep;
  write_sweep_csv(sweep, Potential::constant(0.0, 1.0), 1.0, 0.0, 1.0, 3);
  std::string line;
  int lines = 0;
  std::istringstream in(sweep.str());
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 4);
  CHECK(sweep.str().rfind("lambda,delta\n0,2", 0) == 0);
}
