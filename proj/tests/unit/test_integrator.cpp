#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "hillgreen/errors.hpp"
#include "hillgreen/integrator.hpp"

using namespace hillgreen;

namespace {

Potential example2() {
  return Potential({Segment{0.0, 1.0, ConstantPiece{0.0}}, Segment{1.0, 2.0, ConstantPiece{0.1}}});
}

}  // namespace

TEST_CASE("zero potential at lambda = 0 gives y1 = 1, y2 = t") {
  const SolutionBasis b = fundamental_solutions(Potential::constant(0.0, 1.0), 0.0, 1.0);
  CHECK(b.y1_end() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(b.y1p_end()) < 1e-12);
  CHECK(b.y2_end() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.y2p_end() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero potential at lambda = pi^2 gives cos and sin / pi") {
  const SolutionBasis b = fundamental_solutions(Potential::constant(0.0, 1.0), M_PI * M_PI, 1.0);
  CHECK(std::abs(b.y1_end() + 1.0) < 1e-9);
  CHECK(std::abs(b.y1p_end()) < 1e-8);
  CHECK(std::abs(b.y2_end()) < 1e-9);
  CHECK(std::abs(b.y2p_end() + 1.0) < 1e-9);
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.1 * k;
    const auto s = b.state(t);
    CHECK(std::abs(s[0] - std::cos(M_PI * t)) < 1e-9);
    CHECK(std::abs(s[2] - std::sin(M_PI * t) / M_PI) < 1e-9);
  }
}

TEST_CASE("cos t basis agrees with a fixed-step RK4 reference") {
  const Potential p = Potential::cosine(0.0, 1.0, 1.0, 0.0, M_PI);
  const SolutionBasis b = fundamental_solutions(p, 0.0, M_PI, 1e-12);
  const auto ref = oracle::Rk4{p, 0.0, 20000}.basis(M_PI);
  CHECK(std::abs(b.y1_end() - ref[0]) < 1e-9);
  CHECK(std::abs(b.y1p_end() - ref[1]) < 1e-9);
  CHECK(std::abs(b.y2_end() - ref[2]) < 1e-9);
  CHECK(std::abs(b.y2p_end() - ref[3]) < 1e-9);
}

TEST_CASE("step potential basis agrees with RK4 through the discontinuity") {
  const Potential p = even_extension(example2());
  const SolutionBasis b = fundamental_solutions(p, 0.3, 4.0);
  const auto ref = oracle::Rk4{p, 0.3, 20000}.basis(4.0);
  CHECK(std::abs(b.y1_end() - ref[0]) < 1e-8);
  CHECK(std::abs(b.y2p_end() - ref[3]) < 1e-8);
}

TEST_CASE("discriminant of the zero potential is 2 cos(mL)") {
  const Potential p = Potential::constant(0.0, 2.0);
  CHECK(discriminant(p, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  for (double m : {0.3, 1.0, 2.5, 4.0}) {
    CHECK(std::abs(discriminant(p, m * m, 2.0) - 2 * std::cos(2 * m)) < 1e-8);
  }
}

TEST_CASE("discriminant slope matches a central difference") {
  const Potential p = even_extension(Potential::cosine(0.0, 1.0, 1.0, 0.0, M_PI));
  for (double lambda : {-0.4, 0.2, 1.3}) {
    const auto ds = discriminant_with_slope(p, lambda, p.length(), 1e-12);
    const double h = 1e-5;
    const double fd =
        (discriminant(p, lambda + h, p.length(), 1e-12) - discriminant(p, lambda - h, p.length(), 1e-12)) / (2 * h);
    CHECK(ds.value == doctest::Approx(discriminant(p, lambda, p.length(), 1e-12)).epsilon(1e-10));
    CHECK(std::abs(ds.slope - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("step potential: periodic 4-discriminant equals 2 at -0.0508") {
  const Potential e = even_extension(example2());
  const auto ds = discriminant_with_slope(e, -0.0508, 4.0);
  CHECK(std::abs(ds.value - 2.0) <= 2e-3 * std::abs(ds.slope));
}

TEST_CASE("Wronskian is conserved") {
  const Potential potentials[] = {Potential::cosine(0.0, 1.0, 2.0, 0.0, M_PI), even_extension(example2()),
                                  Potential::cosine(0.0, 1.0, 1.0, 0.0, 2 * M_PI)};
  for (const auto& p : potentials) {
    for (double lambda : {-1.0, 0.5, 4.0}) {
      const SolutionBasis b = fundamental_solutions(p, lambda, p.length());
      double worst = 0.0;
      for (int k = 0; k <= 1000; ++k) worst = std::max(worst, std::abs(b.wronskian(p.length() * k / 1000) - 1.0));
      CHECK(worst <= 100 * kDefaultTolerance);
    }
  }
}

TEST_CASE("doubling identities hold for even extensions") {
  const Potential halves[] = {Potential::cosine(0.0, 1.0, 1.0, 0.0, M_PI), example2(),
                              Potential::cosine(0.0, 1.0, 2.0, 0.0, M_PI)};
  for (const auto& a : halves) {
    const double T = a.length();
    const Potential e = even_extension(a);
    for (double lambda : {-0.7, 0.4, 2.2}) {
      const SolutionBasis b = fundamental_solutions(e, lambda, 2 * T);
      const auto h = b.state(T);
      CHECK(std::abs(b.y1_end() - (2 * h[0] * h[3] - 1)) < 1e-8);
      CHECK(std::abs(b.y1p_end() - 2 * h[0] * h[1]) < 1e-8);
      CHECK(std::abs(b.y2_end() - 2 * h[2] * h[3]) < 1e-8);
      CHECK(std::abs(b.y2p_end() - b.y1_end()) < 1e-8);
    }
  }
}

TEST_CASE("solutions are linear in the initial data") {
  const Potential p = Potential::cosine(0.0, 1.0, 1.0, 0.0, M_PI);
  const SolutionBasis b = fundamental_solutions(p, 0.7, M_PI);
  const auto u = solve_initial_value(p, 0.7, M_PI, 1.5, -0.25);
  for (int k = 0; k <= 50; ++k) {
    const double t = M_PI * k / 50;
    const auto s = b.state(t);
    CHECK(std::abs(u(t)[0] - (1.5 * s[0] - 0.25 * s[2])) < 100 * kDefaultTolerance);
  }
}

TEST_CASE("arguments are validated") {
  const Potential p = Potential::constant(0.0, 1.0);
  CHECK_THROWS_AS(fundamental_solutions(p, 0.0, 2.0), DomainError);
  CHECK_THROWS_AS(fundamental_solutions(p, 0.0, 1.0, 1e-16), DomainError);
  const SolutionBasis b = fundamental_solutions(p, 0.0, 1.0);
  CHECK_THROWS_AS(b.state(1.5), DomainError);
}

TEST_CASE("step size underflow reports the failing time") {
  const Potential p({Segment{0.0, 0.5, ConstantPiece{0.0}}, Segment{0.5, 1.0, ConstantPiece{1e34}}});
  try {
    fundamental_solutions(p, 0.0, 1.0);
    FAIL("expected an integration failure");
  } catch (const IntegrationError& e) {
    CHECK(e.failing_time() >= 0.5);
    CHECK(e.failing_time() < 1.0);
  }
}
