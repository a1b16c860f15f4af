#include <doctest.h>

#include <cmath>

#include "hillgreen/identities.hpp"

using namespace hillgreen;

namespace {

Potential example2() {
  return Potential({Segment{0.0, 1.0, ConstantPiece{0.0}}, Segment{1.0, 2.0, ConstantPiece{0.1}}});
}

const IdentityReport& find(const std::vector<IdentityReport>& reports, std::string_view id) {
  for (const auto& r : reports) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("missing report");
}

}  // namespace

TEST_CASE("catalog ids are unique and recognised") {
  for (std::size_t i = 0; i < kIdentityCatalog.size(); ++i) {
    CHECK(is_identity(kIdentityCatalog[i].id));
    for (std::size_t j = i + 1; j < kIdentityCatalog.size(); ++j) CHECK(kIdentityCatalog[i].id != kIdentityCatalog[j].id);
  }
  CHECK_FALSE(is_identity("XYZ"));
  CHECK_THROWS_AS(verify_identity("XYZ", Potential::constant(0.0, 1.0), 1.0, 1.0), DomainError);
}

TEST_CASE("NP holds for cos t") {
  const IdentityReport r = verify_identity("NP", Potential::cosine(0.0, 1.0, 1.0, 0.0, M_PI), M_PI, 0.0);
  CHECK(r.residual <= 1e-6);
  CHECK(r.pass);
  CHECK(r.n == 100);
}

TEST_CASE("ALL4 holds for the zero potential and each side matches closed forms") {
  const IdentityReport r = verify_identity("ALL4", Potential::constant(0.0, 1.0), 1.0, 1.0);
  CHECK(r.residual <= 1e-6);
  const int n = 100;
  const GreensFunction gn = closed_form_constant(1.0, 1.0, BoundaryCondition::Neumann, n);
  const GreensFunction gd = closed_form_constant(1.0, 1.0, BoundaryCondition::Dirichlet, n);
  const GreensFunction g1 = closed_form_constant(1.0, 1.0, BoundaryCondition::Mixed1, n);
  const GreensFunction g2 = closed_form_constant(1.0, 1.0, BoundaryCondition::Mixed2, n);
  // Periodic kernel of the zero potential on [0, 4] is the closed form with half period 2.
  const GreensFunction gp = closed_form_constant(1.0, 2.0, BoundaryCondition::Periodic, 4 * n);
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double lhs = gn.at(i, j) + gd.at(i, j) + g1.at(i, j) + g2.at(i, j);
      worst = std::max(worst, std::abs(lhs - 4 * gp.at(i, j)));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(std::abs(r.lhs_scale - (gn.values() + gd.values() + g1.values() + g2.values()).cwiseAbs().maxCoeff()) <=
        1e-8);
}

TEST_CASE("MREFL for the symmetric cos 2t makes the mixed kernels mirror images") {
  const Potential p = Potential::cosine(0.0, 1.0, 2.0, 0.0, M_PI);
  const IdentityReport r = verify_identity("MREFL", p, M_PI, 0.0);
  CHECK(r.residual <= 1e-6);
  const GreensFunction g1 = build_green(p, 0.0, M_PI, BoundaryCondition::Mixed1);
  const GreensFunction g2 = build_green(p, 0.0, M_PI, BoundaryCondition::Mixed2);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) worst = std::max(worst, std::abs(g1.at(100 - i, 100 - j) - g2.at(i, j)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("whole catalog passes for the zero potential at lambda = 1") {
  const auto reports = verify_all(Potential::constant(0.0, 1.0), 1.0, 1.0);
  CHECK(reports.size() == kIdentityCatalog.size());
  for (const auto& r : reports) {
    CAPTURE(r.id);
    CHECK_FALSE(r.skipped);
    CHECK(r.pass);
  }
}

TEST_CASE("whole catalog passes for the step potential at lambda = 0") {
  for (const auto& r : verify_all(example2(), 2.0, 0.0)) {
    CAPTURE(r.id);
    CHECK_FALSE(r.skipped);
    CHECK(r.pass);
  }
}

TEST_CASE("resonant constituents are skipped, not failed") {
  const auto reports = verify_all(Potential::constant(0.0, 1.0), 1.0, 0.0);
  for (const char* id : {"NP", "NP2", "NN", "SUM", "DIF"}) {
    CAPTURE(id);
    CHECK(find(reports, id).skipped);
    CHECK_FALSE(find(reports, id).reason.empty());
  }
  for (const char* id : {"DD", "M2D", "M2DD", "M2DDD"}) {
    CAPTURE(id);
    CHECK_FALSE(find(reports, id).skipped);
    CHECK(find(reports, id).pass);
  }
  CHECK_THROWS_AS(verify_identity("NP", Potential::constant(0.0, 1.0), 1.0, 0.0), ResonanceError);
}

TEST_CASE("node residuals sit at integrator noise for every grid") {
  const Potential p = Potential::cosine(0.0, 1.0, 1.0, 0.0, M_PI);
  for (const char* id : {"NP", "ALL4", "M1A"}) {
    CAPTURE(id);
    CHECK(verify_identity(id, p, M_PI, 0.2, 50).residual <= 1e-9);
    CHECK(verify_identity(id, p, M_PI, 0.2, 200).residual <= 1e-9);
  }
}

TEST_CASE("off-node residual shrinks with grid refinement") {
  const Potential a = Potential::cosine(0.0, 1.0, 1.0, 0.0, M_PI);
  const Potential e = even_extension(a);
  auto residual = [&](int n) {
    const GreensFunction gn = build_green(a, 0.2, M_PI, BoundaryCondition::Neumann, n);
    const GreensFunction gp = build_green(e, 0.2, 2 * M_PI, BoundaryCondition::Periodic, n);
    double worst = 0.0;
    for (int i = 0; i < 37; ++i) {
      for (int j = 0; j < 37; ++j) {
        const double t = M_PI * (i + 0.3) / 37.3, s = M_PI * (j + 0.6) / 37.7;
        worst = std::max(worst, std::abs(gn(t, s) - gp(t, s) - gp(t, 2 * M_PI - s)));
      }
    }
    return worst;
  };
  CHECK(residual(200) <= residual(50));
}

TEST_CASE("reports serialise to JSON") {
  const auto j = to_json(verify_all(Potential::constant(0.0, 1.0), 1.0, 0.0));
  REQUIRE(j.is_array());
  CHECK(j[0].contains("id"));
  CHECK(j[0].contains("residual"));
  CHECK(j[0].contains("pass"));
  CHECK(j[0]["skipped"] == true);
}
