#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hillgreen/errors.hpp"
#include "hillgreen/io.hpp"
#include "hillgreen/potential.hpp"

using namespace hillgreen;

namespace {

Potential example2() {
  return Potential({Segment{0.0, 1.0, ConstantPiece{0.0}}, Segment{1.0, 2.0, ConstantPiece{0.1}}});
}

}  // namespace

TEST_CASE("constant potential evaluates everywhere") {
  const Potential p = Potential::constant(2.5, 3.0);
  CHECK(p(0.0) == 2.5);
  CHECK(p(3.0) == 2.5);
  CHECK(p.length() == 3.0);
  CHECK_THROWS_AS(p(3.5), DomainError);
  CHECK_THROWS_AS(p(-0.1), DomainError);
}

TEST_CASE("piecewise potential takes the right limit at breakpoints") {
  const Potential p = example2();
  CHECK(p(0.5) == 0.0);
  CHECK(p(1.0) == 0.1);
  CHECK(p(2.0) == 0.1);
  CHECK(p.breakpoints() == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("equal neighbouring constants merge") {
  const Potential p({Segment{0.0, 1.0, ConstantPiece{1.0}}, Segment{1.0, 2.0, ConstantPiece{1.0}}});
  CHECK(p.segments().size() == 1);
}

TEST_CASE("invalid segment layouts are rejected") {
  CHECK_THROWS_AS(Potential({Segment{0.5, 1.0, ConstantPiece{}}}), DomainError);
  CHECK_THROWS_AS(Potential({Segment{0.0, 1.0, ConstantPiece{}}, Segment{1.5, 2.0, ConstantPiece{}}}), DomainError);
  CHECK_THROWS_AS(Potential({Segment{0.0, 0.0, ConstantPiece{}}}), DomainError);
}

TEST_CASE("even extension mirrors about L") {
  const Potential a = Potential::cosine(0.0, 1.0, 1.0, 0.0, M_PI);
  const Potential e = even_extension(a);
  CHECK(e.length() == 2 * M_PI);
  for (int k = 1; k < 50; ++k) {
    const double t = M_PI * k / 50.0;
    CHECK(e(2 * M_PI - t) == doctest::Approx(a(t)).epsilon(1e-14));
    CHECK(e(t) == a(t));
  }
  REQUIRE(e.mirrored_half() != nullptr);
  CHECK(e.mirrored_half()->length() == M_PI);
}

TEST_CASE("even extension of the step potential is symmetric at mirrored points") {
  const Potential e = even_extension(example2());
  CHECK(e.breakpoints() == std::vector<double>{0.0, 1.0, 3.0, 4.0});
  for (int k = 1; k < 400; ++k) {
    const double u = 4.0 * k / 400.0;
    if (std::fmod(u, 1.0) == 0.0) continue;
    CHECK(e(u) == e(4.0 - u));
  }
}

TEST_CASE("double extension is 2L periodic") {
  const Potential a = Potential::cosine(0.0, 1.0, 2.0, 0.0, M_PI);
  const Potential ee = even_extension(even_extension(a));
  CHECK(ee.length() == doctest::Approx(4 * M_PI));
  for (int k = 1; k < 100; ++k) {
    const double t = 2 * M_PI * k / 100.0 + 0.01;
    CHECK(ee(t + 2 * M_PI) == doctest::Approx(ee(t)).epsilon(1e-13));
  }
}

TEST_CASE("reflection reverses the argument") {
  const Potential a = example2();
  const Potential b = reflect(a);
  CHECK(b(0.25) == 0.1);
  CHECK(b(1.75) == 0.0);
  CHECK(b.mirrored_half() == nullptr);
  const Potential c = Potential::cosine(0.0, 1.0, 1.0, 0.3, 2.0);
  const Potential rc = reflect(c);
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.1 * k;
    CHECK(rc(t) == doctest::Approx(c(2.0 - t)).epsilon(1e-14));
  }
}

TEST_CASE("shift adds a constant") {
  const Potential p = example2().shifted(0.5);
  CHECK(p(0.2) == doctest::Approx(0.5));
  CHECK(p(1.2) == doctest::Approx(0.6));
}

TEST_CASE("table pieces interpolate") {
  const TablePiece linear({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0}, 1);
  CHECK(linear(0.5) == doctest::Approx(1.0));
  const TablePiece cubic({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 2.0, 3.0}, 3);
  CHECK(cubic(1.5) == doctest::Approx(1.5));
  CHECK_THROWS_AS(TablePiece({0.0, 1.0}, {0.0}, 1), DomainError);
}

TEST_CASE("JSON descriptors round trip") {
  const auto j = nlohmann::json::parse(R"({"T": 2, "pieces": [
      {"from": 0, "to": 1, "kind": "const", "value": 0},
      {"from": 1, "to": 2, "kind": "const", "value": 0.1}]})");
  const Potential p = potential_from_json(j);
  CHECK(p(1.5) == 0.1);
  const Potential q = potential_from_json(potential_to_json(even_extension(p)));
  CHECK(q(3.5) == 0.0);
  CHECK(q(2.5) == 0.1);
  CHECK(potential_hash(p) == potential_hash(potential_from_json(j)));
}

TEST_CASE("malformed descriptors raise DescriptorError") {
  using nlohmann::json;
  CHECK_THROWS_AS(potential_from_json(json::parse(R"({"pieces": []})")), DescriptorError);
  CHECK_THROWS_AS(potential_from_json(json::parse(R"({"T": 1, "pieces": [{"from": 0, "to": 0.5, "kind": "const", "value": 1}]})")),
                  DescriptorError);
  CHECK_THROWS_AS(potential_from_json(json::parse(R"({"T": 1, "pieces": [{"from": 0, "to": 1, "kind": "sinc"}]})")),
                  DescriptorError);
  CHECK_THROWS_AS(potential_from_json(json::parse(R"([1, 2])")), DescriptorError);
}

TEST_CASE("numbers format as shortest round trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.0) == "-2");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(format_number(x)) == x);
}
