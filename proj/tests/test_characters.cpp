#include "doctest.h"

#include <cmath>

#include "rnlab/characters.hpp"
#include "rnlab/errors.hpp"

using namespace rnlab;

TEST_CASE("family size and parity") {
  for (i64 q : {5, 7, 11, 101, 1009}) {
    const auto g = make_character_group(q);
    const auto chars = enumerate_even_primitive(g);
    CHECK(static_cast<i64>(chars.size()) == phi_plus(q));
    for (const auto& chi : chars) {
      CHECK(chi.is_even());
      CHECK(std::abs(chi(q - 1) - Complex(1, 0)) < 1e-12);
    }
  }
  CHECK(enumerate_even_primitive(make_character_group(3)).empty());
}

TEST_CASE("characters are completely multiplicative and vanish at q") {
  const auto g = make_character_group(101);
  for (i64 a : {1, 2, 37}) {
    const Character chi(g, a);
    CHECK(chi(101) == Complex(0, 0));
    CHECK(chi(0) == Complex(0, 0));
    for (i64 m = 1; m < 30; ++m) {
      for (i64 n = 1; n < 30; ++n) CHECK(std::abs(chi(m * n) - chi(m) * chi(n)) < 1e-12);
    }
    const Character bar = chi.conj();
    for (i64 n = 1; n < 101; ++n) CHECK(std::abs(bar(n) - std::conj(chi(n))) < 1e-12);
  }
}

TEST_CASE("Gauss sums have modulus sqrt q and the root number has modulus 1") {
  for (i64 q : {5, 7, 101}) {
    const auto g = make_character_group(q);
    for (i64 a = 1; a < q - 1; ++a) {
      const auto data = gauss_sum_and_angle(Character(g, a));
      CHECK(std::abs(data.tau) == doctest::Approx(std::sqrt(static_cast<double>(q))).epsilon(1e-12));
      CHECK(std::abs(data.eps) == doctest::Approx(1).epsilon(1e-12));
      CHECK(data.theta >= 0);
      CHECK(data.theta < 1);
      CHECK(std::abs(unit_phase(data.theta) - data.eps) < 1e-12);
    }
  }
  CHECK_THROWS_AS(gauss_sum_and_angle(Character(make_character_group(7), 0)), PreconditionError);
}

TEST_CASE("quadratic character mod 5 has root number 1") {
  // The even quadratic character of conductor 5 has eps = 1 (real, positive Gauss sum).
  const auto g = make_character_group(5);
  const auto chars = enumerate_even_primitive(g);
  REQUIRE(chars.size() == 1);
  const auto data = gauss_sum_and_angle(chars[0]);
  CHECK(std::abs(data.eps - Complex(1, 0)) < 1e-12);
  CHECK(data.theta == 0.0);
}

TEST_CASE("angle snapping") {
  CHECK(angle_of(Complex(1, -1e-14)) == 0.0);
  CHECK(angle_of(Complex(0, 1)) == doctest::Approx(0.25));
  CHECK(angle_of(Complex(-1, 0)) == doctest::Approx(0.5));
}

TEST_CASE("orthogonality over the even family") {
  for (i64 q : {5, 7, 11, 101}) {
    const auto g = make_character_group(q);
    for (i64 m = 1; m < q; ++m) {
      const auto r = orthogonality_sum(g, m);
      CHECK(std::abs(r.computed - r.predicted) <= 1e-9 * static_cast<double>(q));
    }
    // m = +-1 gives the full family count, everything else -1.
    CHECK(orthogonality_sum(g, 1).predicted == doctest::Approx(static_cast<double>(phi_plus(q))));
    CHECK(orthogonality_sum(g, q - 1).predicted == doctest::Approx(static_cast<double>(phi_plus(q))));
    if (q > 5) CHECK(orthogonality_sum(g, 2).predicted == doctest::Approx(-1));
  }
  CHECK_THROWS_AS(orthogonality_sum(make_character_group(7), 14), DomainError);
}
