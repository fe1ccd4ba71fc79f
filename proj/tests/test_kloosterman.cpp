#include "doctest.h"

#include <chrono>
#include <cmath>
#include <random>

#include "rnlab/errors.hpp"
#include "rnlab/kloosterman.hpp"
#include "rnlab/moments.hpp"

using namespace rnlab;

namespace {

// Brute-force values at 30 digits from an independent enumeration.
struct KlOracle {
  int k;
  i64 x, q;
  double re, im;
};
constexpr KlOracle kKl[] = {
    {2, 1, 5, 0.17082039324993691, 0},
    {3, 2, 7, 0.64285714285714286, -0.56694670951384084},
    {4, 3, 11, 0.27915827005392072, 0},
    {2, 5, 13, -0.84035078118804832, 0},
};

}  // namespace

TEST_CASE("Kl_k oracle values, both routes") {
  for (const auto& o : kKl) {
    const auto g = make_character_group(o.q);
    const Complex expected(o.re, o.im);
    CAPTURE(o.k);
    CAPTURE(o.q);
    CHECK(std::abs(kl_point(o.k, o.x, g->context()) - expected) < 1e-13);
    CHECK(std::abs(kl_all(o.k, *g)(o.x) - expected) < 1e-13);
  }
}

TEST_CASE("classical Kloosterman oracle values") {
  CHECK(std::abs(classical_kloosterman(1, 1, *build_context(5)) -
                 Complex(0.38196601125010515, 0)) < 1e-13);
  CHECK(std::abs(classical_kloosterman(2, 3, *build_context(7)) - Complex(1.1099162641747424, 0)) < 1e-13);
}

TEST_CASE("kl_all matches direct enumeration for every x") {
  for (i64 q : {5, 7, 11, 31}) {
    const auto g = make_character_group(q);
    for (int k = 1; k <= 4; ++k) {
      const KlTable table = kl_all(k, *g);
      for (i64 x = 1; x < q; ++x) CHECK(std::abs(table(x) - kl_point(k, x, g->context())) < 1e-9);
    }
  }
}

TEST_CASE("Deligne bound and Kl_2 symmetry") {
  for (i64 q : {13, 101, 211}) {
    const auto g = make_character_group(q);
    for (int k = 1; k <= 6; ++k) {
      const KlTable table = kl_all(k, *g);
      CHECK(table.values.tail(q - 1).cwiseAbs().maxCoeff() <= k + 1e-9);
    }
    // Kl_2 is real and equals S(1, x; q)/sqrt q.
    const KlTable kl2 = kl_all(2, *g);
    for (i64 x = 1; x < q; x += 7) {
      CHECK(std::abs(kl2(x).imag()) < 1e-12);
      CHECK(std::abs(kl2(x) - classical_kloosterman(1, x, g->context()) / std::sqrt(static_cast<double>(q))) < 1e-12);
    }
  }
}

TEST_CASE("Weil bound on random triples") {
  std::mt19937_64 rng(7);
  for (i64 q : {101, 1009, 10007}) {
    const auto ctx = build_context(q);
    for (int i = 0; i < 50; ++i) {
      const i64 a = 1 + static_cast<i64>(rng() % static_cast<u64>(q - 1));
      const i64 b = 1 + static_cast<i64>(rng() % static_cast<u64>(q - 1));
      CHECK(std::abs(classical_kloosterman(a, b, *ctx)) <= 2 * std::sqrt(static_cast<double>(q)) + 1e-9);
    }
  }
}

TEST_CASE("errors") {
  const auto g = make_character_group(7);
  CHECK_THROWS_AS(kl_point(2, 14, g->context()), DomainError);
  CHECK_THROWS_AS(kl_point(0, 1, g->context()), PreconditionError);
  CHECK_THROWS_AS(kl_point(6, 1, *build_context(1009)), ResourceError);
  CHECK_THROWS_AS(kl_all(2, *g)(7), DomainError);
  const KlFamily fam(g, 2);
  CHECK_THROWS_AS(fam.table(3), PreconditionError);
  CHECK_THROWS_AS(correlation_diagnostics(*make_character_group(101), kl_all(2, *make_character_group(101)), 1, 11,
                                          10, 10),
                  PreconditionError);
  CHECK_THROWS_AS(incomplete_inverse_sum(7, 10, g->context()), DomainError);
}

TEST_CASE("family twists are exact") {
  for (i64 q : {11, 101}) {
    const auto g = make_character_group(q);
    const KlFamily kl(g, 4);
    const auto chars = enumerate_even_primitive(g);
    std::vector<Complex> eps;
    for (const auto& chi : chars) eps.push_back(gauss_sum_and_angle(chi).eps);
    for (int j = -4; j <= 4; ++j) {
      for (i64 y = 1; y < q; y += 3) {
        Complex direct(0);
        for (std::size_t i = 0; i < chars.size(); ++i) direct += chars[i](y) * root_power(eps[i], j);
        CAPTURE(j);
        CAPTURE(y);
        CHECK(std::abs(direct - kl.twist(j, y)) < 1e-10);
      }
    }
  }
}

TEST_CASE("correlation diagnostics at q = 101") {
  const auto g = make_character_group(101);
  const KlTable table = kl_all(3, *g);
  const auto d = correlation_diagnostics(*g, table, 1, 10, std::sqrt(101.0), std::sqrt(101.0));
  CHECK(d.V2 > 0);
  CHECK(d.W > 0);
  CHECK(d.bound_ratio < 1);
  CHECK(d.V2_log_ratio == doctest::Approx(d.V2 / std::pow(std::log(101.0), 2)));
}

TEST_CASE("nu sums to the product of the folded weights") {
  // sum_x nu(x) over units = (sum_n1 w(n1))(sum_n2 w(n2)) restricted to units.
  const auto g = make_character_group(101);
  const Eigen::VectorXd nu = correlation_nu(*g, 5.0, 7.0);
  const auto kernel = standard_kernel(0);
  const auto w1 = fold_weights(101, *kernel, 5.0, kernel->truncation_point(5.0, 1e-12));
  const auto w2 = fold_weights(101, *kernel, 7.0, kernel->truncation_point(7.0, 1e-12));
  const double expected = w1.tail(100).sum() * w2.tail(100).sum();
  CHECK(nu.tail(100).sum() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("incomplete inverse sums obey the Polya-Vinogradov-type bound") {
  const auto ctx = build_context(1009);
  for (i64 T : {10, 500, 3000}) {
    const auto s = incomplete_inverse_sum(3, T, *ctx);
    CHECK(std::abs(s.value) <= s.bound);
  }
  // A complete period sums to the Ramanujan sum c_q(m) = -1.
  CHECK(std::abs(incomplete_inverse_sum(3, 1009, *ctx).value - Complex(-1, 0)) < 1e-10);
}

TEST_CASE("kl_all performance at q near 1e5") {
  const auto g = make_character_group(100003);
  const auto t0 = std::chrono::steady_clock::now();
  const KlTable table = kl_all(4, *g);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(seconds < 10);
  CHECK(table.values.tail(100002).cwiseAbs().maxCoeff() <= 4 + 1e-9);
}
