#include "doctest.h"

#include <cmath>
#include <numbers>

#include "rnlab/bumps.hpp"
#include "rnlab/errors.hpp"

using namespace rnlab;

namespace {

// s^{(J)}(x) from 40-digit numerical differentiation.
struct JetOracle {
  int J;
  double x;
  double value;
};
constexpr JetOracle kJets[] = {
    {1, 0.05, 2.36877495693269446e-6},  {1, 0.3, 1.48330019179960442},   {1, 0.5, 2},
    {2, 0.05, 8.55659173707528541e-4},  {2, 0.3, 6.75626989306004768},   {5, 0.05, 16790.7551520013482},
    {5, 0.3, 11134.2695150629289},      {5, 0.5, -3328},                 {10, 0.05, 154137740918151.235},
    {10, 0.3, 33733018064.282177},     {10, 0.12, 40818568359935.6855}, {20, 0.05, 7.03821517020962681e38},
    {20, 0.3, -4.33693445251766172e26}, {20, 0.12, 1.24653516590688412e34},
};

}  // namespace

TEST_CASE("ramp shape") {
  CHECK(smooth_step(0) == 0);
  CHECK(smooth_step(1) == 1);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  CHECK(base_ramp(0) == 0);
  CHECK(base_ramp(0.5) == 1);
  CHECK(base_ramp(0.2) == doctest::Approx(base_ramp(0.8)));
  for (double x = 0.01; x < 1; x += 0.01) CHECK(smooth_step(x) + smooth_step(1 - x) == doctest::Approx(1));
}

TEST_CASE("jet derivatives against the oracle") {
  for (const auto& o : kJets) {
    CAPTURE(o.J);
    CAPTURE(o.x);
    CHECK(static_cast<double>(smooth_step_derivative(o.J, o.x)) == doctest::Approx(o.value).epsilon(1e-12));
  }
  CHECK(smooth_step_derivative(3, 0.0) == 0);
  CHECK_THROWS_AS(smooth_step_derivative(-1, 0.5), PreconditionError);
}

TEST_CASE("derivative norms of the smooth step") {
  // ||s'||_1 = 1 (monotone from 0 to 1); ||s''||_1 = 2 s'(1/2) = 4 (single inflection).
  CHECK(smooth_step_derivative_norm(1) == doctest::Approx(1).epsilon(1e-12));
  CHECK(smooth_step_derivative_norm(2) == doctest::Approx(4).epsilon(1e-12));
  CHECK(smooth_step_derivative_norm(3) == doctest::Approx(39.3641692073246).epsilon(1e-11));
  CHECK(smooth_step_derivative_norm(4) == doctest::Approx(633.111417174299).epsilon(1e-11));
  CHECK(smooth_step_derivative_norm(20) == doctest::Approx(5.07670256847193e39).epsilon(1e-10));
}

TEST_CASE("bump values") {
  const BumpSpec spec;  // beta 0.1 on [0, 1/2)
  CHECK(bump_value(spec, 0.25) == 1);
  CHECK(bump_value(spec, 0.75) == 0);
  CHECK(bump_value(spec, 0.5) == 0);
  CHECK(bump_value(spec, 0.0) == 0);
  BumpSpec wrap;
  wrap.start = 0.9;
  wrap.length = 0.3;
  CHECK(bump_value(wrap, 0.05) == 1);
  CHECK(bump_value(wrap, 0.5) == 0);
  CHECK(bump_integral(spec) == doctest::Approx(0.5 * 0.95));
}

TEST_CASE("minorant and L1 bound on the grid") {
  for (double beta : {0.1, 0.5, 1.0}) {
    BumpSpec spec;
    spec.beta = beta;
    spec.start = 0.3;
    spec.length = 0.4;
    const std::size_t N = spec.samples;
    double l1 = 0;
    for (std::size_t j = 0; j < N; ++j) {
      const double x = static_cast<double>(j) / static_cast<double>(N);
      const double f = bump_value(spec, x);
      const double d = std::fmod(x - spec.start + 1, 1.0);
      const double indicator = d < spec.length ? 1 : 0;
      REQUIRE(f >= 0);
      REQUIRE(f <= indicator);
      l1 += f / static_cast<double>(N);
    }
    CHECK(l1 >= (1 - beta) * spec.length - 1e-6);
    CHECK(l1 == doctest::Approx(bump_integral(spec)).epsilon(1e-9));
  }
}

TEST_CASE("Fourier coefficients") {
  const BumpSpec spec;
  const FourierCoefficients c = fourier_coefficients(spec, 1024);
  CHECK(c[0].real() == doctest::Approx(bump_integral(spec)).epsilon(1e-12));
  CHECK(std::abs(c[0].imag()) < 1e-15);
  // f is real: c_{-k} = conj c_k.
  for (int k : {1, 7, 300}) CHECK(std::abs(c[-k] - std::conj(c[k])) < 1e-15);
  // Integration by parts: |c_k| (2 pi |k|)^J <= ||f^{(J)}||_1.
  const double norm20 = derivative_norm(spec, 20);
  for (int k : {10, 20, 40}) {
    CHECK(std::abs(c[k]) * std::pow(2 * std::numbers::pi * k, 20) / norm20 <= 1);
  }
  CHECK(std::abs(c[1000]) < 1e-15);
  BumpSpec small;
  small.samples = 1024;
  CHECK_THROWS_AS(fourier_coefficients(small, 200), PreconditionError);
}

TEST_CASE("derivative norms: scaling law and spectral check") {
  BumpSpec spec;
  spec.beta = 0.5;
  spec.length = 0.5;
  CHECK(derivative_norm(spec, 1) == doctest::Approx(2).epsilon(1e-12));
  CHECK(derivative_norm(spec, 2) == doctest::Approx(64).epsilon(1e-12));
  CHECK(derivative_norm(spec, 0) == doctest::Approx(bump_integral(spec)));
  for (int J : {1, 2}) CHECK(derivative_norm_spectral(spec, J) == doctest::Approx(derivative_norm(spec, J)).epsilon(1e-6));

  // ||f'||_1 against finite differences on the sample grid.
  const std::size_t N = spec.samples;
  double fd = 0;
  for (std::size_t j = 0; j < N; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(N);
    fd += std::abs(bump_value(spec, x + 1.0 / static_cast<double>(N)) - bump_value(spec, x));
  }
  CHECK(derivative_norm_spectral(spec, 1) == doctest::Approx(fd).epsilon(0.01));

  // ||f^{(J)}||_1 (beta mu)^{J-1} stays bounded as the arc shrinks.
  for (int J : {2, 5, 20}) {
    double first = 0;
    for (double mu : {0.5, 0.1, 0.01, 0.001}) {
      BumpSpec s;
      s.length = mu;
      const double scaled = derivative_norm(s, J) * std::pow(s.beta * mu, J - 1);
      if (first == 0) first = scaled;
      CHECK(scaled == doctest::Approx(first).epsilon(1e-12));
    }
  }
}

TEST_CASE("family conditions") {
  const BumpSpec spec;
  const FamilyCondition fixed = family_condition_check(spec, 1e300, 0.01, 2);
  CHECK(fixed.pass);
  CHECK(fixed.cond2_ratio == doctest::Approx(1).epsilon(1e-12));
  const FamilyCondition small_q = family_condition_check(spec, 1009, 0.01, 20);
  CHECK_FALSE(small_q.pass);
  CHECK_THROWS_AS(family_condition_check(spec, 1009, 0.01, 1), PreconditionError);

  // Shrinking windows mu = q^{-eta} with eta < 1/(24 J) and alpha < 1/24 - J eta pass
  // once q is large enough.
  const int J = 2;
  const double eta = 1.0 / (48 * J);
  const double alpha = 0.5 * (1.0 / 24 - J * eta);
  BumpSpec shrinking;
  const double q = 1e200;
  shrinking.length = std::pow(q, -eta);
  CHECK(family_condition_check(shrinking, q, alpha, J).pass);
}

TEST_CASE("spec validation") {
  BumpSpec spec;
  spec.beta = 0;
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
  spec.beta = 0.1;
  spec.samples = 1000;
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
}
