#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>

#include "rnlab/errors.hpp"

namespace rnlab {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// psi(1/4) = -gamma - pi/2 - 3 log 2.
inline double digamma_quarter() {
  return -kEulerGamma - std::numbers::pi / 2 - 3 * std::numbers::ln2;
}

namespace detail {

// B_{2j} for j = 1..12.
inline constexpr std::array<double, 12> kBernoulliEven = {
    1.0 / 6,          -1.0 / 30,          1.0 / 42,        -1.0 / 30,
    5.0 / 66,         -691.0 / 2730,      7.0 / 6,         -3617.0 / 510,
    43867.0 / 798,    -174611.0 / 330,    854513.0 / 138,  -236364091.0 / 2730};

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

}  // namespace detail

/// log Gamma(z) for complex z, valid up to a multiple of 2*pi*i in the imaginary part
/// (exp of the result is Gamma(z)). Shift to Re z >= 15, Stirling through B_16,
/// reflection for Re z < 1/2. Throws DomainError at the poles z = 0, -1, -2, ...
template <typename Real>
std::complex<Real> log_gamma(std::complex<Real> z) {
  using C = std::complex<Real>;
  const Real pi = std::numbers::pi_v<Real>;
  if (z.imag() == 0 && z.real() <= 0 && z.real() == std::round(z.real())) {
    throw DomainError("log_gamma: pole at non-positive integer");
  }
  if (z.real() < Real(0.5)) {
    return std::log(C(pi)) - std::log(std::sin(pi * z)) - log_gamma(C(1) - z);
  }
  C shift(0);
  while (z.real() < 15) {
    shift += std::log(z);
    z += Real(1);
  }
  const C inv = Real(1) / z;
  const C inv2 = inv * inv;
  C series(0);
  C power = inv;
  for (int j = 1; j <= 8; ++j) {
    series += Real(detail::kBernoulliEven[static_cast<std::size_t>(j - 1)]) / Real((2 * j) * (2 * j - 1)) * power;
    power *= inv2;
  }
  return (z - Real(0.5)) * std::log(z) - z + Real(0.5) * std::log(Real(2) * pi) + series - shift;
}

template <typename Real>
std::complex<Real> gamma(std::complex<Real> z) {
  return std::exp(log_gamma(z));
}

/// Hurwitz zeta(s, x), 0 < x <= 1, by Euler-Maclaurin with the sum shifted to start
/// at N = 25 and Bernoulli corrections through B_24. S is double or std::complex<double>.
/// Accurate to ~1e-14 relative for |s| <= 3; s = 1 is a pole.
template <typename S>
S hurwitz_zeta(S s, double x) {
  constexpr int N = 25;
  if (s == S(1)) throw DomainError("hurwitz_zeta: pole at s = 1");
  auto power = [&](double base, S exponent) -> S {
    if constexpr (detail::is_complex<S>::value) {
      return std::exp(-exponent * std::log(base));
    } else {
      return std::pow(base, -exponent);
    }
  };
  S sum(0);
  for (int n = 0; n < N; ++n) sum += power(n + x, s);
  const double a = N + x;
  const S a_neg_s = power(a, s);
  sum += a_neg_s * a / (s - S(1));
  sum += a_neg_s / S(2);
  // term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * a^{-s-2j+1}
  S rising = s;            // s(s+1)...(s+2j-2)
  S a_pow = a_neg_s / a;   // a^{-s-2j+1}
  double factorial = 2;    // (2j)!
  for (int j = 1; j <= 12; ++j) {
    sum += S(detail::kBernoulliEven[static_cast<std::size_t>(j - 1)] / factorial) * rising * a_pow;
    rising *= (s + S(2 * j - 1)) * (s + S(2 * j));
    a_pow /= a * a;
    factorial *= (2 * j + 1) * (2 * j + 2);
  }
  return sum;
}

}  // namespace rnlab
