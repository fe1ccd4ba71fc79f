#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "rnlab/characters.hpp"

namespace rnlab {

/// mu, phi, tau and smallest prime factor up to a bound, by a linear sieve.
struct ArithmeticTables {
  explicit ArithmeticTables(i64 limit);

  i64 limit() const { return static_cast<i64>(mu.size()) - 1; }
  bool squarefree(i64 n) const { return mu[static_cast<std::size_t>(n)] != 0; }

  std::vector<int> mu;
  std::vector<i64> phi;
  std::vector<int> tau;
  std::vector<i64> spf;
};

inline constexpr i64 kDefaultMaxMollifierLength = 1'000'000;

struct MollifierSet {
  i64 q = 0;
  double alpha = 0;
  i64 M = 0;
  mpq_class G;
  std::vector<mpq_class> x;  ///< x[m] for 0 <= m <= M; x[0] unused
  std::vector<double> x_double;

  std::string to_json(std::size_t max_coeffs = 100) const;
};

/// floor(q^alpha).
i64 mollifier_length(i64 q, double alpha);

/// Throws PreconditionError unless 0 < alpha < 1/2; ResourceError when M exceeds the cap.
MollifierSet build_mollifier(i64 q, double alpha, i64 max_length = kDefaultMaxMollifierLength);
/// Explicit length; M = 0 is a PreconditionError.
MollifierSet build_mollifier_with_length(i64 q, i64 M, double alpha_label = 0,
                                         i64 max_length = kDefaultMaxMollifierLength);

/// sum_{k <= M, (k, q) = 1} mu^2(k)/phi(k), exactly.
mpq_class mollifier_normalizer(i64 q, i64 M);

/// gamma + sum_p log p/(p(p-1)), prime sum to `prime_limit` with the integral tail bound
/// as error bar.
struct ConstantC {
  double value = 0;
  double error_bar = 0;
  i64 prime_limit = 0;
};
ConstantC constant_c(i64 prime_limit = 10'000'000);

struct GAsymptotic {
  mpq_class direct;
  double predicted = 0;
  double residual_ratio = 0;  ///< |direct - predicted| sqrt(M)/theta(q), theta(q) = 2
};
GAsymptotic g_asymptotic_check(i64 q, i64 M);

/// Unitary convolution f_1 *_1 f_2 *_1 ... evaluated at n, straight from the definition:
/// sum over ordered factorizations n = d_1 ... d_r with pairwise coprime d_i.
/// Spec names: "mu/phi", "mu^2/phi", "mu*tau/phi"; each is supported on (n, q) = 1.
mpq_class unitary_convolution(const std::vector<std::string>& specs, i64 n, i64 q);

/// Single multiplicative function from a spec name, exact.
mpq_class multiplicative_spec(const std::string& spec, i64 n, i64 q);

struct APartialSum {
  double sum = 0;
  double ratio_to_sqrtM = 0;
};
/// sum_{n <= M} a(n), a multiplicative on squarefree n with a(p) = (sqrt p + 3)/(p - 1).
APartialSum a_partial_sum(i64 M);

/// M(chi) = sum_{m <= M} x_m chi(m)/sqrt(m). Throws PreconditionError on modulus mismatch.
Complex mollifier_value(const MollifierSet& set, const Character& chi);

}  // namespace rnlab
