#pragma once

#include <Eigen/Core>
#include <map>
#include <memory>
#include <vector>

#include "rnlab/characters.hpp"

namespace rnlab {

/// Normalized hyper-Kloosterman sums
///   Kl_k(x; q) = q^{-(k-1)/2} sum_{x_1 ... x_k = x mod q} e((x_1 + ... + x_k)/q)
/// on the units mod q. Slot 0 of `values` is unused.
struct KlTable {
  i64 q = 0;
  int k = 0;
  Eigen::VectorXcd values;

  /// Throws DomainError for x = 0 mod q.
  Complex operator()(i64 x) const;
};

/// Direct enumeration over k-1 free coordinates with exact phase counts.
/// Throws DomainError for q | x and ResourceError when q^{k-1} > 1e8.
Complex kl_point(int k, i64 x, const PrimeContext& ctx);

/// All x at once: k-fold cyclic convolution of e(g^j/q) over Z/(q-1) through an FFT.
KlTable kl_all(int k, const CharacterGroup& group);

/// S(a, b; q) = sum over units x of e((a x + b xbar)/q).
Complex classical_kloosterman(i64 a, i64 b, const PrimeContext& ctx);

/// Tables Kl_1..Kl_{k_max} for one modulus, plus the exact family twists built from them.
class KlFamily {
 public:
  KlFamily(CharacterGroupPtr group, int k_max);
  KlFamily(CharacterGroupPtr group, std::vector<KlTable> tables);

  const CharacterGroupPtr& group() const { return group_; }
  int k_max() const { return static_cast<int>(tables_.size()); }
  const KlTable& table(int k) const;

  /// sum over even primitive chi of chi(y) eps(chi)^j, exact in terms of Kl_|j|.
  /// For j >= 1: (q-1)/2 q^{-1/2} [Kl_j(ybar) + Kl_j(-ybar)] - (-1)^j q^{-j/2};
  /// for j <= -1 the same with y in place of ybar; j = 0 is plain orthogonality.
  Complex twist(int j, i64 y) const;

  /// The Kl part of twist(j, y) alone, without the constant term.
  Complex twist_main(int j, i64 y) const;
  /// The constant term of twist(j, y).
  double twist_constant(int j) const;

 private:
  CharacterGroupPtr group_;
  std::vector<KlTable> tables_;
};

struct CorrelationDiagnostics {
  double V2 = 0;           ///< sum_x nu(x)^2
  double W = 0;            ///< sum_x |sum_{h <= H} Kl_k(c(x+h))|^2
  double bound_ratio = 0;  ///< W/(k^2 H q)
  double V2_log_ratio = 0; ///< V2/(log q)^2
};

/// nu(x) = sum_{n1 n2bar = x} (n1 n2)^{-1/2} V(n1/N1) V(n2/N2) for x mod q, with the
/// even-character V. The n-ranges stop where the tail bound drops below 1e-12.
Eigen::VectorXd correlation_nu(const CharacterGroup& group, double N1, double N2);

/// Throws PreconditionError for H > sqrt q, H < 1 or q | c. Terms with c(x+h) = 0 mod q
/// are skipped (Kl_k lives on units).
CorrelationDiagnostics correlation_diagnostics(const CharacterGroup& group, const KlTable& table, i64 c, int H,
                                               double N1, double N2);

struct IncompleteSum {
  Complex value;
  double bound = 0;  ///< T/q + 2 sqrt(q) sum_{a <= q/2} 1/a
};

/// S_m(T) = sum_{n <= T, (n,q)=1} e(m nbar/q). Throws DomainError for q | m.
IncompleteSum incomplete_inverse_sum(i64 m, i64 T, const PrimeContext& ctx);

}  // namespace rnlab
