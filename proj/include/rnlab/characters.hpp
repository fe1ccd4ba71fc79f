#pragma once

#include <Eigen/Core>
#include <complex>
#include <memory>
#include <vector>

#include "rnlab/arith.hpp"

namespace rnlab {

using Complex = std::complex<double>;

/// e(x) = exp(2 pi i x).
Complex unit_phase(double x);

/// The characters of (Z/qZ)^* for prime q together with the two root-of-unity
/// tables every character sum needs: e(j/(q-1)) and e(t/q).
class CharacterGroup {
 public:
  explicit CharacterGroup(PrimeContextPtr ctx);

  const PrimeContext& context() const { return *ctx_; }
  const PrimeContextPtr& context_ptr() const { return ctx_; }
  i64 q() const { return ctx_->q; }

  /// e(j/(q-1)), j = 0..q-2.
  const Eigen::VectorXcd& unit_roots() const { return unit_roots_; }
  /// e(t/q), t = 0..q-1.
  const Eigen::VectorXcd& additive() const { return additive_; }

 private:
  PrimeContextPtr ctx_;
  Eigen::VectorXcd unit_roots_;
  Eigen::VectorXcd additive_;
};

using CharacterGroupPtr = std::shared_ptr<const CharacterGroup>;

CharacterGroupPtr make_character_group(i64 q, i64 max_modulus = kDefaultMaxModulus);

/// chi_a(n) = e(a ind(n)/(q-1)) for (n, q) = 1, 0 otherwise.
class Character {
 public:
  Character(CharacterGroupPtr group, i64 a);

  i64 index() const { return a_; }
  i64 q() const { return group_->q(); }
  const CharacterGroupPtr& group() const { return group_; }

  /// delta = (1 - chi(-1))/2 = a mod 2.
  int parity() const { return static_cast<int>(a_ & 1); }
  bool is_even() const { return parity() == 0; }
  bool is_primitive() const { return a_ != 0; }

  Complex operator()(i64 n) const;

  /// Value at a unit given by its discrete log (no table lookup of ind).
  Complex at_log(i64 j) const;

  Character conj() const;

 private:
  CharacterGroupPtr group_;
  i64 a_;
};

/// chi_a for a even, a != 0, ascending a. Empty for q = 3.
std::vector<Character> enumerate_even_primitive(const CharacterGroupPtr& group);

/// phi^+(q) = (q - 3)/2 for prime q >= 3.
inline i64 phi_plus(i64 q) { return (q - 3) / 2; }

struct GaussData {
  Complex tau;    ///< sum_t chi(t) e(t/q)
  Complex eps;    ///< tau / (i^delta sqrt q)
  double theta;   ///< arg(eps)/(2 pi) in [0,1)
};

/// Direct O(q) summation. Throws PreconditionError for the principal character.
GaussData gauss_sum_and_angle(const Character& chi);

/// Angle in [0,1) of a unit complex number; values within 1e-12 of 1 snap to 0.
double angle_of(Complex z);

struct OrthogonalityResult {
  Complex computed;
  double predicted;
};

/// sum over even primitive chi of chi(m), against the divisor-sum formula for prime q.
OrthogonalityResult orthogonality_sum(const CharacterGroupPtr& group, i64 m);

/// Per-character bundle of root number, its angle, and L(1/2, chi).
struct CentralRecord {
  i64 a = 0;
  Complex eps;
  double theta = 0;
  Complex lval;
};

}  // namespace rnlab
