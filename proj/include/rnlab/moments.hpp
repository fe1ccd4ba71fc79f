#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "rnlab/bumps.hpp"
#include "rnlab/central.hpp"
#include "rnlab/kloosterman.hpp"
#include "rnlab/mollifier.hpp"

namespace rnlab {

/// The even primitive family mod q with its central records, computed once and shared by
/// every moment. Records are in ascending character index.
struct CentralFamily {
  CharacterGroupPtr group;
  AfeParams params;
  std::vector<CentralRecord> records;

  static CentralFamily build(const CharacterGroupPtr& group, const AfeParams& params = {}, unsigned workers = 1);

  i64 q() const { return group->q(); }
  /// chi_a(m) for the character of record i.
  Complex chi(std::size_t i, i64 m) const;
};

/// eps^k for |eps| = 1 by binary powering (negative k uses conj(eps)); k = 0 gives exactly 1.
Complex root_power(Complex eps, int k);

enum class MomentKind { First, Second, MollifiedFirst, MollifiedSecond, SmoothedFirst, SmoothedSecond };

const char* to_string(MomentKind kind);

struct MomentReport {
  i64 q = 0;
  MomentKind kind = MomentKind::First;
  i64 m1 = 1;
  i64 m2 = 1;
  int k = 0;
  double alpha = 0;
  double theta_exp = 0;
  std::string bump_id;
  Complex computed;
  Complex predicted_main;
  Complex residual;  ///< computed - predicted_main
  double normalizer = 0;
  std::string envelope_formula;
  double envelope = 0;
  double envelope_ratio = 0;  ///< |residual|/envelope (0 when no envelope applies)
  /// Second evaluation path, when the moment has one.
  Complex alternate;
  std::string alternate_path;
};

/// A(m, k) = sum over the family of chi(m) eps^k L(1/2, chi). Throws DomainError for q | m.
MomentReport first_moment(const CentralFamily& family, i64 m, int k, unsigned workers = 1);

/// B(m1, m2, k) = sum of chi(m1) conj(chi)(m2) eps^k |L|^2. Throws DomainError for q | m1 m2.
MomentReport second_moment(const CentralFamily& family, i64 m1, i64 m2, int k, unsigned workers = 1);

/// log L = (1/2) log(q/pi) + (1/2) psi(1/4) + gamma + log q/(q - 1), for prime q.
double second_moment_log_length(i64 q);

/// T(y) = sum over the family of chi(y) h(chi) for every unit y, through one DFT over the
/// index group. Slot 0 is unused.
Eigen::VectorXcd family_twist_table(const CentralFamily& family, const std::vector<Complex>& h);

struct AfeDecomposition {
  i64 q = 0;
  i64 m1 = 1;
  i64 m2 = 1;
  int k = 0;
  double theta_exp = 0;
  double X = 1;
  std::int64_t n_first = 0;
  std::int64_t n_second = 0;
  Complex B1, B2, B3, B4;
  Complex recombined;  ///< B1 + B2 + B3 + B4
  /// Contribution of the constant terms of the family twists, which the four Kl sums leave out.
  Complex dropped;
  Complex direct;      ///< B(m1, m2, k) from the records
  double discrepancy = 0;  ///< |recombined - direct|
  double envelope = 0;     ///< k (X + 1/X) sqrt(q)
  double envelope_ratio = 0;
};

/// Splits B(m1, m2, k) into the four Kloosterman sums of the asymmetric AFE with
/// X = q^theta_exp. Needs Kl tables for orders |k - 1|, |k|, |k + 1| (those >= 1) and
/// throws PreconditionError naming the missing order otherwise. tail_cut > 0 fixes the
/// n-range of both folds.
AfeDecomposition afe_decomposition(const KlFamily& kl, const CentralFamily& family, i64 m1, i64 m2, int k,
                                   double theta_exp = 1.0 / 12, std::int64_t tail_cut = 0, unsigned workers = 1);

/// M(chi) for every record.
std::vector<Complex> mollifier_values(const CentralFamily& family, const MollifierSet& set, unsigned workers = 1);

/// C(k): direct sum of eps^k M(chi) L over the family, cross-checked against
/// sum_m x_m m^{-1/2} A(m, k). Throws ConsistencyError when the paths differ by more than
/// 1e-6 relative.
MomentReport mollified_first(const CentralFamily& family, const MollifierSet& set, int k, unsigned workers = 1);

/// D(k): direct sum of eps^k |M(chi) L|^2, cross-checked against
/// sum_{m1, m2} x_m1 x_m2 (m1 m2)^{-1/2} B(m1, m2, k).
MomentReport mollified_second(const CentralFamily& family, const MollifierSet& set, int k, unsigned workers = 1);

/// A weight f on R/Z together with its Fourier coefficients.
struct AngleWeight {
  std::string id;
  std::function<double(double)> value;
  FourierCoefficients coeffs;
  double integral = 0;

  static AngleWeight constant_one();
  static AngleWeight from_bump(const BumpSpec& spec, int K_max);
};

struct SmoothedMoments {
  MomentReport first;
  MomentReport second;
};

/// Direct sums of f(theta) M L and f(theta) |M L|^2 against the Fourier path
/// sum_k c_k C(k), sum_k c_k D(k). Throws ConvergenceError when the |k| = K_max terms
/// exceed 1e-8 of the total and ConsistencyError when the paths differ by more than 1e-6.
SmoothedMoments smoothed_moments(const CentralFamily& family, const MollifierSet& set, const AngleWeight& weight,
                                 unsigned workers = 1);

}  // namespace rnlab
