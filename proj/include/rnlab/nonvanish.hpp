#pragma once

#include <complex>
#include <vector>

#include "rnlab/characters.hpp"

namespace rnlab {

/// Half-open arc [start, start + length) of R/Z; wraps past 1.
struct ArcInterval {
  double start = 0;
  double length = 1;

  bool contains(double theta) const;
  /// Arc of length C q^{-eta} centred at `center`.
  static ArcInterval shrinking(double center, double C, double q, double eta);
};

struct NonvanishReport {
  i64 q = 0;
  ArcInterval interval;
  double epsilon = 0;
  double threshold = 0;  ///< epsilon mu (log q)^{-1/2}
  i64 count = 0;
  i64 family_in_window = 0;
  double proportion = 0;  ///< count/(mu phi^+(q))
  double c_eta_bound = 0;
};

/// Throws DomainError for an empty arc. `eta` only fills c_eta_bound.
NonvanishReport nonvanishing_count(i64 q, const std::vector<CentralRecord>& records, const ArcInterval& interval,
                                   double epsilon, double eta = 0);

/// Count at an explicit absolute threshold (for monotonicity checks).
i64 count_above(const std::vector<CentralRecord>& records, const ArcInterval& interval, double threshold);

/// c(eta) = 1/25 - 96 eta/5. Throws DomainError outside [0, 1/480).
double c_eta(double eta);

struct Equidistribution {
  double ks_statistic = 0;
  std::complex<double> mean_vector;
  std::vector<i64> histogram;  ///< counts of theta in [j/bins, (j+1)/bins)
};

/// Throws DomainError for an empty family, PreconditionError for bins < 2.
Equidistribution angle_equidistribution(const std::vector<CentralRecord>& records, int bins);

}  // namespace rnlab
