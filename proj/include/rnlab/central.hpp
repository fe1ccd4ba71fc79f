#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rnlab/characters.hpp"

namespace rnlab {

/// Shape of the AFE weight V: G(u) = P(u) exp(u^2), gamma-factor ratio for parity delta,
/// and the quadrature used on the vertical line.
struct SmoothingSpec {
  int delta = 0;
  std::vector<double> poly;   ///< P coefficients, ascending powers
  double contour_re = 1.5;    ///< line used for y >= 1
  double contour_left = -1.25;  ///< line used for y < 1 (adds the residue at u = 0)
  double contour_T = 8.0;
  double step = 0.005;

  /// P(u) = 1 - 4u^2 for delta = 0, 1 - 4u^2/9 for delta = 1.
  static SmoothingSpec standard(int delta);

  /// Throws PreconditionError when P(0) != 1, P is not even, or P misses a gamma pole
  /// with |Re u| <= 2.
  void validate() const;

  std::string to_json() const;
  std::uint64_t hash() const;
};

/// Quadrature evaluation of V and y V'(y), plus an immutable Hermite table on a log-y grid.
class SmoothingKernel {
 public:
  explicit SmoothingKernel(SmoothingSpec spec);

  const SmoothingSpec& spec() const { return spec_; }

  /// Direct quadrature. Throws DomainError for y <= 0.
  double direct(double y) const;
  /// Direct quadrature on an explicit line Re u = c (no residue handling; needs c > 0).
  double direct_on_line(double y, double c) const;
  /// y V'(y) by direct quadrature.
  double direct_log_derivative(double y) const;

  /// Table lookup inside the grid, direct quadrature outside.
  double operator()(double y) const;

  double grid_min() const;
  double grid_max() const;

  /// Upper bound for sum_{n > N} n^{-1/2} |V(n/scale)|; returns the smallest N whose
  /// bound is below `target`, or -1 if the grid cannot reach it.
  std::int64_t truncation_point(double scale, double target, double* bound = nullptr) const;

 private:
  struct Line {
    double re = 0;
    std::vector<Complex> value_w;
    std::vector<Complex> deriv_w;
  };
  Line make_line(double re) const;
  static void line_sum(const Line& line, double s, double h, double* value, double* deriv);

  SmoothingSpec spec_;
  Line right_;
  Line left_;
  double s_lo_ = 0;
  double s_step_ = 0;
  std::vector<double> val_;
  std::vector<double> der_;
  std::vector<double> tail_;  ///< int_{s_i}^{top} e^{s/2}|V(e^s)| ds
};

using SmoothingKernelPtr = std::shared_ptr<const SmoothingKernel>;

/// Shared kernel for SmoothingSpec::standard(delta); built once per process.
SmoothingKernelPtr standard_kernel(int delta);

/// V(y) by direct quadrature.
double smoothing_V(double y, const SmoothingSpec& spec);

struct AfeParams {
  double X = 1.0;
  double target_abs_err = 1e-12;
  std::int64_t tail_cut = 0;        ///< fixed truncation point for both sums; 0 = from the tail bound
  std::int64_t max_terms = 500'000'000;
};

/// The two AFE n-sums folded by residue class mod q:
///   first[r]  = sum_{n <= n_first,  n = r mod q} n^{-1/2} V(n/(X sqrt q))
///   second[r] = sum_{n <= n_second, n = r mod q} n^{-1/2} V(n X/sqrt q)
struct FoldedAfe {
  i64 q = 0;
  int delta = 0;
  double X = 1;
  std::int64_t n_first = 0;
  std::int64_t n_second = 0;
  double tail_first = 0;
  double tail_second = 0;
  Eigen::VectorXd first;
  Eigen::VectorXd second;
};

/// Folded sum_{n <= n_max} n^{-1/2} V(n/scale) by residue class mod q.
Eigen::VectorXd fold_weights(i64 q, const SmoothingKernel& kernel, double scale, std::int64_t n_max,
                             unsigned workers = 1);

FoldedAfe fold_afe(i64 q, int delta, const AfeParams& params = {}, unsigned workers = 1);

Complex central_value_afe(const Character& chi, const FoldedAfe& folded);
Complex central_value_afe(const Character& chi, const AfeParams& params = {});

/// zeta(s, a/q) for a = 1..q-1 (slot 0 unused).
struct HurwitzTable {
  i64 q = 0;
  Complex s;
  std::vector<Complex> zeta;
};

HurwitzTable make_hurwitz_table(i64 q, Complex s, unsigned workers = 1);

Complex central_value_hurwitz(const Character& chi, const HurwitzTable& table);
Complex central_value_hurwitz(const Character& chi, Complex s);

/// |Lambda(s, chi) - eps(chi) Lambda(1 - s, conj chi)| from Hurwitz L-values.
double completed_lambda_residual(const Character& chi, Complex s);

/// Records for the given characters, in the given order, L from the folded AFE.
std::vector<CentralRecord> compute_central_records(const CharacterGroupPtr& group,
                                                   const std::vector<Character>& chars,
                                                   const AfeParams& params = {}, unsigned workers = 1);

/// Records for all even primitive characters, ascending a.
std::vector<CentralRecord> compute_central_records(const CharacterGroupPtr& group,
                                                   const AfeParams& params = {}, unsigned workers = 1);

}  // namespace rnlab
