#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace rnlab {

/// f_{beta,I}: the plateau bump on the arc I = [a, a + mu) of R/Z whose two edges are
/// smooth ramps, each a beta/2 fraction of the arc.
struct BumpSpec {
  double beta = 0.1;
  double start = 0.0;   ///< a
  double length = 0.5;  ///< mu in (0, 1]
  std::size_t samples = 1U << 16;

  /// Throws PreconditionError for beta outside (0, 1], length outside (0, 1] or a
  /// sample count that is not a power of two.
  void validate() const;
  std::string id() const;
};

/// Smooth step s(x) = h(x)/(h(x) + h(1 - x)), h(x) = exp(-1/x) for x > 0, else 0.
double smooth_step(double x);
/// Base ramp g(x) = s(2x) on [0, 1/2], g(1 - x) = g(x).
double base_ramp(double x);
/// g_beta on [0, 1]: g(t/beta) below beta/2, 1 in the middle, g((1-t)/beta) above 1 - beta/2.
double plateau(double t, double beta);

double bump_value(const BumpSpec& spec, double x);

/// int_0^1 f = mu (1 - beta/2), since the two ramps integrate to beta/2 of the arc.
double bump_integral(const BumpSpec& spec);

/// s^{(J)}(x) for x in (0, 1), from a Taylor jet in long double.
long double smooth_step_derivative(int J, double x);

/// ||s^{(J)}||_{L^1[0,1]} as the total variation of s^{(J-1)} between sign changes of s^{(J)}.
double smooth_step_derivative_norm(int J);

/// Fourier coefficients c_k for |k| <= K_max, stored at index k + K_max.
struct FourierCoefficients {
  int K_max = 0;
  Eigen::VectorXcd c;

  std::complex<double> operator[](int k) const { return c[k + K_max]; }
};

/// DFT of the sample grid. Throws PreconditionError when samples < 8 K_max.
FourierCoefficients fourier_coefficients(const BumpSpec& spec, int K_max);

/// ||f^{(J)}||_1 = 2 (2/(mu beta))^{J-1} ||s^{(J)}||_1 for J >= 1 (J = 0 gives int f).
double derivative_norm(const BumpSpec& spec, int J);

/// ||f^{(J)}||_1 from the full DFT of the sample grid (multiply by (2 pi i k)^J and
/// transform back). Only meaningful while the coefficients stay above rounding.
double derivative_norm_spectral(const BumpSpec& spec, int J);

struct FamilyCondition {
  double cond1_ratio = 0;  ///< ||f^{(J)}||_1/(q^{1/24 - alpha} |int f|)
  double cond2_ratio = 0;  ///< ||f||_1/|int f|
  bool pass = false;
};

/// Throws DomainError when int f = 0 and PreconditionError for J < 2.
FamilyCondition family_condition_check(const BumpSpec& spec, double q, double alpha, int J,
                                       double threshold = 10.0);

}  // namespace rnlab
