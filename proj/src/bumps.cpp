#include "rnlab/bumps.hpp"

#include <quadmath.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "rnlab/errors.hpp"
#include "rnlab/fft.hpp"
#include "rnlab/parallel.hpp"

namespace rnlab {

void BumpSpec::validate() const {
  if (!(beta > 0 && beta <= 1)) throw PreconditionError("BumpSpec: beta must lie in (0, 1]");
  if (!(length > 0 && length <= 1)) throw PreconditionError("BumpSpec: arc length must lie in (0, 1]");
  if (!detail::is_power_of_two(samples)) throw PreconditionError("BumpSpec: samples must be a power of two");
}

std::string BumpSpec::id() const {
  std::ostringstream out;
  out.precision(17);
  out << "bump(beta=" << beta << ",a=" << start << ",mu=" << length << ")";
  return out.str();
}

double smooth_step(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  // 1/(1 + h(1-x)/h(x)) with the ratio taken in log space
  return 1.0 / (1.0 + std::exp(1.0 / x - 1.0 / (1.0 - x)));
}

double base_ramp(double x) { return x <= 0.5 ? smooth_step(2 * x) : smooth_step(2 * (1 - x)); }

double plateau(double t, double beta) {
  if (t <= 0 || t >= 1) return 0;
  if (t < beta / 2) return smooth_step(2 * t / beta);
  if (t > 1 - beta / 2) return smooth_step(2 * (1 - t) / beta);
  return 1;
}

double bump_value(const BumpSpec& spec, double x) {
  double d = std::fmod(x - spec.start, 1.0);
  if (d < 0) d += 1;
  if (d >= spec.length) return 0;
  return plateau(d / spec.length, spec.beta);
}

double bump_integral(const BumpSpec& spec) { return spec.length * (1 - spec.beta / 2); }

long double smooth_step_derivative(int J, double x) {
  // The exp and division recurrences cancel by up to 1e11 at J = 20, so the jet runs in
  // quad precision.
  using LD = __float128;
  if (J < 0) throw PreconditionError("smooth_step_derivative: J must be >= 0");
  if (!(x > 0 && x < 1)) return J == 0 ? (x >= 1 ? 1.0L : 0.0L) : 0.0L;
  const LD x0 = x, y0 = 1 - static_cast<LD>(x);
  const LD r = (x0 < y0 ? x0 : y0) / 4;  // jet variable t = r tau keeps coefficients O(4^-n)
  const auto n = static_cast<std::size_t>(J) + 1;
  // s = 1/(1 + exp(C)), C(t) = 1/(x0 + t) - 1/(y0 - t)
  std::vector<LD> c(n), e(n), d(n), s(n);
  LD rx = 1, ry = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const LD sign = i % 2 == 0 ? LD(1) : LD(-1);
    c[i] = sign * rx / x0 - ry / y0;
    rx *= r / x0;
    ry *= r / y0;
  }
  e[0] = expq(c[0]);
  for (std::size_t i = 1; i < n; ++i) {
    LD acc = 0;
    for (std::size_t k = 1; k <= i; ++k) acc += static_cast<LD>(k) * c[k] * e[i - k];
    e[i] = acc / static_cast<LD>(i);
  }
  d = e;
  d[0] += 1;
  s[0] = 1 / d[0];
  for (std::size_t i = 1; i < n; ++i) {
    LD acc = 0;
    for (std::size_t k = 1; k <= i; ++k) acc += d[k] * s[i - k];
    s[i] = -acc / d[0];
  }
  LD scale = 1;
  for (int i = 1; i <= J; ++i) scale *= static_cast<LD>(i) / r;
  return static_cast<long double>(s[static_cast<std::size_t>(J)] * scale);
}

double smooth_step_derivative_norm(int J) {
  if (J < 0) throw PreconditionError("smooth_step_derivative_norm: J must be >= 0");
  if (J <= 1) return 1;
  static std::mutex lock;
  static std::map<int, double> memo;
  std::lock_guard guard(lock);
  if (auto it = memo.find(J); it != memo.end()) return it->second;
  // |s^{(J)}| is symmetric about 1/2, so on [0, 1/2] its integral is the total variation of
  // s^{(J-1)}: sum |s^{(J-1)}(z_{i+1}) - s^{(J-1)}(z_i)| over the sign changes z_i of s^{(J)}.
  // Quadrature across the kinks of |s^{(J)}| loses about 1e-7 at J = 20.
  constexpr int grid = 20000;
  constexpr double lo = 0.001;  // s^{(J-1)}(lo) < exp(-990) J!^2
  const auto d = [J](double x) { return smooth_step_derivative(J, x); };
  const auto prev = [J](double x) { return smooth_step_derivative(J - 1, x); };
  std::vector<double> zeros;
  double a = lo;
  long double fa = d(a);
  for (int i = 1; i <= grid; ++i) {
    const double b = lo + (0.5 - lo) * i / grid;
    const long double fb = d(b);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      double l = a, r = b;
      long double fl = fa;
      for (int it = 0; it < 60 && r - l > 1e-17; ++it) {
        const double m = 0.5 * (l + r);
        const long double fm = d(m);
        if ((fl < 0) == (fm < 0)) {
          l = m;
          fl = fm;
        } else {
          r = m;
        }
      }
      zeros.push_back(0.5 * (l + r));
    }
    a = b;
    fa = fb;
  }
  zeros.push_back(0.5);
  long double total = std::fabs(prev(zeros.front()));
  for (std::size_t i = 1; i < zeros.size(); ++i) total += std::fabs(prev(zeros[i]) - prev(zeros[i - 1]));
  const double out = 2 * static_cast<double>(total);
  memo[J] = out;
  return out;
}

namespace {

Eigen::VectorXcd sample_grid(const BumpSpec& spec) {
  const auto N = static_cast<Eigen::Index>(spec.samples);
  Eigen::VectorXcd f(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    f[j] = bump_value(spec, static_cast<double>(j) / static_cast<double>(N));
  }
  return f;
}

}  // namespace

FourierCoefficients fourier_coefficients(const BumpSpec& spec, int K_max) {
  spec.validate();
  if (K_max < 0) throw PreconditionError("fourier_coefficients: K_max must be >= 0");
  if (spec.samples < 8 * static_cast<std::size_t>(K_max)) {
    throw PreconditionError("fourier_coefficients: need samples >= 8 K_max");
  }
  const auto N = static_cast<Eigen::Index>(spec.samples);
  FftPlan<double> plan(spec.samples);
  const Eigen::VectorXcd F = plan.forward(sample_grid(spec)) / static_cast<double>(N);
  FourierCoefficients out;
  out.K_max = K_max;
  out.c.resize(2 * K_max + 1);
  for (int k = -K_max; k <= K_max; ++k) out.c[k + K_max] = F[k >= 0 ? k : N + k];
  return out;
}

double derivative_norm(const BumpSpec& spec, int J) {
  spec.validate();
  if (J < 0) throw PreconditionError("derivative_norm: J must be >= 0");
  if (J == 0) return bump_integral(spec);
  return 2 * std::pow(2 / (spec.length * spec.beta), J - 1) * smooth_step_derivative_norm(J);
}

double derivative_norm_spectral(const BumpSpec& spec, int J) {
  spec.validate();
  const auto N = static_cast<Eigen::Index>(spec.samples);
  FftPlan<double> plan(spec.samples);
  Eigen::VectorXcd F = plan.forward(sample_grid(spec));
  for (Eigen::Index j = 0; j < N; ++j) {
    const Eigen::Index k = j <= N / 2 ? j : j - N;
    if (2 * j == N) {
      F[j] = 0;
      continue;
    }
    F[j] *= std::pow(std::complex<double>(0, 2 * std::numbers::pi * static_cast<double>(k)), J);
  }
  const Eigen::VectorXcd d = plan.inverse(F);
  return d.cwiseAbs().mean();
}

FamilyCondition family_condition_check(const BumpSpec& spec, double q, double alpha, int J, double threshold) {
  spec.validate();
  if (J < 2) throw PreconditionError("family_condition_check: J must be >= 2");
  const Eigen::VectorXcd f = sample_grid(spec);
  const double integral = f.real().mean();
  if (integral == 0) throw DomainError("family_condition_check: int f = 0 (degenerate family)");
  FamilyCondition out;
  out.cond2_ratio = f.cwiseAbs().mean() / std::abs(integral);
  out.cond1_ratio = derivative_norm(spec, J) / (std::pow(q, 1.0 / 24 - alpha) * std::abs(bump_integral(spec)));
  out.pass = out.cond1_ratio <= threshold && out.cond2_ratio <= threshold;
  return out;
}

}  // namespace rnlab
