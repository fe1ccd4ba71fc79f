#pragma once

// Complex DFT of arbitrary length: iterative radix-2 for powers of two,
// Bluestein's chirp-z reduction otherwise. Twiddles are generated from exact
// integer phase indices so accuracy does not drift with length.

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace rnlab {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1U;
  return m;
}

// e(-num/den) as a complex number, num reduced mod den first.
template <typename Scalar>
std::complex<Scalar> unit_root(std::size_t num, std::size_t den) {
  num %= den;
  const Scalar angle = -2 * std::numbers::pi_v<Scalar> * static_cast<Scalar>(num) / static_cast<Scalar>(den);
  return {std::cos(angle), std::sin(angle)};
}

template <typename Scalar>
class Radix2 {
 public:
  explicit Radix2(std::size_t n) : n_(n), twiddle_(n / 2), rev_(n) {
    for (std::size_t j = 0; j < n / 2; ++j) twiddle_[j] = unit_root<Scalar>(j, n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
      rev_[i] = r;
    }
  }

  // In-place unnormalized transform; inverse uses conjugate twiddles.
  void run(std::complex<Scalar>* data, bool inverse) const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (i < rev_[i]) std::swap(data[i], data[rev_[i]]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1U) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          std::complex<Scalar> w = twiddle_[j * stride];
          if (inverse) w = std::conj(w);
          const std::complex<Scalar> t = w * data[start + j + half];
          data[start + j + half] = data[start + j] - t;
          data[start + j] += t;
        }
      }
    }
  }

 private:
  std::size_t n_;
  std::vector<std::complex<Scalar>> twiddle_;
  std::vector<std::size_t> rev_;
};

}  // namespace detail

/// Reusable DFT plan for a fixed length.
///
/// forward: X[k] = sum_j x[j] e(-jk/n); inverse: x[j] = (1/n) sum_k X[k] e(jk/n).
template <typename Scalar>
class FftPlan {
 public:
  using Vector = ComplexVector<Scalar>;

  explicit FftPlan(std::size_t n)
      : n_(n), pow2_(detail::is_power_of_two(n)), inner_(pow2_ ? n : detail::next_power_of_two(2 * n - 1)) {
    if (!pow2_) {
      // Chirp c[j] = e(-j^2 / 2n); j^2 is reduced mod 2n in integers.
      chirp_.resize(n_);
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t j2 = static_cast<std::size_t>((static_cast<unsigned __int128>(j) * j) % (2 * n_));
        chirp_[j] = detail::unit_root<Scalar>(j2, 2 * n_);
      }
      const std::size_t m = inner_.size();
      kernel_.assign(m, std::complex<Scalar>(0));
      kernel_[0] = std::conj(chirp_[0]);
      for (std::size_t j = 1; j < n_; ++j) {
        kernel_[j] = std::conj(chirp_[j]);
        kernel_[m - j] = std::conj(chirp_[j]);
      }
      inner_.plan.run(kernel_.data(), false);
    }
  }

  std::size_t size() const { return n_; }

  Vector forward(const Vector& x) const { return transform(x, false); }

  Vector inverse(const Vector& x) const {
    Vector y = transform(x, true);
    y /= static_cast<Scalar>(n_);
    return y;
  }

 private:
  struct Inner {
    explicit Inner(std::size_t m) : m_(m), plan(m) {}
    std::size_t size() const { return m_; }
    std::size_t m_;
    detail::Radix2<Scalar> plan;
  };

  Vector transform(const Vector& x, bool inverse) const {
    Vector y = x;
    if (n_ <= 1) return y;
    if (pow2_) {
      inner_.plan.run(y.data(), inverse);
      return y;
    }
    // Inverse DFT = conj(forward(conj(x))).
    if (inverse) y = y.conjugate();
    const std::size_t m = inner_.size();
    std::vector<std::complex<Scalar>> a(m, std::complex<Scalar>(0));
    for (std::size_t j = 0; j < n_; ++j) a[j] = y[static_cast<Eigen::Index>(j)] * chirp_[j];
    inner_.plan.run(a.data(), false);
    for (std::size_t j = 0; j < m; ++j) a[j] *= kernel_[j];
    inner_.plan.run(a.data(), true);
    const Scalar scale = Scalar(1) / static_cast<Scalar>(m);
    for (std::size_t k = 0; k < n_; ++k) {
      y[static_cast<Eigen::Index>(k)] = a[k] * scale * chirp_[k];
    }
    if (inverse) y = y.conjugate();
    return y;
  }

  std::size_t n_;
  bool pow2_;
  Inner inner_;
  std::vector<std::complex<Scalar>> chirp_;
  std::vector<std::complex<Scalar>> kernel_;
};

/// Cyclic convolution (a * b)[j] = sum_i a[i] b[j - i mod n].
template <typename Scalar>
ComplexVector<Scalar> cyclic_convolution(const ComplexVector<Scalar>& a, const ComplexVector<Scalar>& b) {
  FftPlan<Scalar> plan(static_cast<std::size_t>(a.size()));
  ComplexVector<Scalar> fa = plan.forward(a);
  fa.array() *= plan.forward(b).array();
  return plan.inverse(fa);
}

}  // namespace rnlab
