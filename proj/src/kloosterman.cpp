#include "rnlab/kloosterman.hpp"

#include <cmath>
#include <functional>

#include "rnlab/central.hpp"
#include "rnlab/errors.hpp"
#include "rnlab/fft.hpp"
#include "rnlab/parallel.hpp"

namespace rnlab {

Complex KlTable::operator()(i64 x) const {
  const i64 r = mod_reduce(x, q);
  if (r == 0) throw DomainError("Kl_k is defined on units only");
  return values[static_cast<Eigen::Index>(r)];
}

Complex kl_point(int k, i64 x, const PrimeContext& ctx) {
  const i64 q = ctx.q;
  if (k < 1) throw PreconditionError("kl_point: k must be >= 1");
  x = mod_reduce(x, q);
  if (x == 0) throw DomainError("kl_point: q divides x");
  if (std::pow(static_cast<double>(q), k - 1) > 1e8) throw ResourceError("kl_point: q^(k-1) exceeds 1e8");
  // counts[t] = #{(x_1..x_k) : prod = x, sum = t}
  std::vector<i64> counts(static_cast<std::size_t>(q), 0);
  std::function<void(int, i64, i64)> walk = [&](int depth, i64 prod, i64 sum) {
    if (depth == k - 1) {
      const i64 last = static_cast<i64>(mul_mod(static_cast<u64>(x), static_cast<u64>(ctx.inverse(prod)), q));
      ++counts[static_cast<std::size_t>((sum + last) % q)];
      return;
    }
    for (i64 t = 1; t < q; ++t) {
      walk(depth + 1, static_cast<i64>(mul_mod(static_cast<u64>(prod), static_cast<u64>(t), q)), (sum + t) % q);
    }
  };
  walk(0, 1, 0);
  CompensatedSum<Complex> acc;
  for (i64 t = 0; t < q; ++t) {
    if (counts[static_cast<std::size_t>(t)] != 0) {
      acc.add(static_cast<double>(counts[static_cast<std::size_t>(t)]) * unit_phase(static_cast<double>(t) / q));
    }
  }
  return acc.value() * std::pow(static_cast<double>(q), -0.5 * (k - 1));
}

KlTable kl_all(int k, const CharacterGroup& group) {
  if (k < 1) throw PreconditionError("kl_all: k must be >= 1");
  const auto& ctx = group.context();
  const i64 q = ctx.q;
  const auto n = static_cast<Eigen::Index>(q - 1);
  KlTable out;
  out.q = q;
  out.k = k;
  out.values = Eigen::VectorXcd::Zero(q);
  if (k == 1) {
    out.values.tail(q - 1) = group.additive().tail(q - 1);
    return out;
  }
  Eigen::VectorXcd f(n);
  for (Eigen::Index j = 0; j < n; ++j) f[j] = group.additive()[static_cast<Eigen::Index>(ctx.pow[static_cast<std::size_t>(j)])];
  FftPlan<double> plan(static_cast<std::size_t>(n));
  // Dividing by sqrt q first keeps the transform entries at modulus 1 (or 1/sqrt q at index 0).
  const Eigen::VectorXcd spectrum = plan.forward(f) / std::sqrt(static_cast<double>(q));
  Eigen::VectorXcd power = spectrum;
  for (int i = 1; i < k; ++i) power = power.cwiseProduct(spectrum);
  const Eigen::VectorXcd conv = plan.inverse(power) * std::sqrt(static_cast<double>(q));
  for (Eigen::Index j = 0; j < n; ++j) out.values[static_cast<Eigen::Index>(ctx.pow[static_cast<std::size_t>(j)])] = conv[j];
  return out;
}

Complex classical_kloosterman(i64 a, i64 b, const PrimeContext& ctx) {
  const i64 q = ctx.q;
  a = mod_reduce(a, q);
  b = mod_reduce(b, q);
  CompensatedSum<Complex> acc;
  for (i64 x = 1; x < q; ++x) {
    const i64 t = (static_cast<i64>(mul_mod(static_cast<u64>(a), static_cast<u64>(x), q)) +
                   static_cast<i64>(mul_mod(static_cast<u64>(b), static_cast<u64>(ctx.inverse(x)), q))) % q;
    acc.add(unit_phase(static_cast<double>(t) / static_cast<double>(q)));
  }
  return acc.value();
}

KlFamily::KlFamily(CharacterGroupPtr group, int k_max) : group_(std::move(group)) {
  if (k_max < 1) throw PreconditionError("KlFamily: k_max must be >= 1");
  for (int k = 1; k <= k_max; ++k) tables_.push_back(kl_all(k, *group_));
}

KlFamily::KlFamily(CharacterGroupPtr group, std::vector<KlTable> tables)
    : group_(std::move(group)), tables_(std::move(tables)) {
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    if (tables_[i].q != group_->q() || tables_[i].k != static_cast<int>(i + 1)) {
      throw PreconditionError("KlFamily: tables must be Kl_1..Kl_kmax for this modulus");
    }
  }
}

const KlTable& KlFamily::table(int k) const {
  if (k < 1 || k > k_max()) throw PreconditionError("KlFamily: no table for k = " + std::to_string(k));
  return tables_[static_cast<std::size_t>(k - 1)];
}

Complex KlFamily::twist_main(int j, i64 y) const {
  const auto& ctx = group_->context();
  const i64 q = ctx.q;
  const i64 r = mod_reduce(y, q);
  if (r == 0) throw DomainError("family twist: q divides y");
  const double half = static_cast<double>(q - 1) / 2;
  if (j == 0) return {half * ((r == 1 ? 1.0 : 0.0) + (r == q - 1 ? 1.0 : 0.0)), 0.0};
  const i64 arg = j > 0 ? ctx.inverse(r) : r;
  const KlTable& kl = table(std::abs(j));
  return half / std::sqrt(static_cast<double>(q)) * (kl(arg) + kl(q - arg));
}

double KlFamily::twist_constant(int j) const {
  if (j == 0) return -1.0;
  const int a = std::abs(j);
  const double sign = a % 2 == 0 ? -1.0 : 1.0;
  return sign * std::pow(static_cast<double>(group_->q()), -0.5 * a);
}

Complex KlFamily::twist(int j, i64 y) const { return twist_main(j, y) + twist_constant(j); }

Eigen::VectorXd correlation_nu(const CharacterGroup& group, double N1, double N2) {
  const auto& ctx = group.context();
  const i64 q = ctx.q;
  const auto kernel = standard_kernel(0);
  auto fold = [&](double scale) {
    const std::int64_t n_max = kernel->truncation_point(scale, 1e-12);
    if (n_max < 0) throw ResourceError("correlation_nu: V tail not resolvable");
    return fold_weights(q, *kernel, scale, n_max);
  };
  const Eigen::VectorXd f1 = fold(N1);
  const Eigen::VectorXd f2 = fold(N2);
  const auto n = static_cast<Eigen::Index>(q - 1);
  Eigen::VectorXcd a(n), b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(ctx.pow[static_cast<std::size_t>(i)]);
    a[i] = f1[r];
    b[i] = f2[r];
  }
  // nu(g^j) = sum_i a[i + j] b[i], a cyclic correlation over the index group.
  FftPlan<double> plan(static_cast<std::size_t>(n));
  const Eigen::VectorXcd corr = plan.inverse(plan.forward(a).cwiseProduct(plan.forward(b).conjugate()));
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(q);
  for (Eigen::Index j = 0; j < n; ++j) nu[static_cast<Eigen::Index>(ctx.pow[static_cast<std::size_t>(j)])] = corr[j].real();
  nu[0] = f1[0] * b.real().sum();
  return nu;
}

CorrelationDiagnostics correlation_diagnostics(const CharacterGroup& group, const KlTable& table, i64 c, int H,
                                               double N1, double N2) {
  const i64 q = group.q();
  if (table.q != q) throw PreconditionError("correlation_diagnostics: table modulus mismatch");
  if (H < 1 || static_cast<double>(H) > std::sqrt(static_cast<double>(q))) {
    throw PreconditionError("correlation_diagnostics: need 1 <= H <= sqrt(q)");
  }
  c = mod_reduce(c, q);
  if (c == 0) throw PreconditionError("correlation_diagnostics: c must be a unit");
  CorrelationDiagnostics out;
  const Eigen::VectorXd nu = correlation_nu(group, N1, N2);
  CompensatedSum<double> v2;
  for (Eigen::Index x = 0; x < q; ++x) v2.add(nu[x] * nu[x]);
  out.V2 = v2.value();
  out.W = blocked_sum<double>(static_cast<std::size_t>(q), [&](std::size_t x) {
    Complex inner(0);
    for (int h = 1; h <= H; ++h) {
      const i64 arg = static_cast<i64>(mul_mod(static_cast<u64>(c), static_cast<u64>((static_cast<i64>(x) + h) % q), q));
      if (arg != 0) inner += table.values[static_cast<Eigen::Index>(arg)];
    }
    return std::norm(inner);
  });
  out.bound_ratio = out.W / (static_cast<double>(table.k) * table.k * H * static_cast<double>(q));
  const double log_q = std::log(static_cast<double>(q));
  out.V2_log_ratio = out.V2 / (log_q * log_q);
  return out;
}

IncompleteSum incomplete_inverse_sum(i64 m, i64 T, const PrimeContext& ctx) {
  const i64 q = ctx.q;
  m = mod_reduce(m, q);
  if (m == 0) throw DomainError("incomplete_inverse_sum: q divides m");
  if (T < 1) throw PreconditionError("incomplete_inverse_sum: T must be >= 1");
  CompensatedSum<Complex> acc;
  for (i64 n = 1; n <= T; ++n) {
    if (n % q == 0) continue;
    const i64 t = static_cast<i64>(mul_mod(static_cast<u64>(m), static_cast<u64>(ctx.inverse(n)), q));
    acc.add(unit_phase(static_cast<double>(t) / static_cast<double>(q)));
  }
  double harmonic = 0;
  for (i64 a = 1; a <= q / 2; ++a) harmonic += 1.0 / static_cast<double>(a);
  IncompleteSum out;
  out.value = acc.value();
  out.bound = static_cast<double>(T) / static_cast<double>(q) + 2 * std::sqrt(static_cast<double>(q)) * harmonic;
  return out;
}

}  // namespace rnlab
