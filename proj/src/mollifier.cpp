#include "rnlab/mollifier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "json.hpp"
#include "rnlab/errors.hpp"
#include "rnlab/parallel.hpp"
#include "rnlab/special.hpp"

namespace rnlab {

namespace {

struct PrimePower {
  i64 p;
  int e;
  i64 value;
};

std::vector<PrimePower> factorize(i64 n) {
  std::vector<PrimePower> out;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.e;
      pp.value *= p;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

// sum_{l <= limit, (l, coprime_to) = 1} mu^2(l)/phi(l) over one common denominator.
mpq_class mu2_phi_sum(const ArithmeticTables& t, i64 limit, i64 coprime_to) {
  mpz_class den = 1;
  std::vector<i64> terms;
  for (i64 l = 1; l <= limit; ++l) {
    if (!t.squarefree(l) || std::gcd(l, coprime_to) != 1) continue;
    terms.push_back(t.phi[static_cast<std::size_t>(l)]);
    mpz_class ph(static_cast<unsigned long>(terms.back()));
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), ph.get_mpz_t());
  }
  mpz_class num = 0;
  for (i64 ph : terms) num += den / static_cast<unsigned long>(ph);
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

}  // namespace

ArithmeticTables::ArithmeticTables(i64 limit) {
  if (limit < 1) limit = 1;
  const auto n = static_cast<std::size_t>(limit) + 1;
  mu.assign(n, 0);
  phi.assign(n, 0);
  tau.assign(n, 0);
  spf.assign(n, 0);
  std::vector<int> spf_exp(n, 0);  // exponent of spf in n
  std::vector<i64> primes;
  mu[1] = 1;
  phi[1] = 1;
  tau[1] = 1;
  for (std::size_t i = 2; i < n; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<i64>(i);
      primes.push_back(static_cast<i64>(i));
      mu[i] = -1;
      phi[i] = static_cast<i64>(i) - 1;
      tau[i] = 2;
      spf_exp[i] = 1;
    }
    for (i64 p : primes) {
      const auto ip = static_cast<std::size_t>(p) * i;
      if (p > spf[i] || ip >= n) break;
      spf[ip] = p;
      if (p == spf[i]) {
        mu[ip] = 0;
        phi[ip] = phi[i] * p;
        spf_exp[ip] = spf_exp[i] + 1;
        tau[ip] = tau[i] / (spf_exp[i] + 1) * (spf_exp[ip] + 1);
      } else {
        mu[ip] = -mu[i];
        phi[ip] = phi[i] * (p - 1);
        spf_exp[ip] = 1;
        tau[ip] = tau[i] * 2;
      }
    }
  }
}

std::string MollifierSet::to_json(std::size_t max_coeffs) const {
  nlohmann::json j;
  j["q"] = q;
  j["alpha"] = alpha;
  j["M"] = M;
  j["G"] = {{"num", G.get_num().get_str()}, {"den", G.get_den().get_str()}};
  nlohmann::json coeffs = nlohmann::json::array();
  for (i64 m = 1; m <= M && static_cast<std::size_t>(m) <= max_coeffs; ++m) {
    const auto& v = x[static_cast<std::size_t>(m)];
    coeffs.push_back({{"m", m}, {"num", v.get_num().get_str()}, {"den", v.get_den().get_str()}});
  }
  j["coefficients"] = coeffs;
  return j.dump();
}

i64 mollifier_length(i64 q, double alpha) {
  const double raw = std::pow(static_cast<double>(q), alpha);
  return static_cast<i64>(std::floor(raw + 1e-12));
}

MollifierSet build_mollifier(i64 q, double alpha, i64 max_length) {
  if (!(alpha > 0 && alpha < 0.5)) throw PreconditionError("build_mollifier: need 0 < alpha < 1/2");
  return build_mollifier_with_length(q, mollifier_length(q, alpha), alpha, max_length);
}

MollifierSet build_mollifier_with_length(i64 q, i64 M, double alpha_label, i64 max_length) {
  if (!is_prime(static_cast<u64>(q))) throw NotPrimeError("build_mollifier: q must be prime");
  if (M < 1) throw PreconditionError("build_mollifier: mollifier length M must be >= 1");
  if (M > max_length) throw ResourceError("build_mollifier: M exceeds the configured cap");
  const ArithmeticTables t(M);
  MollifierSet set;
  set.q = q;
  set.alpha = alpha_label;
  set.M = M;
  set.G = mu2_phi_sum(t, M, q);
  set.x.assign(static_cast<std::size_t>(M) + 1, mpq_class(0));
  set.x_double.assign(static_cast<std::size_t>(M) + 1, 0.0);
  for (i64 m = 1; m <= M; ++m) {
    if (!t.squarefree(m) || m % q == 0) continue;
    const auto mi = static_cast<std::size_t>(m);
    mpq_class head(t.mu[mi] * m, t.phi[mi]);
    head.canonicalize();
    mpq_class value = head * mu2_phi_sum(t, M / m, m * q) / set.G;
    set.x_double[mi] = value.get_d();
    set.x[mi] = std::move(value);
  }
  return set;
}

mpq_class mollifier_normalizer(i64 q, i64 M) {
  if (M < 1) throw PreconditionError("mollifier_normalizer: M must be >= 1");
  return mu2_phi_sum(ArithmeticTables(M), M, q);
}

ConstantC constant_c(i64 prime_limit) {
  static std::mutex lock;
  static std::map<i64, ConstantC> memo;
  std::lock_guard guard(lock);
  if (auto it = memo.find(prime_limit); it != memo.end()) return it->second;
  std::vector<bool> composite(static_cast<std::size_t>(prime_limit) + 1, false);
  CompensatedSum<double> acc;
  for (i64 p = 2; p <= prime_limit; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    for (i64 m = p * p; m <= prime_limit; m += p) composite[static_cast<std::size_t>(m)] = true;
    const double pd = static_cast<double>(p);
    acc.add(std::log(pd) / (pd * (pd - 1)));
  }
  ConstantC out;
  out.prime_limit = prime_limit;
  out.value = kEulerGamma + acc.value();
  // sum_{n > N} log n/(n(n-1)) <= int_N^inf log t/(t-1)^2 dt ~ (log N + 1)/N
  const double N = static_cast<double>(prime_limit);
  out.error_bar = (std::log(N) + 1) / (N - 1);
  memo[prime_limit] = out;
  return out;
}

GAsymptotic g_asymptotic_check(i64 q, i64 M) {
  if (M < 1) throw PreconditionError("g_asymptotic_check: M must be >= 1");
  GAsymptotic out;
  out.direct = mollifier_normalizer(q, M);
  const double qd = static_cast<double>(q);
  const double c = constant_c().value;
  out.predicted = (qd - 1) / qd * (std::log(static_cast<double>(M)) + c + std::log(qd) / qd);
  const double theta = 2.0;
  out.residual_ratio = std::abs(out.direct.get_d() - out.predicted) * std::sqrt(static_cast<double>(M)) / theta;
  return out;
}

mpq_class multiplicative_spec(const std::string& spec, i64 n, i64 q) {
  if (spec != "mu/phi" && spec != "mu^2/phi" && spec != "mu*tau/phi") {
    throw PreconditionError("unsupported multiplicative spec: " + spec);
  }
  if (n < 1) throw PreconditionError("multiplicative_spec: n must be >= 1");
  if (std::gcd(n, q) != 1) return 0;
  int mu = 1;
  i64 phi = 1;
  long tau = 1;
  for (const auto& pp : factorize(n)) {
    if (pp.e > 1) mu = 0;
    mu = -mu;
    phi *= pp.value / pp.p * (pp.p - 1);
    tau *= pp.e + 1;
  }
  long numerator = 0;
  if (spec == "mu/phi") numerator = mu;
  if (spec == "mu^2/phi") numerator = mu * mu;
  if (spec == "mu*tau/phi") numerator = mu * tau;
  mpq_class out(numerator, phi);
  out.canonicalize();
  return out;
}

mpq_class unitary_convolution(const std::vector<std::string>& specs, i64 n, i64 q) {
  if (specs.empty()) throw PreconditionError("unitary_convolution: need at least one factor");
  if (n < 1) throw PreconditionError("unitary_convolution: n must be >= 1");
  for (const auto& s : specs) multiplicative_spec(s, 1, q);  // rejects unknown names up front
  if (specs.size() == 1) return multiplicative_spec(specs.front(), n, q);
  const std::vector<std::string> rest(specs.begin() + 1, specs.end());
  // Unitary divisors d of n are the products of subsets of its prime-power blocks.
  const auto blocks = factorize(n);
  mpq_class total = 0;
  for (unsigned mask = 0; mask < (1U << blocks.size()); ++mask) {
    i64 d = 1;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (mask & (1U << i)) d *= blocks[i].value;
    }
    const mpq_class head = multiplicative_spec(specs.front(), d, q);
    if (head == 0) continue;
    total += head * unitary_convolution(rest, n / d, q);
  }
  return total;
}

APartialSum a_partial_sum(i64 M) {
  if (M < 1) throw PreconditionError("a_partial_sum: M must be >= 1");
  const ArithmeticTables t(M);
  std::vector<double> a(static_cast<std::size_t>(M) + 1, 0.0);
  a[1] = 1;
  CompensatedSum<double> acc;
  acc.add(1.0);
  for (i64 n = 2; n <= M; ++n) {
    const auto ni = static_cast<std::size_t>(n);
    if (!t.squarefree(n)) continue;
    const i64 p = t.spf[ni];
    const double pd = static_cast<double>(p);
    a[ni] = a[static_cast<std::size_t>(n / p)] * (std::sqrt(pd) + 3) / (pd - 1);
    acc.add(a[ni]);
  }
  APartialSum out;
  out.sum = acc.value();
  out.ratio_to_sqrtM = out.sum / std::sqrt(static_cast<double>(M));
  return out;
}

Complex mollifier_value(const MollifierSet& set, const Character& chi) {
  if (chi.q() != set.q) throw PreconditionError("mollifier_value: modulus mismatch");
  CompensatedSum<Complex> acc;
  for (i64 m = 1; m <= set.M; ++m) {
    const double xm = set.x_double[static_cast<std::size_t>(m)];
    if (xm == 0) continue;
    acc.add(xm * chi(m) / std::sqrt(static_cast<double>(m)));
  }
  return acc.value();
}

}  // namespace rnlab
