#include "rnlab/moments.hpp"

#include <cmath>
#include <numeric>

#include "rnlab/errors.hpp"
#include "rnlab/fft.hpp"
#include "rnlab/parallel.hpp"
#include "rnlab/special.hpp"

namespace rnlab {

namespace {

double log_q(i64 q) { return std::log(static_cast<double>(q)); }

void check_unit(i64 m, i64 q, const char* what) {
  if (mod_reduce(m, q) == 0) throw DomainError(std::string(what) + ": q divides the twist argument");
}

void check_same_modulus(const CentralFamily& family, const MollifierSet& set) {
  if (set.q != family.q()) throw PreconditionError("mollifier built for a different modulus");
}

void finish(MomentReport& r) {
  r.residual = r.computed - r.predicted_main;
  r.envelope_ratio = r.envelope > 0 ? std::abs(r.residual) / r.envelope : 0.0;
}

void cross_check(const MomentReport& r, double tol) {
  const double a = std::abs(r.computed);
  const double b = std::abs(r.alternate);
  if (std::abs(r.computed - r.alternate) > tol * std::max({a, b, 1.0})) {
    throw ConsistencyError(std::string(to_string(r.kind)) + ": evaluation paths disagree (" +
                           std::to_string(std::abs(r.computed - r.alternate)) + ")");
  }
}

// alpha used in the predictions: the label if set, else log M/log q.
double effective_alpha(const MollifierSet& set) {
  if (set.alpha > 0) return set.alpha;
  return std::log(static_cast<double>(set.M)) / log_q(set.q);
}

// Residue fold of x_m m^{-1/2} in index coordinates: out[j] = sum over m = g^j.
Eigen::VectorXcd folded_coefficients(const MollifierSet& set, const PrimeContext& ctx) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ctx.q - 1);
  std::vector<CompensatedSum<double>> acc(static_cast<std::size_t>(ctx.q - 1));
  for (i64 m = 1; m <= set.M; ++m) {
    const double xm = set.x_double[static_cast<std::size_t>(m)];
    if (xm == 0) continue;
    acc[static_cast<std::size_t>(ctx.dlog(m))].add(xm / std::sqrt(static_cast<double>(m)));
  }
  for (std::size_t j = 0; j < acc.size(); ++j) out[static_cast<Eigen::Index>(j)] = acc[j].value();
  return out;
}

// Residue fold of AFE weights (indexed by residue) moved to index coordinates.
Eigen::VectorXcd to_index_coords(const Eigen::VectorXd& by_residue, const PrimeContext& ctx) {
  Eigen::VectorXcd out(ctx.q - 1);
  for (i64 j = 0; j < ctx.q - 1; ++j) out[j] = by_residue[ctx.pow[static_cast<std::size_t>(j)]];
  return out;
}

// v[i] -> v[-i mod n].
Eigen::VectorXcd reflect(const Eigen::VectorXcd& v) {
  const Eigen::Index n = v.size();
  Eigen::VectorXcd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = v[(n - i) % n];
  return out;
}

}  // namespace

const char* to_string(MomentKind kind) {
  switch (kind) {
    case MomentKind::First: return "first";
    case MomentKind::Second: return "second";
    case MomentKind::MollifiedFirst: return "mollified-first";
    case MomentKind::MollifiedSecond: return "mollified-second";
    case MomentKind::SmoothedFirst: return "smoothed-first";
    case MomentKind::SmoothedSecond: return "smoothed-second";
  }
  return "unknown";
}

CentralFamily CentralFamily::build(const CharacterGroupPtr& group, const AfeParams& params, unsigned workers) {
  CentralFamily family;
  family.group = group;
  family.params = params;
  family.records = compute_central_records(group, params, workers);
  return family;
}

Complex CentralFamily::chi(std::size_t i, i64 m) const {
  const auto& ctx = group->context();
  const i64 r = mod_reduce(m, ctx.q);
  if (r == 0) return 0;
  const i64 phase = (records[i].a * ctx.dlog(r)) % (ctx.q - 1);
  return group->unit_roots()[phase];
}

Complex root_power(Complex eps, int k) {
  if (k < 0) {
    eps = std::conj(eps);
    k = -k;
  }
  Complex out(1.0, 0.0);
  Complex base = eps;
  while (k > 0) {
    if (k & 1) out *= base;
    base *= base;
    k >>= 1;
  }
  return out;
}

MomentReport first_moment(const CentralFamily& family, i64 m, int k, unsigned workers) {
  const i64 q = family.q();
  check_unit(m, q, "first_moment");
  MomentReport r;
  r.q = q;
  r.kind = MomentKind::First;
  r.m1 = m;
  r.k = k;
  // Records do not depend on X, so this only labels the AFE balance the bounds assume.
  r.theta_exp = k == 0 ? 0.5 : (k == -1 ? -0.5 : 0.0);
  r.computed = blocked_sum<Complex>(family.records.size(), [&](std::size_t i) {
    const auto& rec = family.records[i];
    return family.chi(i, m) * root_power(rec.eps, k) * rec.lval;
  }, workers);
  const double phi_p = static_cast<double>(phi_plus(q));
  const double qd = static_cast<double>(q);
  r.normalizer = phi_p;
  if (k == 0) {
    r.predicted_main = m == 1 ? phi_p : 0.0;
    r.envelope_formula = "tau(q) sqrt(m q)";
    r.envelope = 2 * std::sqrt(static_cast<double>(m) * qd);
  } else if (k == -1) {
    r.predicted_main = phi_p / std::sqrt(static_cast<double>(m));
    r.envelope_formula = "tau(q) sqrt(q)";
    r.envelope = 2 * std::sqrt(qd);
  } else {
    r.predicted_main = 0.0;
    r.envelope_formula = "|k|^omega(q) tau(q) q^(3/4)";
    r.envelope = std::abs(k) * 2 * std::pow(qd, 0.75);
  }
  finish(r);
  return r;
}

double second_moment_log_length(i64 q) {
  const double qd = static_cast<double>(q);
  return 0.5 * std::log(qd / std::numbers::pi) + 0.5 * digamma_quarter() + kEulerGamma + std::log(qd) / (qd - 1);
}

MomentReport second_moment(const CentralFamily& family, i64 m1, i64 m2, int k, unsigned workers) {
  const i64 q = family.q();
  check_unit(m1, q, "second_moment");
  check_unit(m2, q, "second_moment");
  const auto& ctx = family.group->context();
  const i64 y = static_cast<i64>(mul_mod(static_cast<u64>(mod_reduce(m1, q)), static_cast<u64>(ctx.inverse(m2)), q));
  MomentReport r;
  r.q = q;
  r.kind = MomentKind::Second;
  r.m1 = m1;
  r.m2 = m2;
  r.k = k;
  r.computed = blocked_sum<Complex>(family.records.size(), [&](std::size_t i) {
    const auto& rec = family.records[i];
    return family.chi(i, y) * root_power(rec.eps, k) * std::norm(rec.lval);
  }, workers);
  const double phi_p = static_cast<double>(phi_plus(q));
  const double qd = static_cast<double>(q);
  r.normalizer = phi_p;
  if (k == 0) {
    const double mm = static_cast<double>(m1) * static_cast<double>(m2);
    r.predicted_main = phi_p * (qd - 1) / (qd * std::sqrt(mm)) * (2 * second_moment_log_length(q) - std::log(mm));
    r.envelope_formula = "unspecified";
  } else if (std::abs(k) == 1) {
    r.envelope_formula = "q";
    r.envelope = qd;
  } else {
    r.envelope_formula = "|k|^18 q^(23/24)";
    r.envelope = std::pow(std::abs(k), 18.0) * std::pow(qd, 23.0 / 24);
  }
  finish(r);
  return r;
}

Eigen::VectorXcd family_twist_table(const CentralFamily& family, const std::vector<Complex>& h) {
  const auto& ctx = family.group->context();
  const i64 n = ctx.q - 1;
  if (h.size() != family.records.size()) throw PreconditionError("family_twist_table: one value per record");
  // T(g^j) = sum_a h_a e(a j/(q-1)) = n * inverse DFT of the a-indexed vector.
  Eigen::VectorXcd by_index = Eigen::VectorXcd::Zero(n);
  for (std::size_t i = 0; i < h.size(); ++i) by_index[family.records[i].a] += h[i];
  FftPlan<double> plan(static_cast<std::size_t>(n));
  const Eigen::VectorXcd t = plan.inverse(by_index) * static_cast<double>(n);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ctx.q);
  for (i64 j = 0; j < n; ++j) out[ctx.pow[static_cast<std::size_t>(j)]] = t[j];
  return out;
}

AfeDecomposition afe_decomposition(const KlFamily& kl, const CentralFamily& family, i64 m1, i64 m2, int k,
                                   double theta_exp, std::int64_t tail_cut, unsigned workers) {
  const i64 q = family.q();
  if (kl.group()->q() != q) throw PreconditionError("afe_decomposition: Kl tables built for another modulus");
  if (k == 0) throw PreconditionError("afe_decomposition: need |k| >= 1");
  check_unit(m1, q, "afe_decomposition");
  check_unit(m2, q, "afe_decomposition");
  for (int j : {k - 1, k, k + 1}) {
    if (j != 0 && std::abs(j) > kl.k_max()) {
      throw PreconditionError("afe_decomposition: precompute Kl tables up to order " + std::to_string(std::abs(k) + 1));
    }
  }
  const auto& ctx = family.group->context();
  AfeDecomposition out;
  out.q = q;
  out.m1 = m1;
  out.m2 = m2;
  out.k = k;
  out.theta_exp = theta_exp;
  out.X = std::pow(static_cast<double>(q), theta_exp);

  AfeParams params = family.params;
  params.X = out.X;
  params.tail_cut = tail_cut;
  const FoldedAfe folded = fold_afe(q, 0, params, workers);
  out.n_first = folded.n_first;
  out.n_second = folded.n_second;
  // a: weights V(n X/sqrt q) (non-inverted side of B1), b: V(n/(X sqrt q)).
  const Eigen::VectorXcd a = to_index_coords(folded.second, ctx);
  const Eigen::VectorXcd b = to_index_coords(folded.first, ctx);
  const Eigen::VectorXcd b_inv = reflect(b);
  const i64 shift = static_cast<i64>(mul_mod(static_cast<u64>(mod_reduce(m1, q)), static_cast<u64>(ctx.inverse(m2)), q));

  struct Piece {
    int j;
    const Eigen::VectorXcd* w1;
    const Eigen::VectorXcd* w2;
    Complex* target;
  };
  // x = n1 n2, n1 n2bar, n1bar n2, n1bar n2bar in turn.
  const Piece pieces[4] = {{k - 1, &a, &a, &out.B1},
                           {k, &a, &b_inv, &out.B2},
                           {k, &b_inv, &a, &out.B3},
                           {k + 1, &b_inv, &b_inv, &out.B4}};
  const double total_a = a.real().sum();
  const double total_b = b.real().sum();
  const double totals[4] = {total_a * total_a, total_a * total_b, total_b * total_a, total_b * total_b};
  CompensatedSum<Complex> dropped;
  for (int p = 0; p < 4; ++p) {
    const Piece& piece = pieces[p];
    const Eigen::VectorXcd nu = cyclic_convolution<double>(*piece.w1, *piece.w2);
    *piece.target = blocked_sum<Complex>(static_cast<std::size_t>(q - 1), [&](std::size_t t) {
      const i64 y = static_cast<i64>(mul_mod(static_cast<u64>(shift), static_cast<u64>(ctx.pow[t]), q));
      return nu[static_cast<Eigen::Index>(t)].real() * kl.twist_main(piece.j, y);
    }, workers);
    dropped.add(kl.twist_constant(piece.j) * totals[p]);
  }
  out.recombined = out.B1 + out.B2 + out.B3 + out.B4;
  out.dropped = dropped.value();
  out.direct = second_moment(family, m1, m2, k, workers).computed;
  out.discrepancy = std::abs(out.recombined - out.direct);
  out.envelope = std::abs(k) * (out.X + 1 / out.X) * std::sqrt(static_cast<double>(q));
  out.envelope_ratio = out.discrepancy / out.envelope;
  return out;
}

std::vector<Complex> mollifier_values(const CentralFamily& family, const MollifierSet& set, unsigned workers) {
  check_same_modulus(family, set);
  std::vector<Complex> out(family.records.size());
  parallel_for(out.size(), workers, [&](std::size_t i) {
    CompensatedSum<Complex> acc;
    for (i64 m = 1; m <= set.M; ++m) {
      const double xm = set.x_double[static_cast<std::size_t>(m)];
      if (xm == 0) continue;
      acc.add(xm / std::sqrt(static_cast<double>(m)) * family.chi(i, m));
    }
    out[i] = acc.value();
  });
  return out;
}

namespace {

// Direct character-side sums shared by the mollified and smoothed moments, so that f = 1
// reproduces the mollified values bit for bit.
Complex mollified_first_direct(const CentralFamily& family, const std::vector<Complex>& mol, int k,
                               const std::function<double(double)>* weight, unsigned workers) {
  return blocked_sum<Complex>(family.records.size(), [&](std::size_t i) {
    const auto& rec = family.records[i];
    const Complex term = root_power(rec.eps, k) * (mol[i] * rec.lval);
    return weight ? (*weight)(rec.theta) * term : term;
  }, workers);
}

Complex mollified_second_direct(const CentralFamily& family, const std::vector<Complex>& mol, int k,
                                const std::function<double(double)>* weight, unsigned workers) {
  return blocked_sum<Complex>(family.records.size(), [&](std::size_t i) {
    const auto& rec = family.records[i];
    const Complex term = root_power(rec.eps, k) * std::norm(mol[i] * rec.lval);
    return weight ? (*weight)(rec.theta) * term : term;
  }, workers);
}

void fill_mollified_first_prediction(MomentReport& r, const MollifierSet& set) {
  const double qd = static_cast<double>(set.q);
  const double phi_p = static_cast<double>(phi_plus(set.q));
  const double alpha = effective_alpha(set);
  r.normalizer = phi_p;
  if (r.k == 0) {
    r.predicted_main = phi_p;
    r.envelope_formula = "tau(q) M sqrt(q)";
    r.envelope = 2 * static_cast<double>(set.M) * std::sqrt(qd);
  } else if (r.k == -1) {
    r.envelope_formula = "q/(alpha log q)";
    r.envelope = alpha > 0 ? qd / (alpha * std::log(qd)) : 0.0;
  } else {
    r.envelope_formula = "|k| tau(q) q^(3/4) sqrt(M)";
    r.envelope = std::abs(r.k) * 2 * std::pow(qd, 0.75) * std::sqrt(static_cast<double>(set.M));
  }
}

void fill_mollified_second_prediction(MomentReport& r, const MollifierSet& set) {
  const double qd = static_cast<double>(set.q);
  const double lq = std::log(qd);
  const double phi_p = static_cast<double>(phi_plus(set.q));
  const double alpha = effective_alpha(set);
  r.normalizer = phi_p;
  if (alpha <= 0) {
    r.envelope_formula = "alpha = 0: no prediction";
    return;
  }
  if (r.k == 0) {
    r.predicted_main = (1 + 1 / alpha) * phi_p;
    r.envelope_formula = "phi+(q) log log q/(alpha log q)";
    r.envelope = phi_p * std::log(lq) / (alpha * lq);
  } else if (std::abs(r.k) == 1) {
    r.envelope_formula = "phi+(q)/(alpha log q)";
    r.envelope = phi_p / (alpha * lq);
  } else {
    r.envelope_formula = "|k|^18 q^(23/24 + alpha)";
    r.envelope = std::pow(std::abs(r.k), 18.0) * std::pow(qd, 23.0 / 24 + alpha);
  }
}

// sum_m x_m m^{-1/2} T(m) with T(y) = sum chi(y) h(chi).
Complex coefficient_path_first(const CentralFamily& family, const MollifierSet& set, const std::vector<Complex>& h) {
  const Eigen::VectorXcd table = family_twist_table(family, h);
  CompensatedSum<Complex> acc;
  for (i64 m = 1; m <= set.M; ++m) {
    const double xm = set.x_double[static_cast<std::size_t>(m)];
    if (xm == 0) continue;
    acc.add(xm / std::sqrt(static_cast<double>(m)) * table[mod_reduce(m, set.q)]);
  }
  return acc.value();
}

// sum_{m1, m2} x_m1 x_m2 (m1 m2)^{-1/2} T(m1 m2bar): the coefficients are folded by residue
// and correlated over the index group, then paired with T.
Complex coefficient_path_second(const CentralFamily& family, const MollifierSet& set, const std::vector<Complex>& h) {
  const auto& ctx = family.group->context();
  const Eigen::VectorXcd table = family_twist_table(family, h);
  const Eigen::VectorXcd w = folded_coefficients(set, ctx);
  // corr[t] = sum_j w[j + t] w[j]: the weight of m1 m2bar = g^t.
  const Eigen::VectorXcd corr = cyclic_convolution<double>(w, reflect(w));
  CompensatedSum<Complex> acc;
  for (i64 t = 0; t < ctx.q - 1; ++t) acc.add(corr[t].real() * table[ctx.pow[static_cast<std::size_t>(t)]]);
  return acc.value();
}

std::vector<Complex> first_moment_weights(const CentralFamily& family, int k) {
  std::vector<Complex> h(family.records.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = root_power(family.records[i].eps, k) * family.records[i].lval;
  return h;
}

std::vector<Complex> second_moment_weights(const CentralFamily& family, int k) {
  std::vector<Complex> h(family.records.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = root_power(family.records[i].eps, k) * std::norm(family.records[i].lval);
  }
  return h;
}

constexpr double kPathTolerance = 1e-6;

}  // namespace

MomentReport mollified_first(const CentralFamily& family, const MollifierSet& set, int k, unsigned workers) {
  check_same_modulus(family, set);
  MomentReport r;
  r.q = family.q();
  r.kind = MomentKind::MollifiedFirst;
  r.k = k;
  r.alpha = set.alpha;
  r.computed = mollified_first_direct(family, mollifier_values(family, set, workers), k, nullptr, workers);
  r.alternate = coefficient_path_first(family, set, first_moment_weights(family, k));
  r.alternate_path = "sum_m x_m m^-1/2 A(m,k)";
  cross_check(r, kPathTolerance);
  fill_mollified_first_prediction(r, set);
  finish(r);
  return r;
}

MomentReport mollified_second(const CentralFamily& family, const MollifierSet& set, int k, unsigned workers) {
  check_same_modulus(family, set);
  MomentReport r;
  r.q = family.q();
  r.kind = MomentKind::MollifiedSecond;
  r.k = k;
  r.alpha = set.alpha;
  r.computed = mollified_second_direct(family, mollifier_values(family, set, workers), k, nullptr, workers);
  r.alternate = coefficient_path_second(family, set, second_moment_weights(family, k));
  r.alternate_path = "sum_m1,m2 x_m1 x_m2 (m1 m2)^-1/2 B(m1,m2,k)";
  cross_check(r, kPathTolerance);
  fill_mollified_second_prediction(r, set);
  finish(r);
  return r;
}

AngleWeight AngleWeight::constant_one() {
  AngleWeight w;
  w.id = "one";
  w.value = [](double) { return 1.0; };
  w.coeffs.K_max = 0;
  w.coeffs.c = Eigen::VectorXcd::Ones(1);
  w.integral = 1;
  return w;
}

AngleWeight AngleWeight::from_bump(const BumpSpec& spec, int K_max) {
  AngleWeight w;
  w.id = spec.id();
  w.value = [spec](double x) { return bump_value(spec, x); };
  w.coeffs = fourier_coefficients(spec, K_max);
  w.integral = bump_integral(spec);
  return w;
}

SmoothedMoments smoothed_moments(const CentralFamily& family, const MollifierSet& set, const AngleWeight& weight,
                                 unsigned workers) {
  check_same_modulus(family, set);
  const std::vector<Complex> mol = mollifier_values(family, set, workers);
  SmoothedMoments out;
  MomentReport* reports[2] = {&out.first, &out.second};
  for (int s = 0; s < 2; ++s) {
    MomentReport& r = *reports[s];
    r.q = family.q();
    r.kind = s == 0 ? MomentKind::SmoothedFirst : MomentKind::SmoothedSecond;
    r.alpha = set.alpha;
    r.bump_id = weight.id;
    r.alternate_path = "sum_k c_k moment(k)";
  }
  // f = 1 multiplies each term by exactly 1.0, so the sums match the mollified ones bitwise.
  out.first.computed = mollified_first_direct(family, mol, 0, &weight.value, workers);
  out.second.computed = mollified_second_direct(family, mol, 0, &weight.value, workers);

  const int K = weight.coeffs.K_max;
  const auto count = static_cast<std::size_t>(2 * K + 1);
  std::vector<Complex> first_terms(count), second_terms(count);
  parallel_for(count, workers, [&](std::size_t idx) {
    const int k = static_cast<int>(idx) - K;
    const Complex c = weight.coeffs[k];
    first_terms[idx] = c * mollified_first_direct(family, mol, k, nullptr, 1);
    second_terms[idx] = c * mollified_second_direct(family, mol, k, nullptr, 1);
  });
  // Fixed order: k = 0, then +-1, +-2, ... so the f = 1 case is exactly c_0 C(0).
  auto fourier_sum = [&](const std::vector<Complex>& terms) {
    CompensatedSum<Complex> acc;
    acc.add(terms[static_cast<std::size_t>(K)]);
    for (int k = 1; k <= K; ++k) {
      acc.add(terms[static_cast<std::size_t>(K + k)]);
      acc.add(terms[static_cast<std::size_t>(K - k)]);
    }
    return acc.value();
  };
  out.first.alternate = fourier_sum(first_terms);
  out.second.alternate = fourier_sum(second_terms);
  if (K > 0) {
    const std::vector<Complex>* terms[2] = {&first_terms, &second_terms};
    for (int s = 0; s < 2; ++s) {
      const Complex last = (*terms[s])[0] + (*terms[s])[count - 1];
      const double total = std::abs(reports[s]->alternate);
      if (std::abs(last) > 1e-8 * total) {
        throw ConvergenceError("smoothed_moments: Fourier path not converged at K_max = " + std::to_string(K));
      }
    }
  }
  cross_check(out.first, kPathTolerance);
  cross_check(out.second, kPathTolerance);

  fill_mollified_first_prediction(out.first, set);
  fill_mollified_second_prediction(out.second, set);
  out.first.predicted_main *= weight.integral;
  out.second.predicted_main *= weight.integral;
  out.first.envelope = 0;
  out.second.envelope = 0;
  out.first.envelope_formula = "";
  out.second.envelope_formula = "";
  finish(out.first);
  finish(out.second);
  return out;
}

}  // namespace rnlab
