// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rnlab/cli.hpp"
#include "rnlab/errors.hpp"
#include "rnlab/kloosterman.hpp"
#include "rnlab/moments.hpp"
#include "rnlab/nonvanish.hpp"

using namespace rnlab;

namespace {

unsigned workers() { return std::max(1U, std::min(8U, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Decreasing with at most `allowed` increases along the sequence.
bool trend_down(const std::vector<double>& v, int allowed) {
  int ups = 0;
  for (std::size_t i = 1; i < v.size(); ++i) ups += v[i] > v[i - 1] ? 1 : 0;
  return ups <= allowed && v.back() < v.front();
}

std::string join(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(4);
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

Outcome orthogonality() {
  double worst = 0;
  for (i64 q : {5, 7, 11, 101}) {
    const auto group = make_character_group(q);
    for (i64 m = 1; m < q; ++m) {
      const auto r = orthogonality_sum(group, m);
      worst = std::max(worst, std::abs(r.computed - Complex(r.predicted, 0)) / static_cast<double>(q));
    }
  }
  std::ostringstream d;
  d << "max |err|/q " << worst;
  return {worst <= 1e-9, d.str()};
}

Outcome functional_equation() {
  double worst = 0;
  for (i64 q : {5, 7, 11, 101}) {
    const auto group = make_character_group(q);
    for (i64 a = 1; a < q - 1; ++a) {
      const Character chi(group, a);
      for (double s : {0.3, 0.6}) worst = std::max(worst, completed_lambda_residual(chi, Complex(s, 0)));
    }
  }
  std::ostringstream d;
  d << "max residual " << worst;
  return {worst < 1e-8, d.str()};
}

Outcome oracle_agreement() {
  double hurwitz = 0, variants = 0;
  for (i64 q : {5, 101, 1009}) {
    const auto group = make_character_group(q);
    const auto chars = enumerate_even_primitive(group);
    const HurwitzTable table = make_hurwitz_table(q, Complex(0.5, 0), workers());
    std::vector<std::vector<CentralRecord>> by_x;
    for (double X : {0.5, 1.0, 2.0}) {
      AfeParams p;
      p.X = X;
      by_x.push_back(compute_central_records(group, chars, p, workers()));
    }
    for (std::size_t i = 0; i < chars.size(); ++i) {
      hurwitz = std::max(hurwitz, std::abs(by_x[1][i].lval - central_value_hurwitz(chars[i], table)));
      for (int u = 0; u < 3; ++u) {
        for (int v = u + 1; v < 3; ++v) variants = std::max(variants, std::abs(by_x[u][i].lval - by_x[v][i].lval));
      }
    }
  }
  std::ostringstream d;
  d << "AFE-Hurwitz " << hurwitz << ", X variants " << variants;
  return {hurwitz <= 1e-8 && variants <= 1e-7, d.str()};
}

Outcome kloosterman() {
  double point = 0, deligne = 0, weil = 0;
  for (i64 q : primes_in_range(5, 101)) {
    const auto group = make_character_group(q);
    for (int k = 1; k <= 4; ++k) {
      const KlTable t = kl_all(k, *group);
      for (i64 x = 1; x < q; ++x) point = std::max(point, std::abs(t(x) - kl_point(k, x, group->context())));
    }
  }
  for (i64 q : primes_in_range(5, 401)) {
    const auto group = make_character_group(q);
    for (int k = 1; k <= 6; ++k) {
      const KlTable t = kl_all(k, *group);
      for (i64 x = 1; x < q; ++x) deligne = std::max(deligne, std::abs(t(x)) / k);
    }
  }
  std::mt19937_64 rng(20240601);
  const auto primes = primes_in_range(5, 20000);
  for (int i = 0; i < 1000; ++i) {
    const i64 q = primes[rng() % primes.size()];
    const auto ctx = build_context(q);
    const i64 a = 1 + static_cast<i64>(rng() % static_cast<u64>(q - 1));
    const i64 b = 1 + static_cast<i64>(rng() % static_cast<u64>(q - 1));
    weil = std::max(weil, std::abs(classical_kloosterman(a, b, *ctx)) / (2 * std::sqrt(static_cast<double>(q))));
  }
  const auto group = make_character_group(100003);
  const auto t0 = std::chrono::steady_clock::now();
  const KlTable big = kl_all(4, *group);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << "all-vs-point " << point << ", max|Kl|/k " << deligne << ", max|S|/2sqrt(q) " << weil
    << ", kl_all(4, 100003) " << secs << "s";
  return {point <= 1e-9 && deligne <= 1 + 1e-9 && weil <= 1 + 1e-9 && secs < 10 && std::isfinite(big(2).real()),
          d.str()};
}

Outcome mollifier() {
  bool exact = true;
  for (i64 q : {7, 1009}) {
    for (i64 M : {3, 100, 1000}) {
      const MollifierSet set = build_mollifier_with_length(q, M);
      mpq_class inverse_sum = 0;
      exact = exact && set.x[1] == 1;
      for (i64 m = 1; m <= M; ++m) {
        const auto& x = set.x[static_cast<std::size_t>(m)];
        exact = exact && abs(x) <= 1;
        inverse_sum += x / m;
      }
      exact = exact && inverse_sum == 1 / set.G;
    }
  }
  bool unitary = true;
  for (i64 q : {7, 1009}) {
    for (i64 n = 1; n <= 10000; ++n) {
      const mpq_class delta = n == 1 ? 1 : 0;
      unitary = unitary && unitary_convolution({"mu/phi", "mu^2/phi"}, n, q) == delta;
      unitary = unitary && unitary_convolution({"mu*tau/phi", "mu^2/phi", "mu^2/phi"}, n, q) == delta;
    }
  }
  double ratio = 0;
  for (i64 q : {7, 1009}) {
    for (i64 M : {100, 1000, 10000}) ratio = std::max(ratio, g_asymptotic_check(q, M).residual_ratio);
  }
  std::ostringstream d;
  d << "coefficients " << (exact ? "exact" : "WRONG") << ", unitary " << (unitary ? "exact" : "WRONG")
    << ", max residual_ratio " << ratio;
  return {exact && unitary && ratio <= 5, d.str()};
}

Outcome first_moment_trend() {
  const std::vector<i64> grid = {101, 211, 401, 809, 1601, 2003, 3001, 4001};
  std::vector<double> dev;
  double dev4 = 0, fit = 0;
  for (i64 q : grid) {
    const CentralFamily f = CentralFamily::build(make_character_group(q), {}, workers());
    const double phi = static_cast<double>(phi_plus(q));
    dev.push_back(std::abs(first_moment(f, 1, 0, workers()).computed.real() / phi - 1));
    if (q == 4001) dev4 = std::abs(first_moment(f, 4, -1, workers()).computed.real() * 2 / phi - 1);
    for (int k : {-3, -2, 1, 2, 3}) {
      const MomentReport r = first_moment(f, 1, k, workers());
      fit = std::max(fit, std::abs(r.computed) / r.envelope);
    }
  }
  std::ostringstream d;
  d << "|A(1,0)/phi-1| " << join(dev) << "; |2A(4,-1)/phi-1| " << dev4 << "; envelope constant " << fit
    << " (trend check, not the implied constants)";
  return {dev.back() <= 0.15 && trend_down(dev, 1) && dev4 <= 0.2 && fit <= 10, d.str()};
}

Outcome mollified_second_trend() {
  std::vector<double> dev;
  double ratio = 0, off = 0;
  for (i64 q : {1009, 10007}) {
    const CentralFamily f = CentralFamily::build(make_character_group(q), {}, workers());
    const MollifierSet set = build_mollifier(q, 0.1);
    const MomentReport d0 = mollified_second(f, set, 0, workers());
    ratio = d0.computed.real() / ((1 + 1 / 0.1) * static_cast<double>(phi_plus(q)));
    dev.push_back(std::abs(ratio - 1));
    if (q == 10007) {
      for (int k : {-1, 1}) off = std::max(off, std::abs(mollified_second(f, set, k, workers()).computed) / d0.computed.real());
    }
  }
  std::ostringstream d;
  d << "D(0)/((1+1/alpha)phi) at 10007 = " << ratio << ", |ratio-1| " << join(dev) << ", |D(+-1)|/D(0) " << off;
  return {ratio >= 0.5 && ratio <= 1.5 && dev[1] < dev[0] && off <= 0.3, d.str()};
}

Outcome smoothed() {
  const CentralFamily f = CentralFamily::build(make_character_group(1009), {}, workers());
  const MollifierSet set = build_mollifier(1009, 0.2);
  BumpSpec spec;
  spec.beta = 0.1;
  spec.start = 0;
  spec.length = 0.5;
  const SmoothedMoments s = smoothed_moments(f, set, AngleWeight::from_bump(spec, 1024), workers());
  double rel = 0;
  for (const MomentReport* r : {&s.first, &s.second}) {
    rel = std::max(rel, std::abs(r->computed - r->alternate) /
                            std::max({std::abs(r->computed), std::abs(r->alternate), 1e-300}));
  }
  const SmoothedMoments ones = smoothed_moments(f, set, AngleWeight::constant_one(), workers());
  const bool reduces = ones.first.computed == mollified_first(f, set, 0, workers()).computed &&
                       ones.second.computed == mollified_second(f, set, 0, workers()).computed;
  std::ostringstream d;
  d << "Fourier vs direct rel " << rel << ", f=1 " << (reduces ? "bitwise equal" : "DIFFERS");
  return {rel <= 1e-6 && reduces, d.str()};
}

Outcome nonvanishing() {
  const i64 q = 10007;
  const auto records = compute_central_records(make_character_group(q), {}, workers());
  const NonvanishReport full = nonvanishing_count(q, records, ArcInterval{}, 0.01, 0);
  double min_window = 1;
  for (double eta : {1.0 / 960, 0.9 / 480}) {
    for (int c = 0; c < 16; ++c) {
      const ArcInterval arc = ArcInterval::shrinking((c + 0.5) / 16, 1, static_cast<double>(q), eta);
      min_window = std::min(min_window, nonvanishing_count(q, records, arc, 0.01, eta).proportion);
    }
  }
  std::ostringstream d;
  d << "proportion on [0,1) " << full.proportion << " (bound 0.0396), min over 32 windows " << min_window;
  return {full.proportion >= 0.0396 && min_window > 0, d.str()};
}

Outcome equidistribution() {
  std::vector<double> ks;
  double mean1009 = 0;
  for (i64 q : {101, 1009, 10007}) {
    const auto records = compute_central_records(make_character_group(q), {}, workers());
    const Equidistribution e = angle_equidistribution(records, 20);
    ks.push_back(e.ks_statistic);
    if (q == 1009) mean1009 = std::abs(e.mean_vector);
  }
  std::ostringstream d;
  d << "KS " << join(ks) << ", |mean eps| at 1009 " << mean1009;
  return {trend_down(ks, 1) && mean1009 <= 0.2, d.str()};
}

Outcome determinism() {
  std::ostringstream a, b, c, err;
  const int ra = run_cli({"verify", "--q", "101"}, a, err);
  const int rb = run_cli({"verify", "--q", "101"}, b, err);
  const int rc = run_cli({"verify", "--q", "101", "--workers", "4"}, c, err);
  const bool same = a.str() == b.str();
  const bool workers_same = a.str() == c.str();
  std::ostringstream d;
  d << "repeat " << (same ? "identical" : "DIFFERS") << ", workers 1 vs 4 " << (workers_same ? "identical" : "DIFFERS")
    << ", exit codes " << ra << rb << rc;
  return {same && workers_same && ra == 0 && rb == 0 && rc == 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 orthogonality", orthogonality},
      {"2 functional equation", functional_equation},
      {"3 AFE vs Hurwitz oracle", oracle_agreement},
      {"4 Kloosterman sums", kloosterman},
      {"5 mollifier exactness", mollifier},
      {"6 first moment trend", first_moment_trend},
      {"7 mollified second moment", mollified_second_trend},
      {"8 smoothed moments", smoothed},
      {"9 non-vanishing proportion", nonvanishing},
      {"10 angle equidistribution", equidistribution},
      {"11 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %-30s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures;
}
