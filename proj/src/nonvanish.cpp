#include "rnlab/nonvanish.hpp"

#include <algorithm>
#include <cmath>

#include "rnlab/errors.hpp"
#include "rnlab/parallel.hpp"

namespace rnlab {

bool ArcInterval::contains(double theta) const {
  if (length >= 1) return true;
  double d = std::fmod(theta - start, 1.0);
  if (d < 0) d += 1;
  if (d >= 1) d = 0;
  return d < length;
}

ArcInterval ArcInterval::shrinking(double center, double C, double q, double eta) {
  ArcInterval arc;
  arc.length = std::min(1.0, C * std::pow(q, -eta));
  arc.start = std::fmod(center - arc.length / 2, 1.0);
  if (arc.start < 0) arc.start += 1;
  return arc;
}

double c_eta(double eta) {
  if (!(eta >= 0 && eta < 1.0 / 480)) throw DomainError("c_eta: eta must lie in [0, 1/480)");
  return 1.0 / 25 - 96.0 * eta / 5;
}

i64 count_above(const std::vector<CentralRecord>& records, const ArcInterval& interval, double threshold) {
  i64 n = 0;
  for (const auto& rec : records) {
    if (interval.contains(rec.theta) && std::abs(rec.lval) > threshold) ++n;
  }
  return n;
}

NonvanishReport nonvanishing_count(i64 q, const std::vector<CentralRecord>& records, const ArcInterval& interval,
                                   double epsilon, double eta) {
  if (!(interval.length > 0)) throw DomainError("nonvanishing_count: empty interval");
  NonvanishReport out;
  out.q = q;
  out.interval = interval;
  out.epsilon = epsilon;
  const double mu = std::min(1.0, interval.length);
  out.threshold = epsilon * mu / std::sqrt(std::log(static_cast<double>(q)));
  for (const auto& rec : records) {
    if (!interval.contains(rec.theta)) continue;
    ++out.family_in_window;
    if (std::abs(rec.lval) > out.threshold) ++out.count;
  }
  out.proportion = static_cast<double>(out.count) / (mu * static_cast<double>(phi_plus(q)));
  out.c_eta_bound = c_eta(eta);
  return out;
}

Equidistribution angle_equidistribution(const std::vector<CentralRecord>& records, int bins) {
  if (records.empty()) throw DomainError("angle_equidistribution: empty family");
  if (bins < 2) throw PreconditionError("angle_equidistribution: bins must be >= 2");
  std::vector<double> theta;
  theta.reserve(records.size());
  for (const auto& rec : records) theta.push_back(rec.theta);
  std::sort(theta.begin(), theta.end());
  const auto n = static_cast<double>(theta.size());
  Equidistribution out;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - theta[i];
    const double below = theta[i] - static_cast<double>(i) / n;
    out.ks_statistic = std::max({out.ks_statistic, above, below});
  }
  CompensatedSum<Complex> mean;
  for (const auto& rec : records) mean.add(unit_phase(rec.theta));
  out.mean_vector = mean.value() / n;
  out.histogram.assign(static_cast<std::size_t>(bins), 0);
  for (double t : theta) {
    auto b = static_cast<std::size_t>(t * bins);
    if (b >= out.histogram.size()) b = out.histogram.size() - 1;
    ++out.histogram[b];
  }
  return out;
}

}  // namespace rnlab
