#include "rnlab/central.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include "json.hpp"
#include <numbers>

#include "rnlab/errors.hpp"
#include "rnlab/parallel.hpp"
#include "rnlab/special.hpp"

namespace rnlab {

namespace {

constexpr double kGridLogMin = -20.723265836946411;  // log 1e-9
constexpr double kGridLogMax = 13.815510557964274;   // log 1e6
// Reseed the rotation recurrence this often to keep its drift near one ulp.
constexpr std::size_t kReseed = 32;

Complex poly_eval(const std::vector<double>& coeffs, Complex u) {
  Complex acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
  return acc;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

SmoothingSpec SmoothingSpec::standard(int delta) {
  if (delta != 0 && delta != 1) throw PreconditionError("SmoothingSpec: delta must be 0 or 1");
  SmoothingSpec spec;
  spec.delta = delta;
  spec.poly = delta == 0 ? std::vector<double>{1.0, 0.0, -4.0} : std::vector<double>{1.0, 0.0, -4.0 / 9.0};
  return spec;
}

void SmoothingSpec::validate() const {
  if (delta != 0 && delta != 1) throw PreconditionError("SmoothingSpec: delta must be 0 or 1");
  if (poly.empty() || std::abs(poly.front() - 1.0) > 1e-14) {
    throw PreconditionError("SmoothingSpec: P(0) must be 1");
  }
  // The AFE uses the same V on both sums only when G(u) = G(-u).
  for (std::size_t i = 1; i < poly.size(); i += 2) {
    if (poly[i] != 0.0) throw PreconditionError("SmoothingSpec: P must be an even polynomial");
  }
  // Poles of Gamma((1/2 + u + delta)/2) sit at u = -1/2 - delta - 2k.
  for (double pole = -0.5 - delta; pole >= -2.0; pole -= 2.0) {
    if (std::abs(poly_eval(poly, Complex(pole, 0))) > 1e-12) {
      throw PreconditionError("SmoothingSpec: P must vanish at the gamma pole u = " + std::to_string(pole));
    }
  }
  if (!(contour_re > 0) || !(contour_left < 0) || !(contour_T > 0) || !(step > 0)) {
    throw PreconditionError("SmoothingSpec: bad contour parameters");
  }
}

std::string SmoothingSpec::to_json() const {
  nlohmann::json j;
  j["delta"] = delta;
  j["P"] = poly;
  j["contour_re"] = contour_re;
  j["contour_left"] = contour_left;
  j["contour_T"] = contour_T;
  j["step"] = step;
  return j.dump();
}

std::uint64_t SmoothingSpec::hash() const { return fnv1a(to_json()); }

SmoothingKernel::Line SmoothingKernel::make_line(double re) const {
  const double h = spec_.step;
  const auto count = static_cast<std::size_t>(std::llround(spec_.contour_T / h)) + 1;
  const double half_delta = 0.5 + spec_.delta;
  const Complex log_norm = log_gamma(Complex(half_delta / 2, 0));
  const double log_pi = std::log(std::numbers::pi);
  Line line;
  line.re = re;
  line.value_w.resize(count);
  line.deriv_w.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    const Complex u(re, static_cast<double>(j) * h);
    const Complex g = poly_eval(spec_.poly, u) * std::exp(u * u);
    const Complex ratio = std::exp(-u / 2.0 * log_pi + log_gamma((half_delta + u) / 2.0) - log_norm);
    double w = h / std::numbers::pi;
    if (j == 0 || j + 1 == count) w /= 2;
    line.value_w[j] = w * g * ratio / u;
    line.deriv_w[j] = -w * g * ratio;
  }
  return line;
}

void SmoothingKernel::line_sum(const Line& line, double s, double h, double* value, double* deriv) {
  // y^{-u_j} = e^{-s re} e^{-i s j h}
  const double scale = std::exp(-s * line.re);
  const Complex rot = std::polar(1.0, -s * h);
  Complex cur(1, 0);
  double v = 0, d = 0;
  for (std::size_t j = 0; j < line.value_w.size(); ++j) {
    if (j % kReseed == 0) cur = std::polar(1.0, -s * h * static_cast<double>(j));
    v += line.value_w[j].real() * cur.real() - line.value_w[j].imag() * cur.imag();
    d += line.deriv_w[j].real() * cur.real() - line.deriv_w[j].imag() * cur.imag();
    cur *= rot;
  }
  *value = v * scale;
  if (deriv) *deriv = d * scale;
}

SmoothingKernel::SmoothingKernel(SmoothingSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  right_ = make_line(spec_.contour_re);
  left_ = make_line(spec_.contour_left);

  const auto nodes = static_cast<std::size_t>(std::ceil((kGridLogMax - kGridLogMin) / spec_.step)) + 1;
  s_lo_ = kGridLogMin;
  s_step_ = (kGridLogMax - kGridLogMin) / static_cast<double>(nodes - 1);
  val_.resize(nodes);
  der_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = s_lo_ + static_cast<double>(i) * s_step_;
    double v = 0, d = 0;
    if (s >= 0) {
      line_sum(right_, s, spec_.step, &v, &d);
    } else {
      line_sum(left_, s, spec_.step, &v, &d);
      v += 1;
    }
    val_[i] = v;
    der_[i] = d;
  }
  tail_.assign(nodes, 0.0);
  for (std::size_t i = nodes - 1; i-- > 0;) {
    const double s0 = s_lo_ + static_cast<double>(i) * s_step_;
    const double f0 = std::exp(s0 / 2) * std::abs(val_[i]);
    const double f1 = std::exp((s0 + s_step_) / 2) * std::abs(val_[i + 1]);
    tail_[i] = tail_[i + 1] + 0.5 * s_step_ * (f0 + f1);
  }
}

double SmoothingKernel::direct(double y) const {
  if (!(y > 0)) throw DomainError("smoothing_V: y must be positive");
  const double s = std::log(y);
  double v = 0;
  if (y >= 1) {
    line_sum(right_, s, spec_.step, &v, nullptr);
    return v;
  }
  line_sum(left_, s, spec_.step, &v, nullptr);
  return v + 1;
}

double SmoothingKernel::direct_on_line(double y, double c) const {
  if (!(y > 0)) throw DomainError("smoothing_V: y must be positive");
  if (!(c > 0)) throw PreconditionError("direct_on_line: the line must lie right of u = 0");
  const Line line = make_line(c);
  double v = 0;
  line_sum(line, std::log(y), spec_.step, &v, nullptr);
  return v;
}

double SmoothingKernel::direct_log_derivative(double y) const {
  if (!(y > 0)) throw DomainError("smoothing_V: y must be positive");
  double v = 0, d = 0;
  line_sum(y >= 1 ? right_ : left_, std::log(y), spec_.step, &v, &d);
  return d;
}

double SmoothingKernel::grid_min() const { return std::exp(s_lo_); }
double SmoothingKernel::grid_max() const {
  return std::exp(s_lo_ + static_cast<double>(val_.size() - 1) * s_step_);
}

double SmoothingKernel::operator()(double y) const {
  if (!(y > 0)) throw DomainError("smoothing_V: y must be positive");
  const double s = std::log(y);
  const double pos = (s - s_lo_) / s_step_;
  if (pos < 0 || pos >= static_cast<double>(val_.size() - 1)) return direct(y);
  const auto i = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * val_[i] + h10 * s_step_ * der_[i] + h01 * val_[i + 1] + h11 * s_step_ * der_[i + 1];
}

std::int64_t SmoothingKernel::truncation_point(double scale, double target, double* bound) const {
  // sum_{n > N} n^{-1/2}|V(n/scale)| <= sqrt(scale) * int_{N/scale}^inf t^{-1/2}|V(t)| dt for
  // decreasing |V|; the factor 2 covers the non-monotone stretch near the origin.
  const double factor = 2 * std::sqrt(scale);
  auto it = std::find_if(tail_.begin(), tail_.end(), [&](double t) { return factor * t < target; });
  if (it == tail_.end()) return -1;
  const auto i = static_cast<std::size_t>(it - tail_.begin());
  if (bound) *bound = factor * tail_[i];
  const double y = std::exp(s_lo_ + static_cast<double>(i) * s_step_);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(scale * y)));
}

SmoothingKernelPtr standard_kernel(int delta) {
  static std::mutex lock;
  static SmoothingKernelPtr kernels[2];
  if (delta != 0 && delta != 1) throw PreconditionError("standard_kernel: delta must be 0 or 1");
  std::lock_guard guard(lock);
  if (!kernels[delta]) kernels[delta] = std::make_shared<const SmoothingKernel>(SmoothingSpec::standard(delta));
  return kernels[delta];
}

double smoothing_V(double y, const SmoothingSpec& spec) {
  if (!(y > 0)) throw DomainError("smoothing_V: y must be positive");
  return SmoothingKernel(spec).direct(y);
}

Eigen::VectorXd fold_weights(i64 q, const SmoothingKernel& kernel, double scale, std::int64_t n_max,
                             unsigned workers) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(q);
  parallel_for(static_cast<std::size_t>(q), workers, [&](std::size_t r) {
    CompensatedSum<double> acc;
    for (std::int64_t n = r == 0 ? q : static_cast<std::int64_t>(r); n <= n_max; n += q) {
      const double nd = static_cast<double>(n);
      acc.add(kernel(nd / scale) / std::sqrt(nd));
    }
    out[static_cast<Eigen::Index>(r)] = acc.value();
  });
  return out;
}

FoldedAfe fold_afe(i64 q, int delta, const AfeParams& params, unsigned workers) {
  if (!(params.X > 0)) throw PreconditionError("AfeParams: X must be positive");
  if (!(params.target_abs_err > 0)) throw PreconditionError("AfeParams: target_abs_err must be positive");
  const auto kernel = standard_kernel(delta);
  const double root_q = std::sqrt(static_cast<double>(q));
  FoldedAfe out;
  out.q = q;
  out.delta = delta;
  out.X = params.X;
  const double scale_first = params.X * root_q;
  const double scale_second = root_q / params.X;
  auto pick = [&](double scale, double* tail) -> std::int64_t {
    if (params.tail_cut > 0) {
      *tail = std::nan("");
      return params.tail_cut;
    }
    // Half the budget per sum.
    const std::int64_t n = kernel->truncation_point(scale, params.target_abs_err / 2, tail);
    if (n < 0 || n > params.max_terms) {
      throw ResourceError("fold_afe: truncation point exceeds max_terms for the requested target");
    }
    return n;
  };
  out.n_first = pick(scale_first, &out.tail_first);
  out.n_second = pick(scale_second, &out.tail_second);
  out.first = fold_weights(q, *kernel, scale_first, out.n_first, workers);
  if (scale_second == scale_first && out.n_second == out.n_first) {
    out.second = out.first;
  } else {
    out.second = fold_weights(q, *kernel, scale_second, out.n_second, workers);
  }
  return out;
}

Complex central_value_afe(const Character& chi, const FoldedAfe& folded) {
  if (!chi.is_primitive()) throw PreconditionError("central_value_afe: principal character");
  if (folded.q != chi.q() || folded.delta != chi.parity()) {
    throw PreconditionError("central_value_afe: folded weights do not match the character");
  }
  const auto& ctx = chi.group()->context();
  CompensatedSum<Complex> direct_part, dual_part;
  for (i64 j = 0; j < ctx.order(); ++j) {
    const auto r = static_cast<Eigen::Index>(ctx.pow[static_cast<std::size_t>(j)]);
    const Complex value = chi.at_log(j);
    direct_part.add(value * folded.first[r]);
    dual_part.add(std::conj(value) * folded.second[r]);
  }
  const GaussData gauss = gauss_sum_and_angle(chi);
  return direct_part.value() + gauss.eps * dual_part.value();
}

Complex central_value_afe(const Character& chi, const AfeParams& params) {
  if (!chi.is_primitive()) throw PreconditionError("central_value_afe: principal character");
  return central_value_afe(chi, fold_afe(chi.q(), chi.parity(), params));
}

HurwitzTable make_hurwitz_table(i64 q, Complex s, unsigned workers) {
  HurwitzTable table;
  table.q = q;
  table.s = s;
  table.zeta.assign(static_cast<std::size_t>(q), Complex(0));
  parallel_for(static_cast<std::size_t>(q - 1), workers, [&](std::size_t i) {
    const double x = static_cast<double>(i + 1) / static_cast<double>(q);
    table.zeta[i + 1] = hurwitz_zeta<Complex>(s, x);
  });
  return table;
}

Complex central_value_hurwitz(const Character& chi, const HurwitzTable& table) {
  if (!chi.is_primitive()) throw PreconditionError("central_value_hurwitz: principal character");
  if (table.q != chi.q()) throw PreconditionError("central_value_hurwitz: table modulus mismatch");
  const auto& ctx = chi.group()->context();
  CompensatedSum<Complex> acc;
  for (i64 a = 1; a < table.q; ++a) {
    acc.add(chi.at_log(ctx.ind[static_cast<std::size_t>(a)]) * table.zeta[static_cast<std::size_t>(a)]);
  }
  return std::exp(-table.s * std::log(static_cast<double>(table.q))) * acc.value();
}

Complex central_value_hurwitz(const Character& chi, Complex s) {
  if (!chi.is_primitive()) throw PreconditionError("central_value_hurwitz: principal character");
  return central_value_hurwitz(chi, make_hurwitz_table(chi.q(), s));
}

double completed_lambda_residual(const Character& chi, Complex s) {
  if (!chi.is_primitive()) throw PreconditionError("completed_lambda_residual: principal character");
  const double delta = chi.parity();
  const double log_q = std::log(static_cast<double>(chi.q()));
  const double log_pi = std::log(std::numbers::pi);
  auto completed = [&](const Character& c, Complex z) {
    const Complex log_factor = z / 2.0 * (log_q - log_pi) + log_gamma((z + delta) / 2.0);
    return std::exp(log_factor) * central_value_hurwitz(c, z);
  };
  const Complex eps = gauss_sum_and_angle(chi).eps;
  return std::abs(completed(chi, s) - eps * completed(chi.conj(), 1.0 - s));
}

std::vector<CentralRecord> compute_central_records(const CharacterGroupPtr& group,
                                                   const std::vector<Character>& chars,
                                                   const AfeParams& params, unsigned workers) {
  FoldedAfe folded[2];
  bool need[2] = {false, false};
  for (const auto& chi : chars) {
    if (!chi.is_primitive()) throw PreconditionError("compute_central_records: principal character");
    need[chi.parity()] = true;
  }
  for (int d = 0; d < 2; ++d) {
    if (need[d]) folded[d] = fold_afe(group->q(), d, params, workers);
  }
  std::vector<CentralRecord> out(chars.size());
  parallel_for(chars.size(), workers, [&](std::size_t i) {
    const auto& chi = chars[i];
    const GaussData gauss = gauss_sum_and_angle(chi);
    CentralRecord rec;
    rec.a = chi.index();
    rec.eps = gauss.eps;
    rec.theta = gauss.theta;
    rec.lval = central_value_afe(chi, folded[chi.parity()]);
    out[i] = rec;
  });
  return out;
}

std::vector<CentralRecord> compute_central_records(const CharacterGroupPtr& group, const AfeParams& params,
                                                   unsigned workers) {
  return compute_central_records(group, enumerate_even_primitive(group), params, workers);
}

}  // namespace rnlab
