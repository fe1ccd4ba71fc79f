#include "rnlab/characters.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rnlab/errors.hpp"

namespace rnlab {

Complex unit_phase(double x) {
  const double angle = 2 * std::numbers::pi * x;
  return {std::cos(angle), std::sin(angle)};
}

CharacterGroup::CharacterGroup(PrimeContextPtr ctx) : ctx_(std::move(ctx)) {
  const i64 q = ctx_->q;
  unit_roots_.resize(q - 1);
  for (i64 j = 0; j < q - 1; ++j) {
    unit_roots_[j] = unit_phase(static_cast<double>(j) / static_cast<double>(q - 1));
  }
  additive_.resize(q);
  for (i64 t = 0; t < q; ++t) additive_[t] = unit_phase(static_cast<double>(t) / static_cast<double>(q));
}

CharacterGroupPtr make_character_group(i64 q, i64 max_modulus) {
  return std::make_shared<const CharacterGroup>(build_context(q, max_modulus));
}

Character::Character(CharacterGroupPtr group, i64 a) : group_(std::move(group)), a_(mod_reduce(a, group_->q() - 1)) {}

Complex Character::at_log(i64 j) const {
  const i64 order = group_->q() - 1;
  return group_->unit_roots()[static_cast<Eigen::Index>((a_ * mod_reduce(j, order)) % order)];
}

Complex Character::operator()(i64 n) const {
  const i64 r = mod_reduce(n, group_->q());
  if (r == 0) return {0.0, 0.0};
  return at_log(group_->context().ind[static_cast<std::size_t>(r)]);
}

Character Character::conj() const { return Character(group_, group_->q() - 1 - a_); }

std::vector<Character> enumerate_even_primitive(const CharacterGroupPtr& group) {
  std::vector<Character> out;
  for (i64 a = 2; a < group->q() - 1; a += 2) out.emplace_back(group, a);
  return out;
}

double angle_of(Complex z) {
  double theta = std::arg(z) / (2 * std::numbers::pi);
  if (theta < 0) theta += 1;
  if (theta >= 1 - 1e-12) theta = 0;
  return theta;
}

GaussData gauss_sum_and_angle(const Character& chi) {
  if (!chi.is_primitive()) throw PreconditionError("gauss_sum_and_angle: principal character is not primitive");
  const auto& group = *chi.group();
  const auto& ctx = group.context();
  const i64 q = ctx.q;
  // Compensated accumulation of the q-1 unit-modulus terms.
  Complex sum(0), comp(0);
  for (i64 t = 1; t < q; ++t) {
    const Complex term = chi.at_log(ctx.ind[static_cast<std::size_t>(t)]) * group.additive()[t];
    const Complex y = term - comp;
    const Complex next = sum + y;
    comp = (next - sum) - y;
    sum = next;
  }
  GaussData out;
  out.tau = sum;
  const Complex i_delta = chi.parity() == 0 ? Complex(1, 0) : Complex(0, 1);
  out.eps = sum / (i_delta * std::sqrt(static_cast<double>(q)));
  out.theta = angle_of(out.eps);
  return out;
}

OrthogonalityResult orthogonality_sum(const CharacterGroupPtr& group, i64 m) {
  const i64 q = group->q();
  if (mod_reduce(m, q) == 0) throw DomainError("orthogonality_sum: q divides m");
  Complex sum(0);
  for (const auto& chi : enumerate_even_primitive(group)) sum += chi(m);
  // vw = q with q prime: (v, w) = (1, q) contributes phi(q) when m = +-1 mod q,
  // (v, w) = (q, 1) contributes mu(q) phi(1) = -1 to each of the two halves.
  const i64 r = mod_reduce(m, q);
  const double plus = (r == 1 ? static_cast<double>(q - 1) : 0.0) - 1.0;
  const double minus = (r == q - 1 ? static_cast<double>(q - 1) : 0.0) - 1.0;
  return {sum, 0.5 * plus + 0.5 * minus};
}

}  // namespace rnlab
