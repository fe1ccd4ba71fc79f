#include "rnlab/arith.hpp"

#include <string>

#include "rnlab/errors.hpp"

namespace rnlab {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

i64 find_primitive_root(i64 q) {
  if (q < 3 || !is_prime(static_cast<u64>(q))) {
    throw NotPrimeError("modulus " + std::to_string(q) + " is not an odd prime");
  }
  const u64 order = static_cast<u64>(q - 1);
  const auto factors = prime_factors(order);
  for (u64 g = 2; g < static_cast<u64>(q); ++g) {
    bool generator = true;
    for (u64 p : factors) {
      if (pow_mod(g, order / p, static_cast<u64>(q)) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return static_cast<i64>(g);
  }
  throw NotPrimeError("no primitive root found for " + std::to_string(q));
}

i64 mod_inverse(i64 n, i64 q) {
  i64 a = mod_reduce(n, q);
  if (a == 0) throw DomainError("mod_inverse: " + std::to_string(q) + " divides " + std::to_string(n));
  i64 old_r = a, r = q, old_s = 1, s = 0;
  while (r != 0) {
    const i64 quot = old_r / r;
    i64 tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw DomainError("mod_inverse: arguments not coprime");
  return mod_reduce(old_s, q);
}

PrimeContextPtr build_context(i64 q, i64 max_modulus) {
  if (q > max_modulus) {
    throw ResourceError("modulus " + std::to_string(q) + " exceeds configured cap " +
                        std::to_string(max_modulus));
  }
  const i64 g = find_primitive_root(q);
  auto ctx = std::make_shared<PrimeContext>();
  ctx->q = q;
  ctx->g = g;
  const auto n = static_cast<std::size_t>(q);
  ctx->ind.assign(n, -1);
  ctx->inv.assign(n, -1);
  ctx->pow.resize(n - 1);
  i64 x = 1;
  for (i64 j = 0; j < q - 1; ++j) {
    ctx->pow[static_cast<std::size_t>(j)] = x;
    ctx->ind[static_cast<std::size_t>(x)] = j;
    x = static_cast<i64>(mul_mod(static_cast<u64>(x), static_cast<u64>(g), static_cast<u64>(q)));
  }
  for (i64 j = 0; j < q - 1; ++j) {
    const i64 y = ctx->pow[static_cast<std::size_t>(j)];
    ctx->inv[static_cast<std::size_t>(y)] = ctx->pow[static_cast<std::size_t>((q - 1 - j) % (q - 1))];
  }
  return ctx;
}

PrimeContextPtr context_from_tables(i64 q, std::vector<i64> ind, std::vector<i64> inv) {
  auto ctx = std::make_shared<PrimeContext>();
  ctx->q = q;
  ctx->ind = std::move(ind);
  ctx->inv = std::move(inv);
  ctx->pow.assign(static_cast<std::size_t>(q - 1), 0);
  for (i64 n = 1; n < q; ++n) {
    const i64 j = ctx->ind[static_cast<std::size_t>(n)];
    ctx->pow[static_cast<std::size_t>(j)] = n;
    if (j == 1) ctx->g = n;
  }
  return ctx;
}

std::vector<i64> primes_in_range(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 n = std::max<i64>(lo, 2); n <= hi; ++n) {
    if (is_prime(static_cast<u64>(n))) out.push_back(n);
  }
  return out;
}

}  // namespace rnlab
