#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace rnlab {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/// Default cap on the modulus; tables are dense arrays of length q.
inline constexpr i64 kDefaultMaxModulus = 2'000'000;

inline i64 mod_reduce(i64 n, i64 q) {
  i64 r = n % q;
  return r < 0 ? r + q : r;
}

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m);

/// Deterministic Miller-Rabin, valid for n < 3.4e14 (bases 2..17).
bool is_prime(u64 n);

/// Distinct prime factors by trial division.
std::vector<u64> prime_factors(u64 n);

/// Smallest generator of (Z/qZ)^*. Throws NotPrimeError for composite or q < 3.
i64 find_primitive_root(i64 q);

/// n^{-1} mod q by extended Euclid. Throws DomainError when q | n.
i64 mod_inverse(i64 n, i64 q);

/// Discrete-log and inverse tables for an odd prime q.
///
/// Immutable after construction; share it through `std::shared_ptr<const PrimeContext>`.
/// Indexing: `ind[n]`, `inv[n]` for 1 <= n <= q-1 (slot 0 holds -1), `pow[j] = g^j`
/// for 0 <= j <= q-2.
struct PrimeContext {
  i64 q = 0;
  i64 g = 0;
  std::vector<i64> ind;
  std::vector<i64> inv;
  std::vector<i64> pow;

  i64 order() const { return q - 1; }
  i64 dlog(i64 n) const { return ind[static_cast<std::size_t>(mod_reduce(n, q))]; }
  i64 inverse(i64 n) const { return inv[static_cast<std::size_t>(mod_reduce(n, q))]; }
  i64 generator_power(i64 j) const { return pow[static_cast<std::size_t>(mod_reduce(j, q - 1))]; }
};

using PrimeContextPtr = std::shared_ptr<const PrimeContext>;

/// O(q) construction. Throws NotPrimeError, or ResourceError when q > max_modulus.
PrimeContextPtr build_context(i64 q, i64 max_modulus = kDefaultMaxModulus);

/// Assemble a context from tables read elsewhere (the cache); g is recovered from the tables.
PrimeContextPtr context_from_tables(i64 q, std::vector<i64> ind, std::vector<i64> inv);

/// All primes p in [lo, hi].
std::vector<i64> primes_in_range(i64 lo, i64 hi);

}  // namespace rnlab
