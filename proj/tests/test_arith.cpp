#include "doctest.h"

#include <numeric>

#include "rnlab/arith.hpp"
#include "rnlab/errors.hpp"

using namespace rnlab;

TEST_CASE("primality and primitive roots") {
  CHECK(is_prime(2));
  CHECK(is_prime(10007));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));          // Carmichael
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  CHECK(find_primitive_root(5) == 2);
  CHECK(find_primitive_root(7) == 3);
  CHECK(find_primitive_root(41) == 6);
  CHECK(find_primitive_root(1009) == 11);
  CHECK_THROWS_AS(find_primitive_root(15), NotPrimeError);
}

TEST_CASE("modular helpers") {
  CHECK(mod_reduce(-1, 7) == 6);
  CHECK(pow_mod(3, 100, 101) == 1);
  CHECK(mod_inverse(3, 7) == 5);
  CHECK_THROWS_AS(mod_inverse(14, 7), DomainError);
  CHECK(primes_in_range(10, 30) == std::vector<i64>{11, 13, 17, 19, 23, 29});
}

TEST_CASE("context tables are a consistent discrete log") {
  for (i64 q : {5, 7, 101, 1009}) {
    const auto ctx = build_context(q);
    CHECK(ctx->pow[0] == 1);
    std::vector<bool> seen(static_cast<std::size_t>(q), false);
    for (i64 j = 0; j < q - 1; ++j) {
      const i64 n = ctx->generator_power(j);
      CHECK_FALSE(seen[static_cast<std::size_t>(n)]);
      seen[static_cast<std::size_t>(n)] = true;
      CHECK(ctx->dlog(n) == j);
    }
    for (i64 n = 1; n < q; ++n) CHECK(mul_mod(static_cast<u64>(n), static_cast<u64>(ctx->inverse(n)), q) == 1);
  }
}

TEST_CASE("context construction errors") {
  CHECK_THROWS_AS(build_context(21), NotPrimeError);
  CHECK_THROWS_AS(build_context(1000003, 1000), ResourceError);
}

TEST_CASE("rebuilding from tables recovers the generator") {
  const auto ctx = build_context(101);
  const auto again = context_from_tables(101, ctx->ind, ctx->inv);
  CHECK(again->g == ctx->g);
  CHECK(again->pow == ctx->pow);
}
