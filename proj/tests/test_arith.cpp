#include "doctest.h"

#include <random>

#include "shadiv/arith.hpp"

using namespace shadiv;

namespace {

// Plain trial division, used as the reference for the fast primality paths.
bool naive_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int euler_criterion(std::int64_t a, std::uint64_t p) {
  const std::uint64_t am = mod_floor(a, p);
  if (am == 0) return 0;
  return pow_mod(am, (p - 1) / 2, p) == 1 ? 1 : -1;
}

}  // namespace

TEST_CASE("factorize splits the discriminant-sized integers") {
  const Factorization f = factorize(16400);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0].prime == 2);
  CHECK(f.factors[0].exponent == 4);
  CHECK(f.factors[1].prime == 5);
  CHECK(f.factors[1].exponent == 2);
  CHECK(f.factors[2].prime == 41);
  CHECK(f.value() == 16400);

  const Factorization g = factorize(ExactInt(-1025));
  CHECK(g.unit == -1);
  CHECK(g.value() == -1025);
}

TEST_CASE("factorize handles a product of two 40-bit primes") {
  const ExactInt p("1099511627791"), q("1099511628401");
  REQUIRE(is_prime(p));
  REQUIRE(is_prime(q));
  const Factorization f = factorize(p * q);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0].prime == p);
  CHECK(f.factors[1].prime == q);
}

TEST_CASE("factorize rejects zero and oversized input") {
  CHECK_THROWS_AS(factorize(0), Error);
  try {
    factorize(ExactInt(1) << 200, ExactInt(1) << 100);
    FAIL("expected BoundExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundExceeded);
  }
}

TEST_CASE("primality agrees with trial division") {
  for (std::uint64_t n = 0; n < 20000; ++n) {
    REQUIRE(is_prime_u64(n) == naive_prime(n));
    REQUIRE(is_prime(ExactInt(static_cast<unsigned long>(n))) == naive_prime(n));
  }
  // Strong pseudoprimes to several bases.
  CHECK_FALSE(is_prime_u64(3215031751ULL));
  CHECK_FALSE(is_prime_u64(3825123056546413051ULL));
  CHECK(is_prime(ExactInt("170141183460469231731687303715884105727")));
  CHECK_FALSE(is_prime(ExactInt("170141183460469231731687303715884105729")));
}

TEST_CASE("squarefree part") {
  CHECK(squarefree_part(16400) == 41);
  CHECK(squarefree_part(-20) == -5);
  CHECK(squarefree_part(1) == 1);
  CHECK(squarefree_part(-205) == -205);
}

TEST_CASE("jacobi symbol matches Euler's criterion") {
  CHECK(jacobi(5, 41) == 1);
  CHECK(jacobi(41, 5) == 1);
  CHECK(jacobi(-1, 41) == 1);
  CHECK(jacobi(-1, 5) == 1);
  for (std::uint64_t p : primes_up_to(200)) {
    if (p == 2) continue;
    for (std::int64_t a = -50; a <= 50; ++a) {
      REQUIRE(jacobi(a, ExactInt(static_cast<unsigned long>(p))) == euler_criterion(a, p));
      REQUIRE(jacobi_u64(a, p) == euler_criterion(a, p));
    }
  }
}

TEST_CASE("valuations and modular helpers") {
  CHECK(valuation(16400, 2) == 4);
  CHECK(valuation(16400, 41) == 1);
  CHECK(rat_valuation(ExactRat(5, 82), 41) == -1);
  CHECK(is_square(ExactInt(1681)));
  CHECK_FALSE(is_square(ExactInt(-4)));
  CHECK(inv_mod(3, 7) == 5);
  CHECK(mod_floor(std::int64_t{-3}, 8) == 5);
  CHECK(multiplicative_order(2, 9) == 6);
  CHECK(least_nonresidue(41) == 3);
  CHECK(least_nonresidue(17) == 3);
  CHECK(primes_up_to(30).size() == 10);
}

TEST_CASE("mul_mod and pow_mod near 2^64") {
  std::mt19937_64 rng(7);
  const std::uint64_t m = 18446744073709551557ULL;  // largest prime below 2^64
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t a = rng() % m, b = rng() % m;
    const ExactInt ref = (ExactInt(std::to_string(a)) * ExactInt(std::to_string(b))) % ExactInt(std::to_string(m));
    REQUIRE(ExactInt(std::to_string(mul_mod(a, b, m))) == ref);
    if (a != 0) REQUIRE(pow_mod(a, m - 1, m) == 1);
  }
}

TEST_CASE("parsing") {
  CHECK(parse_int(" +42 ") == 42);
  CHECK(parse_rat("-5/10") == ExactRat(-1, 2));
  CHECK_THROWS_AS(parse_int("4x"), Error);
}
