#pragma once

// Exact integer arithmetic, factorization at desk scale, residue symbols.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "shadiv/errors.hpp"

namespace shadiv {

using ExactInt = mpz_class;
using ExactRat = mpq_class;

struct PrimePower {
  ExactInt prime;
  unsigned exponent = 0;

  bool operator==(const PrimePower&) const = default;
};

/// n = unit * prod(prime^exponent), primes strictly increasing.
struct Factorization {
  int unit = 1;
  std::vector<PrimePower> factors;

  ExactInt value() const;
  std::vector<ExactInt> primes() const;
};

/// Default size bound for factorize(): 2^128.
const ExactInt& desk_bound();

/// Trial division to 10^6, then Brent's variant of Pollard rho.
/// Throws ZeroInput for n == 0 and BoundExceeded when |n| > bound or rho gives up.
Factorization factorize(const ExactInt& n, const ExactInt& bound = desk_bound());

/// Deterministic Miller-Rabin below 2^64, Baillie-PSW above.
bool is_prime(const ExactInt& n);
bool is_prime_u64(std::uint64_t n);

/// Squarefree d with n/d a positive square; d has the sign of n.
ExactInt squarefree_part(const ExactInt& n);

/// Jacobi symbol (a | n) for odd positive n.
int jacobi(const ExactInt& a, const ExactInt& n);
int jacobi_u64(std::int64_t a, std::uint64_t n);

/// p-adic valuation of a nonzero integer.
unsigned valuation(const ExactInt& n, const ExactInt& p);
int rat_valuation(const ExactRat& x, const ExactInt& p);

bool is_square(const ExactInt& n);
ExactInt pow_int(const ExactInt& base, unsigned exponent);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);
std::uint64_t mod_floor(std::int64_t a, std::uint64_t m);
std::uint64_t mod_floor(const ExactInt& a, std::uint64_t m);

/// Multiplicative order of r modulo n; requires gcd(r, n) == 1.
std::uint64_t multiplicative_order(std::uint64_t r, std::uint64_t n);

/// All primes <= n, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

/// Least positive quadratic non-residue modulo an odd prime.
std::uint64_t least_nonresidue(std::uint64_t p);

std::uint64_t to_u64(const ExactInt& n);
std::int64_t to_i64(const ExactInt& n);
bool fits_i64(const ExactInt& n);

std::string to_string(const ExactInt& n);
std::string to_string(const ExactRat& x);
ExactInt parse_int(std::string_view text);
ExactRat parse_rat(std::string_view text);

}  // namespace shadiv
