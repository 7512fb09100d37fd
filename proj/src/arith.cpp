#include "shadiv/arith.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace shadiv {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::NonPrime: return "NonPrime";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::PointNotOnCurve: return "PointNotOnCurve";
    case ErrorCode::DegenerateCurve: return "DegenerateCurve";
    case ErrorCode::ExcludedPrime: return "ExcludedPrime";
    case ErrorCode::ConductorUnavailable: return "ConductorUnavailable";
    case ErrorCode::NoWitnessClass: return "NoWitnessClass";
    case ErrorCode::InternalPigeonholeViolation: return "InternalPigeonholeViolation";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

constexpr std::uint64_t kTrialLimit = 1000000;

const std::vector<std::uint64_t>& trial_primes() {
  static const std::vector<std::uint64_t> primes = primes_up_to(kTrialLimit);
  return primes;
}

bool miller_rabin_u64(std::uint64_t n, std::uint64_t a) {
  if (a % n == 0) return true;
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = pow_mod(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool miller_rabin(const ExactInt& n, const ExactInt& a) {
  ExactInt d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  ExactInt x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const ExactInt n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

ExactInt half_mod(const ExactInt& x, const ExactInt& n) {
  ExactInt y = x;
  if (mpz_odd_p(y.get_mpz_t())) y += n;
  y >>= 1;
  return y % n;
}

// Strong Lucas probable prime test with Selfridge parameters (P = 1).
bool strong_lucas(const ExactInt& n) {
  if (is_square(n)) return false;
  ExactInt d_param = 5;
  for (;;) {
    const int j = mpz_jacobi(d_param.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0 && abs(d_param) != n) return false;
    d_param = d_param > 0 ? ExactInt(-(d_param + 2)) : ExactInt(-(d_param - 2));
  }
  const ExactInt q_param = (1 - d_param) / 4;
  ExactInt dmod = d_param % n;
  if (dmod < 0) dmod += n;
  ExactInt qmod = q_param % n;
  if (qmod < 0) qmod += n;

  ExactInt d = n + 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }

  // Left-to-right binary evaluation of U_d, V_d, Q^d.
  ExactInt u = 1, v = 1, qk = qmod;  // k = 1
  const size_t bits = mpz_sizeinbase(d.get_mpz_t(), 2);
  for (size_t i = bits - 1; i-- > 0;) {
    // k -> 2k
    u = (u * v) % n;
    v = (v * v - 2 * qk) % n;
    if (v < 0) v += n;
    qk = (qk * qk) % n;
    if (mpz_tstbit(d.get_mpz_t(), i)) {
      // k -> k + 1
      const ExactInt u_next = half_mod(u + v, n);
      const ExactInt v_next = half_mod(dmod * u + v, n);
      u = u_next;
      v = v_next;
      qk = (qk * qmod) % n;
    }
  }
  if (u == 0 || v == 0) return true;
  for (unsigned r = 1; r < s; ++r) {
    v = (v * v - 2 * qk) % n;
    if (v < 0) v += n;
    qk = (qk * qk) % n;
    if (v == 0) return true;
  }
  return false;
}

ExactInt gcd_int(const ExactInt& a, const ExactInt& b) {
  ExactInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Brent's cycle-finding rho. Returns a nontrivial factor or 0 on failure.
ExactInt pollard_brent(const ExactInt& n) {
  constexpr unsigned long kMaxIterations = 20000000;
  constexpr unsigned kBatch = 128;
  for (unsigned long c = 1; c <= 24; ++c) {
    ExactInt y = 2, x, ys, q = 1, g = 1;
    unsigned long r = 1, iterations = 0;
    auto step = [&](const ExactInt& z) -> ExactInt { return (z * z + c) % n; };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        const unsigned long m = std::min<unsigned long>(kBatch, r - k);
        for (unsigned long i = 0; i < m; ++i) {
          y = step(y);
          q = (q * abs(x - y)) % n;
        }
        g = gcd_int(q, n);
        k += m;
        iterations += m;
      }
      r *= 2;
    } while (g == 1 && iterations < kMaxIterations);
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd_int(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

void split_into(const ExactInt& n, std::map<ExactInt, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  const ExactInt f = pollard_brent(n);
  if (f == 0) throw Error(ErrorCode::BoundExceeded, "rho failed to split " + to_string(n));
  split_into(f, out);
  split_into(n / f, out);
}

}  // namespace

ExactInt Factorization::value() const {
  ExactInt v = unit;
  for (const auto& f : factors) v *= pow_int(f.prime, f.exponent);
  return v;
}

std::vector<ExactInt> Factorization::primes() const {
  std::vector<ExactInt> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(f.prime);
  return out;
}

const ExactInt& desk_bound() {
  static const ExactInt bound = ExactInt(1) << 128;
  return bound;
}

Factorization factorize(const ExactInt& n, const ExactInt& bound) {
  if (n == 0) throw Error(ErrorCode::ZeroInput, "factorize(0)");
  Factorization result;
  result.unit = n < 0 ? -1 : 1;
  ExactInt m = abs(n);
  if (m > bound) throw Error(ErrorCode::BoundExceeded, "|n| exceeds factorization bound");

  std::map<ExactInt, unsigned> found;
  for (const std::uint64_t p : trial_primes()) {
    if (m == 1) break;
    if (m.fits_ulong_p()) {
      std::uint64_t mm = m.get_ui();
      if (p * p > mm) break;
      unsigned e = 0;
      while (mm % p == 0) {
        mm /= p;
        ++e;
      }
      if (e) found[ExactInt(static_cast<unsigned long>(p))] = e;
      m = static_cast<unsigned long>(mm);
    } else {
      unsigned e = 0;
      while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++e;
      }
      if (e) found[ExactInt(static_cast<unsigned long>(p))] = e;
    }
  }
  if (m > 1) split_into(m, found);
  for (const auto& [p, e] : found) result.factors.push_back({p, e});
  return result;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (const std::uint64_t p : kSmall) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  for (const std::uint64_t a : kSmall) {
    if (!miller_rabin_u64(n, a)) return false;
  }
  return true;
}

bool is_prime(const ExactInt& n) {
  if (n < 2) return false;
  if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
  for (const std::uint64_t p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  return miller_rabin(n, 2) && strong_lucas(n);
}

ExactInt squarefree_part(const ExactInt& n) {
  if (n == 0) throw Error(ErrorCode::ZeroInput, "squarefree_part(0)");
  const Factorization f = factorize(n);
  ExactInt d = f.unit;
  for (const auto& pp : f.factors) {
    if (pp.exponent % 2 == 1) d *= pp.prime;
  }
  return d;
}

int jacobi(const ExactInt& a, const ExactInt& n) {
  if (n <= 0 || mpz_even_p(n.get_mpz_t())) {
    throw Error(ErrorCode::InvalidArgument, "jacobi requires odd positive modulus");
  }
  return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

int jacobi_u64(std::int64_t a_signed, std::uint64_t n) {
  if (n == 0 || n % 2 == 0) throw Error(ErrorCode::InvalidArgument, "jacobi requires odd positive modulus");
  std::uint64_t a = mod_floor(a_signed, n);
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::uint64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

unsigned valuation(const ExactInt& n, const ExactInt& p) {
  if (n == 0) throw Error(ErrorCode::ZeroInput, "valuation(0)");
  ExactInt m = n;
  unsigned v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

int rat_valuation(const ExactRat& x, const ExactInt& p) {
  if (x == 0) throw Error(ErrorCode::ZeroInput, "valuation(0)");
  return static_cast<int>(valuation(x.get_num(), p)) - static_cast<int>(valuation(x.get_den(), p));
}

bool is_square(const ExactInt& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

ExactInt pow_int(const ExactInt& base, unsigned exponent) {
  ExactInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) throw Error(ErrorCode::InvalidArgument, "inverse does not exist");
  return mod_floor(t, m);
}

std::uint64_t mod_floor(std::int64_t a, std::uint64_t m) {
  const auto mm = static_cast<__int128>(m);
  __int128 r = static_cast<__int128>(a) % mm;
  if (r < 0) r += mm;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t mod_floor(const ExactInt& a, std::uint64_t m) {
  return mpz_fdiv_ui(a.get_mpz_t(), m);
}

std::uint64_t multiplicative_order(std::uint64_t r, std::uint64_t n) {
  if (n == 1) return 1;
  r %= n;
  std::uint64_t order = 1;
  std::uint64_t x = r;
  while (x != 1) {
    x = mul_mod(x, r, n);
    ++order;
    if (order > n) throw Error(ErrorCode::InvalidArgument, "element is not a unit");
  }
  return order;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return primes;
}

std::uint64_t least_nonresidue(std::uint64_t p) {
  for (std::uint64_t a = 2; a < p; ++a) {
    if (jacobi_u64(static_cast<std::int64_t>(a), p) == -1) return a;
  }
  throw Error(ErrorCode::InvalidArgument, "no quadratic non-residue modulo " + std::to_string(p));
}

std::uint64_t to_u64(const ExactInt& n) {
  if (n < 0 || !n.fits_ulong_p()) throw Error(ErrorCode::BoundExceeded, "value does not fit in 64 bits");
  return n.get_ui();
}

std::int64_t to_i64(const ExactInt& n) {
  if (!n.fits_slong_p()) throw Error(ErrorCode::BoundExceeded, "value does not fit in 64 bits");
  return n.get_si();
}

bool fits_i64(const ExactInt& n) { return n.fits_slong_p(); }

std::string to_string(const ExactInt& n) { return n.get_str(10); }

std::string to_string(const ExactRat& x) { return x.get_str(10); }

ExactInt parse_int(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '+'; }), s.end());
  ExactInt v;
  if (s.empty() || v.set_str(s, 10) != 0)
    throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(text) + "'");
  return v;
}

ExactRat parse_rat(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '+'; }), s.end());
  ExactRat v;
  if (s.empty() || v.set_str(s, 10) != 0)
    throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
  v.canonicalize();
  if (v.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator");
  return v;
}

}  // namespace shadiv
