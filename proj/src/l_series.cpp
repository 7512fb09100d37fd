#include "shadiv/l_series.hpp"

#include "shadiv/finite_field.hpp"

#include <cmath>
#include <numbers>

namespace shadiv {

ExactInt WeierstrassModel::b8() const {
  return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
}

ExactInt WeierstrassModel::discriminant() const {
  const ExactInt B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
  return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

WeierstrassModel WeierstrassModel::change(const ExactInt& r, const ExactInt& s, const ExactInt& t) const {
  WeierstrassModel m;
  m.a1 = a1 + 2 * s;
  m.a2 = a2 - s * a1 + 3 * r - s * s;
  m.a3 = a3 + r * a1 + 2 * t;
  m.a4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
  m.a6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
  return m;
}

WeierstrassModel WeierstrassModel::scale_down(const ExactInt& p) const {
  WeierstrassModel m;
  m.a1 = a1 / p;
  m.a2 = a2 / pow_int(p, 2);
  m.a3 = a3 / pow_int(p, 3);
  m.a4 = a4 / pow_int(p, 4);
  m.a6 = a6 / pow_int(p, 6);
  return m;
}

namespace {

bool divides(const ExactInt& d, const ExactInt& n) { return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0; }

ExactInt mod(const ExactInt& a, const ExactInt& m) {
  ExactInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

unsigned val(const ExactInt& n, const ExactInt& p) { return n == 0 ? 1u << 30 : valuation(n, p); }

// Multiple root mod p (p > 3) of a polynomial given low degree first, via gcd(f, f').
std::optional<ExactInt> multiple_root_mod(const std::vector<ExactInt>& f, const ExactInt& p) {
  const std::uint64_t pu = to_u64(p);
  ModPoly F, dF;
  for (const auto& c : f) F.push_back(mod_floor(c, pu));
  for (std::size_t i = 1; i < F.size(); ++i) dF.push_back(mul_mod(F[i], i % pu, pu));
  modpoly::trim(F);
  modpoly::trim(dF);
  if (F.empty()) return ExactInt(0);
  if (dF.empty()) return std::nullopt;
  const ModPoly g = modpoly::gcd(F, dF, pu);
  if (g.size() == 2) return ExactInt(static_cast<unsigned long>((pu - g[0]) % pu));
  if (g.size() == 3) {
    // (x - X)^2 = x^2 - 2X x + X^2
    const std::uint64_t half = (pu + 1) / 2;
    return ExactInt(static_cast<unsigned long>(mul_mod((pu - g[1]) % pu, half, pu)));
  }
  return std::nullopt;
}

// Roots mod p of c2 x^2 + c1 x + c0, by enumeration.
std::vector<ExactInt> quadratic_roots(const ExactInt& c2, const ExactInt& c1, const ExactInt& c0, const ExactInt& p) {
  std::vector<ExactInt> out;
  const std::uint64_t pu = to_u64(p);
  for (std::uint64_t x = 0; x < pu; ++x) {
    const ExactInt X = static_cast<unsigned long>(x);
    if (divides(p, (c2 * X + c1) * X + c0)) out.push_back(X);
  }
  return out;
}

// Does c2 X^2 + c1 X + c0 have distinct roots over the algebraic closure of F_p?
bool distinct_roots(const ExactInt& c2, const ExactInt& c1, const ExactInt& c0, const ExactInt& p) {
  if (p == 2) {
    // Separable iff the linear coefficient is odd (c2 a unit here).
    return !divides(p, c1);
  }
  return !divides(p, c1 * c1 - 4 * c2 * c0);
}

// Double root of a quadratic with vanishing discriminant mod p.
ExactInt double_root(const ExactInt& c2, const ExactInt& c1, const ExactInt& c0, const ExactInt& p) {
  if (p > 3) {
    ExactInt inv;
    mpz_invert(inv.get_mpz_t(), ExactInt(2 * c2).get_mpz_t(), p.get_mpz_t());
    return mod(-c1 * inv, p);
  }
  const auto roots = quadratic_roots(c2, c1, c0, p);
  if (roots.empty()) throw Error(ErrorCode::ConductorUnavailable, "no double root in Tate's algorithm");
  return roots.front();
}

struct CubicRoots {
  int distinct = 0;  // number of distinct roots over the algebraic closure
  std::optional<ExactInt> multiple_root;
};

// T^3 + b T^2 + c T + d mod p.
CubicRoots cubic_roots(const ExactInt& b, const ExactInt& c, const ExactInt& d, const ExactInt& p) {
  CubicRoots out;
  const ExactInt disc = b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d;
  if (!divides(p, disc)) {
    out.distinct = 3;
    return out;
  }
  if (p > 3) {
    const auto X = multiple_root_mod({d, c, b, 1}, p);
    if (!X) throw Error(ErrorCode::ConductorUnavailable, "cubic with vanishing discriminant has no multiple root");
    out.multiple_root = *X;
    out.distinct = divides(p, 3 * *X + b) ? 1 : 2;
    return out;
  }
  const std::uint64_t pu = to_u64(p);
  for (std::uint64_t x = 0; x < pu; ++x) {
    const ExactInt X = static_cast<unsigned long>(x);
    const ExactInt f = ((X + b) * X + c) * X + d;
    const ExactInt df = (3 * X + 2 * b) * X + c;
    if (divides(p, f) && divides(p, df)) {
      out.multiple_root = X;
      // f(X + u) = f(X) + f'(X) u + (3X + b) u^2 + u^3.
      out.distinct = divides(p, 3 * X + b) ? 1 : 2;
      return out;
    }
  }
  throw Error(ErrorCode::ConductorUnavailable, "cubic with vanishing discriminant has no multiple root mod p");
}

LocalReduction finish(LocalReduction r, const WeierstrassModel& m, unsigned n, unsigned f, std::string kodaira,
                      ReductionKind kind) {
  r.minimal = m;
  r.disc_valuation = n;
  r.conductor_exponent = f;
  r.kodaira = std::move(kodaira);
  r.kind = kind;
  return r;
}

}  // namespace

LocalReduction tate_local(const WeierstrassModel& E0, const ExactInt& p) {
  if (E0.discriminant() == 0) throw Error(ErrorCode::ZeroInput, "singular Weierstrass model");
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, to_string(p) + " is not prime");
  LocalReduction out;
  out.p = p;
  WeierstrassModel E = E0;
  const ExactInt p2 = p * p, p3 = p2 * p, p4 = p3 * p;

  for (int round = 0; round < 64; ++round) {
    const unsigned n = val(E.discriminant(), p);
    if (n == 0) return finish(out, E, 0, 0, "I0", ReductionKind::Good);

    // Move the singular point of the reduction to (0, 0).
    {
      const std::uint64_t pu = to_u64(p);
      bool moved = false;
      if (p == 2 || p == 3) {
        for (std::uint64_t x = 0; x < pu && !moved; ++x) {
          for (std::uint64_t y = 0; y < pu && !moved; ++y) {
            const ExactInt X = static_cast<unsigned long>(x), Y = static_cast<unsigned long>(y);
            const ExactInt F = Y * Y + E.a1 * X * Y + E.a3 * Y - X * X * X - E.a2 * X * X - E.a4 * X - E.a6;
            const ExactInt Fx = E.a1 * Y - 3 * X * X - 2 * E.a2 * X - E.a4;
            const ExactInt Fy = 2 * Y + E.a1 * X + E.a3;
            if (divides(p, F) && divides(p, Fx) && divides(p, Fy)) {
              E = E.change(X, 0, Y);
              moved = true;
            }
          }
        }
      } else {
        // 4 (y + (a1 x + a3)/2)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6; the singular x is a double root.
        const auto X = multiple_root_mod({E.b6(), 2 * E.b4(), E.b2(), 4}, p);
        if (X) {
          const ExactInt inv2 = (p + 1) / 2;
          const ExactInt Y = mod(-(E.a1 * *X + E.a3) * inv2, p);
          E = E.change(*X, 0, Y);
          moved = true;
        }
      }
      if (!moved) throw Error(ErrorCode::ConductorUnavailable, "no singular point mod " + to_string(p));
    }

    if (!divides(p, E.b2())) {
      const bool split = p == 2 ? !quadratic_roots(1, E.a1, -E.a2, p).empty() : jacobi(E.b2(), p) == 1;
      return finish(out, E, n, 1, "I" + std::to_string(n), split ? ReductionKind::Split : ReductionKind::NonSplit);
    }
    if (!divides(p2, E.a6)) return finish(out, E, n, n, "II", ReductionKind::Additive);
    if (!divides(p3, E.b8())) return finish(out, E, n, n - 1, "III", ReductionKind::Additive);
    if (!divides(p3, E.b6())) return finish(out, E, n, n - 2, "IV", ReductionKind::Additive);

    // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
    {
      ExactInt s, t;
      if (p == 2) {
        s = mod(E.a2, 2);
        t = 2 * mod(E.a6 / 4, 2);
      } else {
        const ExactInt inv2 = (p + 1) / 2;
        s = mod(-E.a1 * inv2, p);
        t = mod(-E.a3 * ((p2 + 1) / 2), p2);
      }
      E = E.change(0, s, t);
      if (!divides(p, E.a1) || !divides(p, E.a2) || !divides(p2, E.a3) || !divides(p2, E.a4) ||
          !divides(p3, E.a6)) {
        throw Error(ErrorCode::ConductorUnavailable, "normalization failed in Tate's algorithm");
      }
    }

    const ExactInt b = E.a2 / p, c = E.a4 / p2, d = E.a6 / p3;
    const CubicRoots cr = cubic_roots(b, c, d, p);
    if (cr.distinct == 3) return finish(out, E, n, n - 4, "I0*", ReductionKind::Additive);

    if (cr.distinct == 2) {
      // Double root to 0, then peel off the I_m* chain.
      E = E.change(*cr.multiple_root * p, 0, 0);
      for (unsigned k = 1; k <= n; ++k) {
        if (k % 2 == 1) {
          const ExactInt py = pow_int(p, (k + 3) / 2);
          const ExactInt c1 = E.a3 / py, c0 = -(E.a6 / (py * py));
          if (distinct_roots(1, c1, c0, p)) {
            return finish(out, E, n, n - 4 - k, "I" + std::to_string(k) + "*", ReductionKind::Additive);
          }
          E = E.change(0, 0, double_root(1, c1, c0, p) * py);
        } else {
          const ExactInt px = pow_int(p, (k + 2) / 2);
          const ExactInt c2 = E.a2 / p, c1 = E.a4 / (px * p), c0 = E.a6 / (px * px * p);
          if (distinct_roots(c2, c1, c0, p)) {
            return finish(out, E, n, n - 4 - k, "I" + std::to_string(k) + "*", ReductionKind::Additive);
          }
          E = E.change(double_root(c2, c1, c0, p) * px, 0, 0);
        }
      }
      throw Error(ErrorCode::ConductorUnavailable, "I_m* chain did not terminate");
    }

    // Triple root.
    E = E.change(*cr.multiple_root * p, 0, 0);
    {
      const ExactInt c1 = E.a3 / p2, c0 = -(E.a6 / p4);
      if (distinct_roots(1, c1, c0, p)) return finish(out, E, n, n - 6, "IV*", ReductionKind::Additive);
      E = E.change(0, 0, double_root(1, c1, c0, p) * p2);
    }
    if (!divides(p4, E.a4)) return finish(out, E, n, n - 7, "III*", ReductionKind::Additive);
    if (!divides(p4 * p2, E.a6)) return finish(out, E, n, n - 8, "II*", ReductionKind::Additive);
    E = E.scale_down(p);
  }
  throw Error(ErrorCode::ConductorUnavailable, "Tate's algorithm did not terminate at " + to_string(p));
}

ReductionData reduction_data(const WeierstrassModel& E) {
  const ExactInt disc = E.discriminant();
  if (disc == 0) throw Error(ErrorCode::ZeroInput, "singular Weierstrass model");
  ReductionData rd;
  rd.conductor = 1;
  for (const auto& p : factorize(disc).primes()) {
    rd.bad.push_back(tate_local(E, p));
    rd.conductor *= pow_int(p, rd.bad.back().conductor_exponent);
  }
  return rd;
}

long trace_by_counting(const WeierstrassModel& E, std::uint64_t p) {
  const auto reduce = [p](const ExactInt& a) { return mod_floor(a, p); };
  const std::uint64_t a1 = reduce(E.a1), a2 = reduce(E.a2), a3 = reduce(E.a3), a4 = reduce(E.a4),
                      a6 = reduce(E.a6);
  long count = 1;  // point at infinity
  if (p == 2 || p == 3) {
    for (std::uint64_t x = 0; x < p; ++x)
      for (std::uint64_t y = 0; y < p; ++y) {
        const std::uint64_t lhs = (y * y + a1 * x * y + a3 * y) % p;
        const std::uint64_t rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p;
        if (lhs == rhs) ++count;
      }
    return static_cast<long>(p) + 1 - count;
  }
  // 4 rhs after completing the square: 4x^3 + b2 x^2 + 2 b4 x + b6.
  const std::uint64_t B2 = reduce(E.b2()), B4 = reduce(E.b4()), B6 = reduce(E.b6());
  std::vector<signed char> chi(p, -1);
  chi[0] = 0;
  for (std::uint64_t y = 1; y <= p / 2; ++y) chi[mul_mod(y, y, p)] = 1;
  long sum = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t g = (4 * x + B2) % p;
    g = (mul_mod(g, x, p) + 2 * B4) % p;
    g = (mul_mod(g, x, p) + B6) % p;
    sum += chi[g];
  }
  return -sum;
}

std::vector<long> dirichlet_coefficients(const WeierstrassModel& E, const ReductionData& red, std::size_t n) {
  std::vector<long> a(n + 1, 0);
  if (n == 0) return a;
  a[1] = 1;
  std::vector<std::uint64_t> spf(n + 1, 0);
  for (std::size_t i = 2; i <= n; ++i) {
    if (spf[i]) continue;
    for (std::size_t j = i; j <= n; j += i)
      if (!spf[j]) spf[j] = i;
  }
  for (std::size_t p = 2; p <= n; ++p) {
    if (spf[p] != p) continue;
    long ap = 0;
    bool good = true;
    const LocalReduction* local = nullptr;
    for (const auto& r : red.bad)
      if (r.p == static_cast<unsigned long>(p)) local = &r;
    if (local) {
      switch (local->kind) {
        case ReductionKind::Good: ap = trace_by_counting(local->minimal, p); break;
        case ReductionKind::Split: ap = 1, good = false; break;
        case ReductionKind::NonSplit: ap = -1, good = false; break;
        case ReductionKind::Additive: ap = 0, good = false; break;
      }
    } else {
      ap = trace_by_counting(E, p);
    }
    // a_{p^k} by the Hecke recursion.
    std::size_t pk = p;
    long prev = 1, cur = ap;
    while (true) {
      a[pk] = cur;
      if (pk > n / p) break;
      pk *= p;
      const long next = good ? ap * cur - static_cast<long>(p) * prev : ap * cur;
      prev = cur;
      cur = next;
    }
  }
  for (std::size_t m = 2; m <= n; ++m) {
    const std::uint64_t p = spf[m];
    std::size_t q = m;
    while (q % p == 0) q /= p;
    if (q != 1) a[m] = a[m / q] * a[q];
  }
  return a;
}

LValueEstimate l_value_approx(const WeierstrassModel& E, std::size_t terms, const std::optional<ExactInt>& conductor) {
  if (terms < 2) throw Error(ErrorCode::InvalidArgument, "l_value_approx needs at least 2 terms");
  LValueEstimate out;
  const ReductionData red = reduction_data(E);
  out.conductor = conductor ? *conductor : red.conductor;
  out.terms = terms;
  const std::vector<long> a = dirichlet_coefficients(E, red, terms);
  const long double sqrtN = std::sqrt(static_cast<long double>(out.conductor.get_d()));
  const long double two_pi = 2 * std::numbers::pi_v<long double>;

  auto partial = [&](long double A, int w, std::size_t upto) {
    long double s = 0;
    for (std::size_t n = 1; n <= upto; ++n) {
      if (a[n] == 0) continue;
      const long double nn = static_cast<long double>(n);
      s += a[n] / nn * (std::exp(-two_pi * nn * A / sqrtN) + w * std::exp(-two_pi * nn / (A * sqrtN)));
    }
    return s;
  };
  // The right sign makes the sum independent of A.
  const long double plus = std::fabs(partial(1.1L, 1, terms) - partial(1.25L, 1, terms));
  const long double minus = std::fabs(partial(1.1L, -1, terms) - partial(1.25L, -1, terms));
  out.root_number = plus <= minus ? 1 : -1;

  out.value = static_cast<double>(partial(1, out.root_number, terms));
  out.previous = static_cast<double>(partial(1, out.root_number, terms / 2));
  out.change = std::fabs(out.value - out.previous);
  const long double q = std::exp(-two_pi / sqrtN);
  out.tail_bound = static_cast<double>(4 * std::pow(q, static_cast<long double>(terms + 1)) / (1 - q));
  return out;
}

}  // namespace shadiv
