#include "shadiv/finite_field.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace shadiv {

namespace modpoly {

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

namespace {

ModPoly make_monic(const ModPoly& a, std::uint64_t r) {
  if (a.empty()) return a;
  const std::uint64_t inv = inv_mod(a.back(), r);
  ModPoly c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = mul_mod(a[i], inv, r);
  return c;
}

// Remainder and quotient of a by nonzero m.
std::pair<ModPoly, ModPoly> divmod(const ModPoly& a, const ModPoly& m, std::uint64_t r) {
  if (m.empty()) throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
  ModPoly rem_part = a;
  trim(rem_part);
  if (rem_part.size() < m.size()) return {ModPoly{}, rem_part};
  ModPoly q(rem_part.size() - m.size() + 1, 0);
  const std::uint64_t lead_inv = inv_mod(m.back(), r);
  for (size_t i = rem_part.size(); i-- >= m.size();) {
    const std::uint64_t c = mul_mod(rem_part[i], lead_inv, r);
    if (c != 0) {
      const size_t shift = i - (m.size() - 1);
      q[shift] = c;
      for (size_t j = 0; j < m.size(); ++j) {
        const std::uint64_t t = mul_mod(c, m[j], r);
        rem_part[shift + j] = (rem_part[shift + j] + r - t) % r;
      }
    }
    if (i == 0) break;
  }
  trim(rem_part);
  trim(q);
  return {q, rem_part};
}

}  // namespace

ModPoly sub(const ModPoly& a, const ModPoly& b, std::uint64_t r) {
  ModPoly c(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] = (c[i] + r - b[i] % r) % r;
  trim(c);
  return c;
}

ModPoly mul(const ModPoly& a, const ModPoly& b, std::uint64_t r) {
  if (a.empty() || b.empty()) return {};
  std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      acc[i + j] = (acc[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % r;
    }
  }
  ModPoly c(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) c[i] = static_cast<std::uint64_t>(acc[i]);
  trim(c);
  return c;
}

ModPoly rem(const ModPoly& a, const ModPoly& m, std::uint64_t r) { return divmod(a, m, r).second; }

ModPoly quot(const ModPoly& a, const ModPoly& m, std::uint64_t r) { return divmod(a, m, r).first; }

ModPoly gcd(ModPoly a, ModPoly b, std::uint64_t r) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    ModPoly t = rem(a, b, r);
    a = std::move(b);
    b = std::move(t);
  }
  return make_monic(a, r);
}

ModPoly powmod(const ModPoly& base, const ExactInt& e, const ModPoly& m, std::uint64_t r) {
  ModPoly result{1 % r};
  trim(result);
  result = rem(result, m, r);
  if (e == 0) return result;
  const ModPoly b = rem(base, m, r);
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = rem(mul(result, result, r), m, r);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, b, r), m, r);
  }
  return result;
}

bool is_irreducible(const ModPoly& f_in, std::uint64_t r) {
  ModPoly f = f_in;
  trim(f);
  if (f.size() < 2) return false;
  f = make_monic(f, r);
  const unsigned n = static_cast<unsigned>(f.size() - 1);
  if (n == 1) return true;
  const ModPoly x{0, 1};
  const ExactInt rr = static_cast<unsigned long>(r);
  // x^(r^n) == x mod f
  ExactInt rn = pow_int(rr, n);
  if (sub(powmod(x, rn, f, r), x, r) != ModPoly{}) return false;
  const Factorization nf = factorize(n);
  for (const auto& q : nf.factors) {
    const unsigned d = n / static_cast<unsigned>(q.prime.get_ui());
    const ModPoly h = sub(powmod(x, pow_int(rr, d), f, r), x, r);
    if (gcd(h, f, r).size() != 1) return false;
  }
  return true;
}

bool lex_less(const ModPoly& a, const ModPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace modpoly

FiniteField::FiniteField(std::uint64_t r, ModPoly modulus) : r_(r), modulus_(std::move(modulus)) {
  modpoly::trim(modulus_);
  if (!is_prime_u64(r_)) throw Error(ErrorCode::InvalidArgument, "field characteristic must be prime");
  if (modulus_.size() < 2 || modulus_.back() != 1)
    throw Error(ErrorCode::InvalidArgument, "field modulus must be monic of degree >= 1");
  if (!modpoly::is_irreducible(modulus_, r_)) throw Error(ErrorCode::InvalidArgument, "field modulus is reducible");
}

ExactInt FiniteField::order() const { return pow_int(ExactInt(static_cast<unsigned long>(r_)), degree()); }

FiniteField::Elem FiniteField::zero() const { return Elem(degree(), 0); }

FiniteField::Elem FiniteField::one() const {
  Elem e = zero();
  e[0] = 1;
  return e;
}

FiniteField::Elem FiniteField::from_int(const ExactInt& n) const {
  Elem e = zero();
  e[0] = mod_floor(n, r_);
  return e;
}

FiniteField::Elem FiniteField::from_poly(const ModPoly& a) const {
  ModPoly reduced;
  reduced.reserve(a.size());
  for (const auto c : a) reduced.push_back(c % r_);
  modpoly::trim(reduced);
  reduced = modpoly::rem(reduced, modulus_, r_);
  Elem e = zero();
  std::copy(reduced.begin(), reduced.end(), e.begin());
  return e;
}

FiniteField::Elem FiniteField::generator_root() const { return from_poly(ModPoly{0, 1}); }

bool FiniteField::is_zero(const Elem& a) const {
  return std::all_of(a.begin(), a.end(), [](std::uint64_t c) { return c == 0; });
}

bool FiniteField::is_one(const Elem& a) const { return a == one(); }

FiniteField::Elem FiniteField::add(const Elem& a, const Elem& b) const {
  Elem c(degree());
  for (unsigned i = 0; i < degree(); ++i) {
    c[i] = a[i] + b[i];
    if (c[i] >= r_) c[i] -= r_;
  }
  return c;
}

FiniteField::Elem FiniteField::sub(const Elem& a, const Elem& b) const {
  Elem c(degree());
  for (unsigned i = 0; i < degree(); ++i) c[i] = (a[i] + r_ - b[i]) % r_;
  return c;
}

FiniteField::Elem FiniteField::neg(const Elem& a) const { return sub(zero(), a); }

FiniteField::Elem FiniteField::mul(const Elem& a, const Elem& b) const {
  ModPoly pa(a.begin(), a.end()), pb(b.begin(), b.end());
  modpoly::trim(pa);
  modpoly::trim(pb);
  return from_poly(modpoly::mul(pa, pb, r_));
}

FiniteField::Elem FiniteField::pow(const Elem& a, const ExactInt& e) const {
  if (e < 0) return pow(inv(a), -e);
  ModPoly pa(a.begin(), a.end());
  modpoly::trim(pa);
  return from_poly(modpoly::powmod(pa, e, modulus_, r_));
}

FiniteField::Elem FiniteField::inv(const Elem& a) const {
  if (is_zero(a)) throw Error(ErrorCode::ZeroInput, "inverse of zero");
  return pow(a, order() - 2);
}

FiniteField::Elem FiniteField::element_at(std::uint64_t k) const {
  Elem e = zero();
  for (unsigned i = 0; i < degree() && k > 0; ++i) {
    e[i] = k % r_;
    k /= r_;
  }
  return e;
}

bool is_pth_power(const FiniteField& field, const FiniteField::Elem& z, std::uint64_t p) {
  if (field.is_zero(z)) throw Error(ErrorCode::ZeroInput, "p-th power test of zero");
  const ExactInt n = field.unit_group_order();
  ExactInt g;
  const ExactInt pp = static_cast<unsigned long>(p);
  mpz_gcd(g.get_mpz_t(), pp.get_mpz_t(), n.get_mpz_t());
  return field.is_one(field.pow(z, n / g));
}

std::optional<FiniteField::Elem> pth_root(const FiniteField& field, const FiniteField::Elem& z, std::uint64_t p) {
  if (field.is_zero(z)) return field.zero();
  const ExactInt n = field.unit_group_order();
  const ExactInt pp = static_cast<unsigned long>(p);
  if (n % pp != 0) {
    ExactInt d;
    mpz_invert(d.get_mpz_t(), pp.get_mpz_t(), n.get_mpz_t());
    return field.pow(z, d);
  }
  if (!is_pth_power(field, z, p)) return std::nullopt;

  unsigned s = 0;
  ExactInt t = n;
  while (t % pp == 0) {
    t /= pp;
    ++s;
  }
  ExactInt d = 0;
  if (t > 1) mpz_invert(d.get_mpz_t(), pp.get_mpz_t(), t.get_mpz_t());
  const FiniteField::Elem x0 = field.pow(z, d);
  // x0^p = z * b with b in the Sylow p-subgroup.
  const FiniteField::Elem b = field.mul(field.pow(x0, pp), field.inv(z));

  // Constants of F_r are often all p-th powers in an extension, so candidates
  // are taken from x + k.
  FiniteField::Elem c;
  const FiniteField::Elem x = field.degree() > 1 ? field.generator_root() : field.zero();
  for (std::uint64_t k = 1;; ++k) {
    c = field.add(x, field.from_int(ExactInt(static_cast<unsigned long>(k))));
    if (!field.is_zero(c) && !is_pth_power(field, c, p)) break;
  }
  const FiniteField::Elem g = field.pow(c, t);  // order p^s
  const FiniteField::Elem gamma = field.pow(g, pow_int(pp, s - 1));
  const FiniteField::Elem y = field.inv(b);

  // Discrete log of y to base g, digit by digit.
  ExactInt e = 0;
  for (unsigned i = 0; i < s; ++i) {
    const FiniteField::Elem partial = field.mul(field.pow(g, -e), y);
    const FiniteField::Elem h = field.pow(partial, pow_int(pp, s - 1 - i));
    std::uint64_t digit = 0;
    FiniteField::Elem acc = field.one();
    while (acc != h) {
      acc = field.mul(acc, gamma);
      ++digit;
      if (digit >= p) throw Error(ErrorCode::InvalidArgument, "discrete log failed in p-th root");
    }
    e += ExactInt(static_cast<unsigned long>(digit)) * pow_int(pp, i);
  }
  if (e % pp != 0) return std::nullopt;
  const FiniteField::Elem root = field.mul(x0, field.pow(g, e / pp));
  if (field.pow(root, pp) != z) throw Error(ErrorCode::InvalidArgument, "p-th root verification failed");
  return root;
}

std::vector<ModPoly> cyclotomic_factors_mod(std::uint64_t p, std::uint64_t r) {
  if (!is_prime_u64(p) || !is_prime_u64(r) || p == r) {
    throw Error(ErrorCode::InvalidArgument, "cyclotomic factorization needs distinct primes p, r");
  }
  const ModPoly phi(p, 1);  // 1 + x + ... + x^(p-1)
  const unsigned f = static_cast<unsigned>(multiplicative_order(r % p, p));
  std::vector<ModPoly> factors;
  if (f == p - 1) {
    factors.push_back(phi);
    return factors;
  }

  // Equal-degree splitting with a fixed-seed generator; the factor set is unique
  // so the sorted output does not depend on the seed.
  std::mt19937_64 rng(0x5eed5eedULL);
  const ExactInt rr = static_cast<unsigned long>(r);
  const ExactInt half_exp = (pow_int(rr, f) - 1) / 2;
  std::function<void(const ModPoly&)> split = [&](const ModPoly& g) {
    const size_t deg = g.size() - 1;
    if (deg == f) {
      factors.push_back(g);
      return;
    }
    for (;;) {
      ModPoly a(deg, 0);
      for (auto& c : a) c = rng() % r;
      modpoly::trim(a);
      if (a.size() < 2) continue;
      ModPoly h;
      if (r == 2) {
        ModPoly term = a;
        h = a;
        for (unsigned i = 1; i < f; ++i) {
          term = modpoly::rem(modpoly::mul(term, term, r), g, r);
          h = modpoly::sub(h, modpoly::sub(ModPoly{}, term, r), r);
        }
      } else {
        h = modpoly::sub(modpoly::powmod(a, half_exp, g, r), ModPoly{1}, r);
      }
      const ModPoly d = modpoly::gcd(h, g, r);
      if (d.size() > 1 && d.size() < g.size()) {
        split(d);
        ModPoly other = modpoly::quot(g, d, r);
        split(modpoly::gcd(other, other, r));
        return;
      }
    }
  };
  split(phi);
  std::sort(factors.begin(), factors.end(), modpoly::lex_less);
  return factors;
}

ResidueField build_residue_field(std::uint64_t p, std::uint64_t r) {
  if (!is_prime_u64(p)) throw Error(ErrorCode::NonPrime, "p = " + std::to_string(p));
  if (!is_prime_u64(r)) throw Error(ErrorCode::NonPrime, "r = " + std::to_string(r));
  if (r == p) throw Error(ErrorCode::ExcludedPrime, "residue field requires r != p");
  const std::vector<ModPoly> factors = cyclotomic_factors_mod(p, r);
  FiniteField field(r, factors.front());
  FiniteField::Elem zeta = field.generator_root();
  return ResidueField{p, r, std::move(field), std::move(zeta)};
}

}  // namespace shadiv
