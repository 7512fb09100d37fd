#include "shadiv/local_fields.hpp"

#include <algorithm>
#include <cstdlib>

namespace shadiv {

Place Place::real() { return Place(true, ExactInt(0)); }

Place Place::finite(const ExactInt& p) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, to_string(p) + " is not prime");
  return Place(false, p);
}

Place Place::parse(const std::string& label) {
  if (label == "real" || label == "inf" || label == "infinity") return real();
  return finite(parse_int(label));
}

const ExactInt& Place::prime() const {
  if (real_) throw Error(ErrorCode::InvalidArgument, "the real place has no prime");
  return prime_;
}

std::string Place::label() const { return real_ ? "real" : to_string(prime_); }

bool Place::operator<(const Place& o) const {
  if (real_ != o.real_) return !real_;
  return prime_ < o.prime_;
}

namespace {

ExactInt unit_part_int(const ExactRat& x, const ExactInt& p, int* val) {
  ExactInt num = x.get_num(), den = x.get_den();
  int v = 0;
  while (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) {
    num /= p;
    ++v;
  }
  while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) {
    den /= p;
    --v;
  }
  *val = v;
  // num/den and num*den share a square class.
  return num * den;
}

}  // namespace

SquareClass square_class(const ExactRat& x_in, const Place& v) {
  ExactRat x = x_in;
  x.canonicalize();
  if (x == 0) throw Error(ErrorCode::ZeroInput, "square class of zero");
  SquareClass c{v, x, 0, 1};
  if (v.is_real()) {
    c.tag = sgn(x) > 0 ? 1 : -1;
    return c;
  }
  int val = 0;
  const ExactInt u = unit_part_int(x, v.prime(), &val);
  c.valuation_parity = ((val % 2) + 2) % 2;
  if (v.prime() == 2) {
    c.tag = static_cast<int>(mod_floor(u, 8));
  } else {
    c.tag = jacobi(u, v.prime());
  }
  return c;
}

bool same_class(const ExactRat& x, const ExactRat& y, const Place& v) {
  return square_class(x, v) == square_class(y, v);
}

SquareClass class_product(const SquareClass& a, const SquareClass& b) {
  if (!(a.place == b.place)) throw Error(ErrorCode::InvalidArgument, "square classes at different places");
  SquareClass c{a.place, a.representative * b.representative, a.valuation_parity ^ b.valuation_parity, 1};
  c.representative.canonicalize();
  if (a.place.is_finite() && a.place.prime() == 2) {
    c.tag = (a.tag * b.tag) % 8;
  } else {
    c.tag = a.tag * b.tag;
  }
  return c;
}

ExactInt SquareClass::canonical() const {
  if (place.is_real()) return tag;
  const ExactInt& p = place.prime();
  ExactInt rep = valuation_parity ? p : ExactInt(1);
  if (p == 2) return rep * tag;
  if (tag == -1) rep *= static_cast<unsigned long>(least_nonresidue(to_u64(p)));
  return rep;
}

std::vector<ExactInt> square_class_representatives(const Place& v) {
  if (v.is_real()) return {1, -1};
  const ExactInt& p = v.prime();
  if (p == 2) return {1, 3, 5, 7, 2, 6, 10, 14};
  const ExactInt n = static_cast<unsigned long>(least_nonresidue(to_u64(p)));
  return {1, n, p, n * p};
}

SquareClassPair square_class_pair(const ExactRat& d1, const ExactRat& d2, const Place& v) {
  return {square_class(d1, v), square_class(d2, v)};
}

HenselResult hensel_roots(const IntPoly& f_in, const ExactInt& p, unsigned k) {
  if (f_in.is_zero()) throw Error(ErrorCode::ZeroInput, "hensel_roots of the zero polynomial");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "precision must be >= 1");
  // Strip the p-part of the content; roots are unchanged.
  std::vector<ExactInt> c = f_in.coeffs();
  auto divisible = [&](const ExactInt& a) { return mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t()) != 0; };
  while (std::all_of(c.begin(), c.end(), divisible)) {
    for (auto& a : c) a /= p;
  }
  const IntPoly f(c);
  const IntPoly df = f.derivative();

  HenselResult result;
  result.p = p;
  result.precision = k;

  std::vector<ExactInt> frontier;
  const std::uint64_t pu = to_u64(p);
  for (std::uint64_t a = 0; a < pu; ++a) {
    const ExactInt x = static_cast<unsigned long>(a);
    if (mpz_divisible_p(f(x).get_mpz_t(), p.get_mpz_t())) frontier.push_back(x);
  }
  ExactInt pj = p;
  for (unsigned level = 1; level <= k && !frontier.empty(); ++level) {
    std::vector<ExactInt> next;
    for (const ExactInt& a : frontier) {
      const ExactInt fa = f(a);
      const ExactInt da = df(a);
      if (fa == 0) {
        result.certified.push_back({a, level, kExactZeroValuation, da == 0 ? 0u : valuation(da, p)});
        continue;
      }
      const unsigned vf = valuation(fa, p);
      if (da != 0) {
        const unsigned vd = valuation(da, p);
        if (vf > 2 * vd) {
          result.certified.push_back({a, level, vf, vd});
          continue;
        }
      }
      if (level == k) {
        result.undecided.push_back(a);
        continue;
      }
      const ExactInt pnext = pj * p;
      for (std::uint64_t i = 0; i < pu; ++i) {
        const ExactInt b = a + static_cast<unsigned long>(i) * pj;
        if (mpz_divisible_p(f(b).get_mpz_t(), pnext.get_mpz_t())) next.push_back(b);
      }
    }
    frontier = std::move(next);
    pj *= p;
  }
  return result;
}

std::optional<unsigned> precision_override() {
  const char* env = std::getenv("SHA_NONDIV_MAXPREC");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || v == 0) return std::nullopt;
  return static_cast<unsigned>(v);
}

unsigned max_precision(const IntPoly& f, const ExactInt& p) {
  if (auto o = precision_override()) return *o;
  if (f.degree() < 1) return 3;
  const ExactInt d = discriminant(f);
  const unsigned vd = d == 0 ? 0 : valuation(d, p);
  return 2 * vd + 3;
}

HenselResult decide_roots(const IntPoly& f, const ExactInt& p) {
  const unsigned kmax = max_precision(f, p);
  HenselResult last;
  for (const unsigned k : {1u, 3u, 5u, kmax}) {
    if (k > kmax) continue;
    last = hensel_roots(f, p, k);
    if (!last.undecided_flag()) return last;
  }
  throw Error(ErrorCode::PrecisionExhausted,
              "undecided residue " + to_string(last.undecided.front()) + " mod " + to_string(p) + "^" +
                  std::to_string(last.precision));
}

ExactInt newton_lift(const IntPoly& f, const ExactInt& p, const HenselRoot& root) {
  const ExactInt& a = root.residue;
  const ExactInt fa = f(a);
  if (fa == 0) return a;
  const ExactInt da = f.derivative()(a);
  const unsigned vd = root.derivative_valuation;
  const ExactInt pv = pow_int(p, vd);
  const ExactInt w = da / pv;
  const ExactInt modulus = pow_int(p, 2 * root.value_valuation + 2);
  ExactInt w_inv;
  mpz_invert(w_inv.get_mpz_t(), w.get_mpz_t(), modulus.get_mpz_t());
  ExactInt step = (fa / pv) * w_inv;
  mpz_fdiv_r(step.get_mpz_t(), step.get_mpz_t(), modulus.get_mpz_t());
  ExactInt lifted = a - step;
  mpz_fdiv_r(lifted.get_mpz_t(), lifted.get_mpz_t(), modulus.get_mpz_t());
  return lifted;
}

std::optional<LocalRoot> local_linear_factor(const IntPoly& f, const Place& v) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroInput, "local_linear_factor of zero polynomial");
  if (v.is_real()) {
    const auto roots = isolate_real_roots(f, ExactRat(1, 1 << 20));
    if (roots.empty()) return std::nullopt;
    return LocalRoot{v, std::nullopt, false, roots.front()};
  }
  const ExactInt& p = v.prime();
  const HenselResult integral = decide_roots(f, p);
  if (!integral.certified.empty()) return LocalRoot{v, integral.certified.front(), false, std::nullopt};
  if (mpz_divisible_p(f.leading().get_mpz_t(), p.get_mpz_t())) {
    const IntPoly rev = f.reversed();
    const HenselResult at_inf = decide_roots(rev, p);
    for (const auto& r : at_inf.certified) {
      if (mpz_divisible_p(r.residue.get_mpz_t(), p.get_mpz_t())) return LocalRoot{v, r, true, std::nullopt};
    }
  }
  return std::nullopt;
}

}  // namespace shadiv
