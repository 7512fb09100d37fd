#include "shadiv/cyclic_covers.hpp"

#include <algorithm>

#include "shadiv/errors.hpp"
#include "shadiv/poly.hpp"

namespace shadiv {

namespace {

void require_prime(std::uint64_t n, const char* what) {
  if (!is_prime_u64(n))
    throw Error(ErrorCode::NonPrime, std::string(what) + " = " + std::to_string(n) + " is not prime");
}

ExactInt big(std::uint64_t n) { return ExactInt(static_cast<unsigned long>(n)); }

// x^p - q over Z.
IntPoly binomial(std::uint64_t p, std::uint64_t q) {
  std::vector<ExactInt> c(p + 1, 0);
  c[0] = -big(q);
  c[p] = 1;
  return IntPoly(c);
}

}  // namespace

bool admissible(std::uint64_t p, std::uint64_t q) {
  require_prime(p, "p");
  require_prime(q, "q");
  const std::uint64_t m = p == 2 ? 8 : p * p;
  return q % m == 1;
}

std::uint64_t genus(std::uint64_t p) {
  require_prime(p, "p");
  return (p * p * p - 3 * p + 2) / 2;
}

KummerFamily::KummerFamily(std::uint64_t p, std::uint64_t q) : p_(p), q_(q) {
  if (!admissible(p, q)) {
    throw Error(ErrorCode::InvalidArgument, "q = " + std::to_string(q) + " is not 1 mod " +
                                                std::to_string(p == 2 ? 8 : p * p) + "; family inadmissible");
  }
  if (p > 7) throw Error(ErrorCode::BoundExceeded, "p must be at most 7");
}

std::string KummerFamily::factor_label(std::size_t index) const {
  if (index > p_) throw Error(ErrorCode::InvalidArgument, "factor index out of range");
  const std::string head = "x^" + std::to_string(p_) + " - ";
  if (index == 0) return head + "zeta";
  if (index == 1) return head + std::to_string(q_);
  if (index == 2) return head + "zeta*" + std::to_string(q_);
  return head + "zeta^" + std::to_string(index - 1) + "*" + std::to_string(q_);
}

std::string KummerFamily::describe() const {
  if (p_ == 2) {
    const std::string q = std::to_string(q_);
    return "(x^2+1)(x^2-" + q + ")(x^2+" + q + ")";
  }
  std::string out;
  for (std::size_t i = 0; i < factor_count(); ++i) out += "(" + factor_label(i) + ")";
  return out;
}

FiniteField::Elem factor_constant(const KummerFamily& F, const ResidueField& rf, const FiniteField::Elem& zeta,
                                  std::size_t index) {
  const FiniteField& K = rf.field;
  if (index == 0) return zeta;
  const FiniteField::Elem q = K.from_int(big(F.q()));
  return K.mul(K.pow(zeta, big(index - 1)), q);
}

std::optional<std::size_t> split_factor_with_zeta(const KummerFamily& F, const ResidueField& rf,
                                                  const FiniteField::Elem& zeta) {
  for (std::size_t i = 0; i < F.factor_count(); ++i) {
    const FiniteField::Elem c = factor_constant(F, rf, zeta, i);
    if (rf.field.is_zero(c)) continue;
    if (is_pth_power(rf.field, c, F.p())) return i;
  }
  return std::nullopt;
}

LocalFactorWitness local_factor_check(const KummerFamily& F, const Place& v) {
  LocalFactorWitness w;
  w.place = v;
  if (v.is_real()) {
    if (F.p() != 2) throw Error(ErrorCode::InvalidArgument, "k has no real place for odd p");
    const auto root = local_linear_factor(binomial(2, F.q()), v);
    if (!root || !root->real) throw Error(ErrorCode::InternalPigeonholeViolation, "x^2 - q has no real root");
    w.factor_index = 1;
    w.real = root->real;
    w.method = "real root";
    return w;
  }
  const std::uint64_t r = to_u64(v.prime());
  if (r == F.p()) {
    const auto root = local_linear_factor(binomial(F.p(), F.q()), v);
    if (!root || !root->padic || root->at_infinity) {
      throw Error(ErrorCode::InternalPigeonholeViolation, "x^p - q has no root in Q_p");
    }
    w.factor_index = 1;
    w.padic = root->padic;
    w.method = "Hensel";
    return w;
  }
  const ResidueField rf = build_residue_field(F.p(), r);
  const auto index = split_factor_with_zeta(F, rf, rf.zeta);
  if (!index) {
    throw Error(ErrorCode::InternalPigeonholeViolation,
                "no factor of f has a root in the residue field at r = " + std::to_string(r));
  }
  w.factor_index = *index;
  w.residue_degree = rf.residue_degree();
  w.modulus = rf.field.modulus();
  w.zeta = rf.zeta;
  w.root = *pth_root(rf.field, factor_constant(F, rf, rf.zeta, *index), F.p());
  w.method = "residue p-th power";
  return w;
}

bool verify_local_factor(const KummerFamily& F, const LocalFactorWitness& w) {
  if (w.factor_index >= F.factor_count()) return false;
  if (w.method == "real root") {
    if (F.p() != 2 || !w.real || w.factor_index != 1) return false;
    const IntPoly f = binomial(2, F.q());
    const ExactRat a = f(w.real->lo), b = f(w.real->hi);
    return w.real->exact ? a == 0 : sgn(a) * sgn(b) <= 0;
  }
  if (w.place.is_real()) return false;
  const std::uint64_t r = to_u64(w.place.prime());
  if (w.method == "Hensel") {
    if (r != F.p() || !w.padic || w.factor_index != 1) return false;
    const IntPoly f = binomial(F.p(), F.q());
    const ExactInt value = f(w.padic->residue), deriv = f.derivative()(w.padic->residue);
    if (value == 0) return true;
    if (deriv == 0) return false;
    return valuation(value, big(r)) > 2 * valuation(deriv, big(r));
  }
  if (w.method != "residue p-th power" || r == F.p()) return false;
  try {
    const FiniteField K(r, w.modulus);
    if (w.zeta.size() != K.degree() || w.root.size() != K.degree()) return false;
    if (K.is_one(w.zeta) || !K.is_one(K.pow(w.zeta, big(F.p())))) return false;
    const ResidueField rf{F.p(), r, K, w.zeta};
    const FiniteField::Elem c = factor_constant(F, rf, w.zeta, w.factor_index);
    // x^p - c is separable mod r since r != p, so the residue root lifts.
    return !K.is_zero(c) && K.pow(w.root, big(F.p())) == c;
  } catch (const Error&) {
    return false;
  }
}

LocalFactorScan local_factor_scan(const KummerFamily& F, std::uint64_t bound) {
  LocalFactorScan scan;
  scan.p = F.p();
  scan.q = F.q();
  scan.bound = bound;
  if (F.p() == 2) {
    scan.checks.push_back(local_factor_check(F, Place::real()));
  } else {
    scan.axioms.push_back("k = Q(zeta_p) is totally complex for odd p; its infinite places impose no condition");
  }
  scan.checks.push_back(local_factor_check(F, Place::finite(F.p())));
  scan.checks.push_back(local_factor_check(F, Place::finite(F.q())));
  for (const std::uint64_t r : primes_up_to(bound)) {
    if (r == F.p() || r == F.q()) continue;
    scan.checks.push_back(local_factor_check(F, Place::finite(r)));
  }
  scan.axioms.push_back(
      "primes of k above a rational prime r are Galois conjugate; conjugation permutes zeta^i q (i = 0..p-1) "
      "and preserves whether zeta is a p-th power, so one prime above r decides all of them");
  scan.axioms.push_back("r not in {p, q}: x^p - a with a a unit is separable mod r, so residue roots lift by Hensel");
  scan.axioms.push_back("r > " + std::to_string(bound) +
                        " not in {p, q}: if zeta is not a p-th power it generates F^x / F^xp, of order p, so some "
                        "zeta^i q is a p-th power (pigeonhole)");
  scan.passed = true;
  for (const auto& w : scan.checks) scan.passed = scan.passed && verify_local_factor(F, w);
  return scan;
}

bool pth_power_mod_p2(std::uint64_t r, std::uint64_t p) {
  const std::uint64_t m = p * p;
  const std::uint64_t target = r % m;
  for (std::uint64_t x = 1; x < m; ++x)
    if (x % p != 0 && pow_mod(x, p, m) == target) return true;
  return false;
}

TauParity tau_parity(int i, std::uint64_t s, const KummerFamily& F) {
  if (i < 1 || i > 3) throw Error(ErrorCode::InvalidArgument, "tau index must be 1, 2 or 3");
  require_prime(s, "s");
  if (s == F.p() || s == F.q()) {
    throw Error(ErrorCode::ExcludedPrime, "s = " + std::to_string(s) + " lies in {p, q}");
  }
  const ResidueField rf = build_residue_field(F.p(), s);
  const FiniteField& K = rf.field;
  bool prime_to_p = false;
  if (i == 1) {
    prime_to_p = is_pth_power(K, rf.zeta, F.p());
  } else if (i == 2) {
    prime_to_p = is_pth_power(K, K.from_int(big(F.q())), F.p());
  } else {
    for (std::size_t j = 1; j < F.p() && !prime_to_p; ++j)
      prime_to_p = is_pth_power(K, factor_constant(F, rf, rf.zeta, j + 1), F.p());
  }
  return prime_to_p ? TauParity::PrimeToP : TauParity::DivisibleByP;
}

std::vector<ObstructionCertificate> obstruction_prime_search(const KummerFamily& F, std::uint64_t bound) {
  std::vector<ObstructionCertificate> out;
  const std::uint64_t p = F.p();
  std::vector<std::uint64_t> powers;
  for (std::uint64_t x = 1; x < p * p; ++x)
    if (x % p != 0) powers.push_back(pow_mod(x, p, p * p));
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end()), powers.end());

  for (const std::uint64_t r : primes_up_to(bound)) {
    if (r == p || r == F.q()) continue;
    if (std::binary_search(powers.begin(), powers.end(), r % (p * p))) continue;  // (A)
    const ResidueField rf = build_residue_field(p, r);
    const FiniteField& K = rf.field;
    const ExactInt exponent = K.unit_group_order() / big(p);
    const FiniteField::Elem inert = K.pow(rf.zeta, exponent);
    if (K.is_one(inert)) continue;  // (C)
    std::optional<std::size_t> split;
    for (std::size_t i = 1; i < p && !split; ++i)
      if (is_pth_power(K, factor_constant(F, rf, rf.zeta, i + 1), p)) split = i;
    if (!split) continue;  // (B)

    ObstructionCertificate c;
    c.p = p;
    c.q = F.q();
    c.r = r;
    c.residue_degree = rf.residue_degree();
    c.modulus = K.modulus();
    c.zeta = rf.zeta;
    c.r_mod_p2 = r % (p * p);
    c.pth_powers_mod_p2 = powers;
    c.split_index = *split;
    c.split_root = *pth_root(K, factor_constant(F, rf, rf.zeta, *split + 1), p);
    c.inert_power = inert;
    c.axioms = {
        "x^p - zeta^i q is irreducible over k: a prime above q divides zeta^i q exactly once",
        "primes of k above r are Galois conjugate; (B) and (C) hold at one of them iff at all of them up to "
        "renaming i",
        "N(O_K3) lies in 1 + p^2 Z for K3 = k((zeta q)^(1/p)) (higher ramification)",
    };
    c.conclusion = "c = " + std::to_string(r) + " is not a norm from L = k[x]/(f) modulo p-th powers; Sha(J) is not "
                   "contained in " + std::to_string(p) + "H^1(J) for the Jacobian J of y^" + std::to_string(p) +
                   " = " + std::to_string(r) + " f(x)";
    out.push_back(std::move(c));
  }
  return out;
}

bool verify_obstruction(const ObstructionCertificate& c) {
  try {
    if (!is_prime_u64(c.p) || !is_prime_u64(c.q) || !is_prime_u64(c.r)) return false;
    if (c.r == c.p || c.r == c.q || !admissible(c.p, c.q)) return false;
    // (A) by enumeration of the units mod p^2.
    const std::uint64_t m = c.p * c.p;
    if (c.r_mod_p2 != c.r % m) return false;
    for (std::uint64_t x = 1; x < m; ++x)
      if (x % c.p != 0 && pow_mod(x, c.p, m) == c.r_mod_p2) return false;
    // The stored field and zeta.
    const FiniteField K(c.r, c.modulus);
    if (K.degree() != c.residue_degree || c.zeta.size() != K.degree()) return false;
    if (K.is_one(c.zeta) || !K.is_one(K.pow(c.zeta, big(c.p)))) return false;
    // (B) y^p = zeta^i q.
    if (c.split_index < 1 || c.split_index >= c.p || c.split_root.size() != K.degree()) return false;
    const FiniteField::Elem target = K.mul(K.pow(c.zeta, big(c.split_index)), K.from_int(big(c.q)));
    if (K.pow(c.split_root, big(c.p)) != target) return false;
    // (C) zeta^((r^f - 1)/p) is a nontrivial p-th root of unity.
    const FiniteField::Elem inert = K.pow(c.zeta, K.unit_group_order() / big(c.p));
    return inert == c.inert_power && !K.is_one(inert);
  } catch (const Error&) {
    return false;
  }
}

bool xi_local_triviality(const KummerFamily& F, const Place& v) {
  if (v.is_real() && F.p() != 2) return true;
  return verify_local_factor(F, local_factor_check(F, v));
}

std::string format_elem(const FiniteField::Elem& a) {
  std::string out = "[";
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "," : "") + std::to_string(a[i]);
  return out + "]";
}

}  // namespace shadiv
