#pragma once

// Cyclic covers y^p = c f(x) over k = Q(zeta_p) with
// f = (x^p - zeta)(x^p - q)(x^p - zeta q) ... (x^p - zeta^(p-1) q):
// local linear factors of f, inertia parities and obstruction primes c = r.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shadiv/finite_field.hpp"
#include "shadiv/local_fields.hpp"

namespace shadiv {

/// True iff q = 1 mod p^2 (mod 8 when p = 2). Throws NonPrime.
bool admissible(std::uint64_t p, std::uint64_t q);

/// (p^3 - 3p + 2) / 2. Throws NonPrime.
std::uint64_t genus(std::uint64_t p);

class KummerFamily {
 public:
  /// Throws NonPrime, InvalidArgument when inadmissible, BoundExceeded unless p <= 7.
  KummerFamily(std::uint64_t p, std::uint64_t q);

  std::uint64_t p() const { return p_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t degree() const { return p_ * (p_ + 1); }
  std::uint64_t genus() const { return shadiv::genus(p_); }
  /// p + 1 factors: 0 is x^p - zeta, 1 is x^p - q, 1 + i is x^p - zeta^i q.
  std::size_t factor_count() const { return p_ + 1; }
  std::string factor_label(std::size_t index) const;
  /// Over Q for p = 2: "(x^2+1)(x^2-17)(x^2+17)".
  std::string describe() const;

 private:
  std::uint64_t p_, q_;
};

/// The constant zeta^a q^b of factor `index` in the residue field with the given zeta.
FiniteField::Elem factor_constant(const KummerFamily& F, const ResidueField& rf, const FiniteField::Elem& zeta,
                                  std::size_t index);

struct LocalFactorWitness {
  Place place = Place::real();
  std::size_t factor_index = 0;
  unsigned residue_degree = 1;
  ModPoly modulus;                    // residue field modulus (empty at p, q-adic Hensel and real)
  FiniteField::Elem zeta;             // distinguished zeta in the residue field
  FiniteField::Elem root;             // root of the factor in the residue field
  std::optional<HenselRoot> padic;    // at r = p: a Q_p root of x^p - q
  std::optional<RootInterval> real;   // at the real place (p = 2)
  std::string method;                 // "residue p-th power", "Hensel", "real root"
};

/// A linear factor of f over the completion of k at a prime above r (or the
/// real place for p = 2). Throws InternalPigeonholeViolation if none is found,
/// InvalidArgument for the real place when p is odd.
LocalFactorWitness local_factor_check(const KummerFamily& F, const Place& v);

/// The same search at a prime r outside {p, q} with zeta replaced by another
/// primitive p-th root in the residue field; nullopt when no factor splits.
std::optional<std::size_t> split_factor_with_zeta(const KummerFamily& F, const ResidueField& rf,
                                                  const FiniteField::Elem& zeta);

/// Re-checks a witness from its stored data only.
bool verify_local_factor(const KummerFamily& F, const LocalFactorWitness& w);

struct LocalFactorScan {
  std::uint64_t p = 0, q = 0, bound = 0;
  std::vector<LocalFactorWitness> checks;  // real (p = 2), p, q, then r <= bound ascending
  std::vector<std::string> axioms;
  bool passed = false;
};

LocalFactorScan local_factor_scan(const KummerFamily& F, std::uint64_t bound);

enum class TauParity { PrimeToP, DivisibleByP };

/// i = 1: zeta is a p-th power at every prime above s (s a p-th power mod p^2);
/// i = 2: q is a p-th power at every prime above s;
/// i = 3: zeta^j q is a p-th power for some j in 1..p-1 at the distinguished prime.
/// Throws ExcludedPrime for s in {p, q}, InvalidArgument unless i is 1, 2 or 3.
TauParity tau_parity(int i, std::uint64_t s, const KummerFamily& F);

/// True iff r is congruent to a p-th power mod p^2, by enumeration.
bool pth_power_mod_p2(std::uint64_t r, std::uint64_t p);

struct ObstructionCertificate {
  std::uint64_t p = 0, q = 0, r = 0;
  unsigned residue_degree = 1;
  ModPoly modulus;
  FiniteField::Elem zeta;
  // (A) r is not a p-th power mod p^2.
  std::uint64_t r_mod_p2 = 0;
  std::vector<std::uint64_t> pth_powers_mod_p2;
  // (B) zeta^i q = y^p in the residue field.
  std::uint64_t split_index = 0;
  FiniteField::Elem split_root;
  // (C) zeta^((r^f - 1)/p) != 1, so zeta is not a p-th power.
  FiniteField::Elem inert_power;
  std::vector<std::string> axioms;
  std::string conclusion;
};

/// Primes r <= bound outside {p, q} meeting (A), (B) and (C).
std::vector<ObstructionCertificate> obstruction_prime_search(const KummerFamily& F, std::uint64_t bound);

/// Recomputes (A)-(C) from raw residue arithmetic on the stored data.
bool verify_obstruction(const ObstructionCertificate& c);

/// Sufficient test only: true when f has a linear factor at v. For odd p the
/// real place is complex in k and always trivial.
bool xi_local_triviality(const KummerFamily& F, const Place& v);

std::string format_elem(const FiniteField::Elem& a);

}  // namespace shadiv
