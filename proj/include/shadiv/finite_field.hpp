#pragma once

// Finite fields F_{r^f} = F_r[x]/(m(x)) and the residue fields of Q(zeta_p).

#include <cstdint>
#include <optional>
#include <vector>

#include "shadiv/arith.hpp"

namespace shadiv {

/// Dense polynomial over Z/r, coefficients low degree first, no trailing zeros.
using ModPoly = std::vector<std::uint64_t>;

namespace modpoly {
void trim(ModPoly& a);
ModPoly sub(const ModPoly& a, const ModPoly& b, std::uint64_t r);
ModPoly mul(const ModPoly& a, const ModPoly& b, std::uint64_t r);
ModPoly rem(const ModPoly& a, const ModPoly& m, std::uint64_t r);
ModPoly quot(const ModPoly& a, const ModPoly& m, std::uint64_t r);
ModPoly gcd(ModPoly a, ModPoly b, std::uint64_t r);
ModPoly powmod(const ModPoly& base, const ExactInt& e, const ModPoly& m, std::uint64_t r);
/// Rabin's irreducibility test.
bool is_irreducible(const ModPoly& f, std::uint64_t r);
/// Compares as base-r numerals: leading coefficient first.
bool lex_less(const ModPoly& a, const ModPoly& b);
}  // namespace modpoly

class FiniteField {
 public:
  using Elem = std::vector<std::uint64_t>;  // exactly degree() coefficients

  /// Throws InvalidArgument unless r is prime and modulus is monic irreducible.
  FiniteField(std::uint64_t r, ModPoly modulus);

  std::uint64_t characteristic() const { return r_; }
  unsigned degree() const { return static_cast<unsigned>(modulus_.size() - 1); }
  const ModPoly& modulus() const { return modulus_; }
  ExactInt order() const;
  ExactInt unit_group_order() const { return order() - 1; }

  Elem zero() const;
  Elem one() const;
  Elem from_int(const ExactInt& n) const;
  Elem from_poly(const ModPoly& a) const;
  /// The class of x, i.e. a root of the modulus.
  Elem generator_root() const;

  bool is_zero(const Elem& a) const;
  bool is_one(const Elem& a) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, const ExactInt& e) const;
  Elem inv(const Elem& a) const;

  /// Deterministic enumeration of nonzero elements: index k >= 1 read in base r.
  Elem element_at(std::uint64_t k) const;

  bool operator==(const FiniteField& other) const { return r_ == other.r_ && modulus_ == other.modulus_; }

 private:
  std::uint64_t r_;
  ModPoly modulus_;
};

/// z^((|F|-1)/gcd(p, |F|-1)) == 1. Throws ZeroInput for z == 0.
bool is_pth_power(const FiniteField& field, const FiniteField::Elem& z, std::uint64_t p);

/// A p-th root of z when one exists (Adleman-Manders-Miller).
std::optional<FiniteField::Elem> pth_root(const FiniteField& field, const FiniteField::Elem& z, std::uint64_t p);

/// Irreducible factors of the p-th cyclotomic polynomial mod r, sorted by modpoly::lex_less.
std::vector<ModPoly> cyclotomic_factors_mod(std::uint64_t p, std::uint64_t r);

/// Residue field of a prime of Q(zeta_p) above r: F_{r^f} with f = ord(r mod p).
/// The modulus is the first irreducible factor of Phi_p mod r; zeta is its root x.
struct ResidueField {
  std::uint64_t p;
  std::uint64_t r;
  FiniteField field;
  FiniteField::Elem zeta;

  unsigned residue_degree() const { return field.degree(); }
};

ResidueField build_residue_field(std::uint64_t p, std::uint64_t r);

}  // namespace shadiv
