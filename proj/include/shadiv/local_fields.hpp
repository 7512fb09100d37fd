#pragma once

// Completions of Q: square classes, Hensel root certification, local linear factors.

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "shadiv/arith.hpp"
#include "shadiv/poly.hpp"

namespace shadiv {

class Place {
 public:
  static Place real();
  /// Throws NonPrime unless p is prime.
  static Place finite(const ExactInt& p);
  static Place finite(std::uint64_t p) { return finite(ExactInt(static_cast<unsigned long>(p))); }
  /// "real" or the decimal prime.
  static Place parse(const std::string& label);

  bool is_real() const { return real_; }
  bool is_finite() const { return !real_; }
  const ExactInt& prime() const;
  std::uint64_t prime_u64() const { return to_u64(prime()); }
  std::string label() const;

  bool operator==(const Place& o) const { return real_ == o.real_ && prime_ == o.prime_; }
  /// Finite places by prime, the real place last.
  bool operator<(const Place& o) const;

 private:
  Place(bool real, ExactInt p) : real_(real), prime_(std::move(p)) {}
  bool real_;
  ExactInt prime_;
};

/// Element of Q_v^x / Q_v^x2 in normal form.
///   odd p: tag = Legendre symbol of the unit part (+1 / -1)
///   p = 2: tag = unit part mod 8 (1, 3, 5, 7)
///   real:  tag = sign, valuation_parity = 0
struct SquareClass {
  Place place;
  ExactRat representative;
  int valuation_parity = 0;
  int tag = 1;

  /// Canonical squarefree integer representing the class.
  ExactInt canonical() const;
  bool is_trivial() const { return valuation_parity == 0 && tag == 1; }
  bool operator==(const SquareClass& o) const {
    return place == o.place && valuation_parity == o.valuation_parity && tag == o.tag;
  }
};

SquareClass square_class(const ExactRat& x, const Place& v);
bool same_class(const ExactRat& x, const ExactRat& y, const Place& v);
SquareClass class_product(const SquareClass& a, const SquareClass& b);
/// Canonical representatives of every class at v (4 for odd p, 8 for p = 2, 2 for real).
std::vector<ExactInt> square_class_representatives(const Place& v);

struct SquareClassPair {
  SquareClass first;
  SquareClass second;

  bool operator==(const SquareClassPair& o) const { return first == o.first && second == o.second; }
};

SquareClassPair square_class_pair(const ExactRat& d1, const ExactRat& d2, const Place& v);

/// Residue a mod p^level with v(f(a)) > 2 v(f'(a)); a genuine Z_p root lies
/// within p^(value_valuation - derivative_valuation) of a.
struct HenselRoot {
  ExactInt residue;
  unsigned level = 0;
  unsigned value_valuation = 0;       // v(f(a)); 2^30 when f(a) == 0
  unsigned derivative_valuation = 0;  // v(f'(a))

  unsigned root_precision() const { return value_valuation - derivative_valuation; }
};

struct HenselResult {
  ExactInt p;
  unsigned precision = 0;
  std::vector<HenselRoot> certified;
  std::vector<ExactInt> undecided;  // residues mod p^precision neither certified nor refuted

  bool undecided_flag() const { return !undecided.empty(); }
};

constexpr unsigned kExactZeroValuation = 1u << 30;

/// Residue-tree search for Z_p roots of f up to precision k.
HenselResult hensel_roots(const IntPoly& f, const ExactInt& p, unsigned k);

/// 2 v_p(disc f) + 3, or SHA_NONDIV_MAXPREC when set.
unsigned max_precision(const IntPoly& f, const ExactInt& p);
std::optional<unsigned> precision_override();

/// Runs the ladder k = 1, 3, 5, max; throws PrecisionExhausted if still undecided.
HenselResult decide_roots(const IntPoly& f, const ExactInt& p);

/// One Newton step from a certified root; the result agrees with the true root to
/// at least root_precision + 1 digits.
ExactInt newton_lift(const IntPoly& f, const ExactInt& p, const HenselRoot& root);

struct LocalRoot {
  Place place;
  std::optional<HenselRoot> padic;  // root of f, or of the reversal when at_infinity
  bool at_infinity = false;         // root x = 1/t with t in pZ_p
  std::optional<RootInterval> real;
};

/// A root of f in Q_v, or nullopt when f has none. f must be squarefree.
std::optional<LocalRoot> local_linear_factor(const IntPoly& f, const Place& v);

}  // namespace shadiv
