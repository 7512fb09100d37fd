#pragma once

// Local solvability of genus-one homogeneous spaces: quartic double covers
// y^2 = g(x) and the pair of quadrics attached to a 2-descent class.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shadiv/local_fields.hpp"
#include "shadiv/poly.hpp"

namespace shadiv {

/// Searches u in the disc center + p^level Z_p for a point where every form h_i
/// either vanishes or has the square class of targets[i].
/// Discs are refined breadth first; a disc is refuted once some form has a
/// constant class on it that differs from its target.
struct ClassSearchResult {
  std::optional<ExactInt> witness;
  bool exhausted = false;  // hit max_level with live discs
  unsigned depth = 0;      // deepest level examined
  std::size_t discs = 0;
  std::optional<ExactInt> undecided_center;
};

ClassSearchResult padic_class_search(const std::vector<IntPoly>& forms, const std::vector<ExactInt>& targets,
                                     const ExactInt& p, const ExactInt& center, unsigned level,
                                     unsigned max_level);

/// Result of a local solvability test. The witness is an exact rational
/// coordinate whose square-class data re-verifies the point.
struct LocalVerdict {
  Place place = Place::real();
  bool solvable = false;
  std::optional<ExactRat> witness;  // x, or t = 1/x when witness_at_infinity
  bool witness_at_infinity = false;
  unsigned depth = 0;
  std::size_t discs = 0;
  std::string reason;
};

class QuarticCover {
 public:
  /// Throws InvalidArgument unless g has degree 3 or 4 and nonzero discriminant.
  explicit QuarticCover(IntPoly g, std::optional<std::pair<IntPoly, IntPoly>> factors = std::nullopt);
  static QuarticCover parse(std::string_view text);

  const IntPoly& g() const { return g_; }
  const std::optional<std::pair<IntPoly, IntPoly>>& factors() const { return factors_; }
  const ExactInt& discriminant() const { return disc_; }
  /// t^4 g(1/t).
  IntPoly form_at_infinity() const { return g_.reversed(4); }
  std::string describe() const;

 private:
  IntPoly g_;
  std::optional<std::pair<IntPoly, IntPoly>> factors_;
  ExactInt disc_;
};

LocalVerdict quartic_solvable_at(const QuarticCover& cover, const Place& v);
bool verify_quartic_witness(const QuarticCover& cover, const LocalVerdict& verdict);

struct ElsReport {
  std::vector<LocalVerdict> places;
  std::vector<std::string> axioms;

  bool els() const;
  std::optional<Place> first_failure() const;
};

/// Real place, every p dividing 2 disc(g) lc(g), and every p <= 13.
ElsReport quartic_els(const QuarticCover& cover);

/// d1 z1^2 - d2 z2^2 = (e2 - e1) w^2,  d1 z1^2 - d1 d2 z3^2 = (e3 - e1) w^2.
/// A point is an x in P^1 with x - e1 ~ d1, x - e2 ~ d2, x - e3 ~ d1 d2 (zeros allowed).
struct ConicPair {
  ExactInt d1, d2;
  ExactInt e1, e2, e3;

  ConicPair(ExactInt d1, ExactInt d2, ExactInt e1, ExactInt e2, ExactInt e3);
};

LocalVerdict conic_pair_solvable_at(const ConicPair& pair, const Place& v);
bool verify_conic_witness(const ConicPair& pair, const LocalVerdict& verdict);

}  // namespace shadiv
