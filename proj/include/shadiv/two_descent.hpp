#pragma once

// Elliptic curves y^2 = (x - e1)(x - e2)(x - e3) with full rational 2-torsion:
// the 2-descent map, local images, the 2-Selmer group and its quotient by the
// image of known rational points.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shadiv/homogeneous_spaces.hpp"
#include "shadiv/local_fields.hpp"

namespace shadiv {

struct Point {
  ExactRat x, y;
  bool infinity = false;

  static Point identity() { return Point{0, 0, true}; }
  bool operator==(const Point& o) const {
    return infinity == o.infinity && (infinity || (x == o.x && y == o.y));
  }
  std::string to_string() const;
};

class CurveE2 {
 public:
  /// Throws DegenerateCurve on a repeated root.
  CurveE2(ExactInt e1, ExactInt e2, ExactInt e3);
  /// "e1 e2 e3", or "a b" for y^2 = x(x + a)(x + b).
  static CurveE2 parse(std::string_view text);

  const ExactInt& e1() const { return e_[0]; }
  const ExactInt& e2() const { return e_[1]; }
  const ExactInt& e3() const { return e_[2]; }
  const ExactInt& root(int i) const { return e_[i]; }

  /// y^2 = x^3 + a2 x^2 + a4 x + a6.
  ExactInt a2() const { return -(e_[0] + e_[1] + e_[2]); }
  ExactInt a4() const { return e_[0] * e_[1] + e_[0] * e_[2] + e_[1] * e_[2]; }
  ExactInt a6() const { return -e_[0] * e_[1] * e_[2]; }
  /// 16 ((e1 - e2)(e1 - e3)(e2 - e3))^2
  ExactInt discriminant() const;
  /// Primes dividing 2 (e1 - e2)(e1 - e3)(e2 - e3), ascending.
  std::vector<ExactInt> bad_primes() const;
  /// bad_primes() followed by the real place.
  std::vector<Place> bad_places() const;

  ExactRat rhs(const ExactRat& x) const;
  bool contains(const Point& P) const;
  Point two_torsion(int i) const { return Point{ExactRat(e_[i]), 0, false}; }
  Point add(const Point& P, const Point& Q) const;
  Point negate(const Point& P) const { return P.infinity ? P : Point{P.x, -P.y, false}; }
  Point multiply(const Point& P, long n) const;

  /// "e1 e2 e3" with the chosen root order.
  std::string label() const;
  /// "y^2 = x(x+80)(x+205)" style description.
  std::string describe() const;

 private:
  ExactInt e_[3];
};

/// A pair (d1, d2) of squarefree integers: a class in H^1(Q, E[2]) under the
/// basis given by the first two roots.
struct GlobalClass {
  ExactInt d1 = 1, d2 = 1;

  GlobalClass() = default;
  GlobalClass(const ExactInt& a, const ExactInt& b);

  GlobalClass operator*(const GlobalClass& o) const { return GlobalClass(d1 * o.d1, d2 * o.d2); }
  bool operator==(const GlobalClass& o) const { return d1 == o.d1 && d2 == o.d2; }
  /// By (|d1 d2|, |d1|, d1, d2): small classes first.
  bool operator<(const GlobalClass& o) const;
  bool is_trivial() const { return d1 == 1 && d2 == 1; }
  std::string to_string() const;
  /// Parses "(1,5)" or "1 5".
  static GlobalClass parse(std::string_view text);
};

SquareClassPair localize(const GlobalClass& c, const Place& v);

/// (x - e1, x - e2) generically; the two-torsion points by the standard limits,
/// and ((e3 - e1), (e3 - e2)) at (e3, 0). Throws PointNotOnCurve.
GlobalClass delta_of_point(const CurveE2& E, const Point& P);
/// Integers in the two classes of delta(P), before squarefree reduction (no factoring).
std::pair<ExactInt, ExactInt> delta_representatives(const CurveE2& E, const Point& P);
/// delta at a Q_v-point given by its rational coordinates.
SquareClassPair local_delta(const CurveE2& E, const Point& P, const Place& v);

/// [delta(O), delta(P1), delta(P2), delta(P3)].
std::vector<GlobalClass> torsion_image_set(const CurveE2& E);

/// The image of E(Q_v)/2E(Q_v), as canonical pairs, each backed by a solvable conic pair.
struct LocalImage {
  Place place = Place::real();
  std::vector<SquareClassPair> classes;
  std::vector<LocalVerdict> witnesses;  // parallel to classes

  bool contains(const SquareClassPair& c) const;
};

LocalImage local_image(const CurveE2& E, const Place& v);

struct PointSearchOptions {
  long numerator_bound = 10000;  // |a| for x = a / c^2
  long denominator_bound = 100;  // c
};

/// Rational points x = a / c^2 with |a| <= numerator_bound, 1 <= c <= denominator_bound,
/// one per +-y pair, sorted by (c, a). The two-torsion points are included.
std::vector<Point> point_search(const CurveE2& E, const PointSearchOptions& opts = {});

/// Subgroup of H^1(Q, E[2]) generated by the given classes, sorted.
std::vector<GlobalClass> span(const std::vector<GlobalClass>& gens);
/// F_2-dimension of a subgroup given by its elements.
unsigned f2_dimension(std::size_t order);

struct SelmerGroup {
  std::vector<Place> places;                // places where conditions were imposed
  std::vector<ExactInt> support;            // -1 and the bad primes
  std::vector<GlobalClass> elements;        // sorted
  unsigned dimension = 0;
  std::vector<Point> points;                // from the naive search
  std::vector<GlobalClass> point_image;     // span of delta(points), sorted
  std::vector<std::string> axioms;

  bool contains(const GlobalClass& c) const;
};

SelmerGroup selmer2(const CurveE2& E, const PointSearchOptions& opts = {});

struct ShaCoset {
  GlobalClass representative;        // least member
  std::vector<GlobalClass> members;  // sorted
};

struct Sha2Quotient {
  std::vector<GlobalClass> point_image;
  std::vector<ShaCoset> cosets;  // nontrivial cosets of point_image in Sel_2, by representative
};

Sha2Quotient sha2_classes(const SelmerGroup& selmer);

}  // namespace shadiv
