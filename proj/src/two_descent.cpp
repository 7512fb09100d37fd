#include "shadiv/two_descent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace shadiv {

std::string Point::to_string() const {
  if (infinity) return "O";
  return "(" + shadiv::to_string(x) + "," + shadiv::to_string(y) + ")";
}

CurveE2::CurveE2(ExactInt e1, ExactInt e2, ExactInt e3) : e_{std::move(e1), std::move(e2), std::move(e3)} {
  if (e_[0] == e_[1] || e_[0] == e_[2] || e_[1] == e_[2]) {
    throw Error(ErrorCode::DegenerateCurve, "repeated root in " + label());
  }
}

CurveE2 CurveE2::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  if (tokens.size() == 2) return CurveE2(0, -parse_int(tokens[0]), -parse_int(tokens[1]));
  if (tokens.size() == 3) return CurveE2(parse_int(tokens[0]), parse_int(tokens[1]), parse_int(tokens[2]));
  throw Error(ErrorCode::ParseError, "curve must be \"a b\" or \"e1 e2 e3\": " + std::string(text));
}

ExactInt CurveE2::discriminant() const {
  const ExactInt d = (e_[0] - e_[1]) * (e_[0] - e_[2]) * (e_[1] - e_[2]);
  return 16 * d * d;
}

std::vector<ExactInt> CurveE2::bad_primes() const {
  const ExactInt d = 2 * (e_[0] - e_[1]) * (e_[0] - e_[2]) * (e_[1] - e_[2]);
  return factorize(d).primes();
}

std::vector<Place> CurveE2::bad_places() const {
  std::vector<Place> out;
  for (const auto& p : bad_primes()) out.push_back(Place::finite(p));
  out.push_back(Place::real());
  return out;
}

ExactRat CurveE2::rhs(const ExactRat& x) const {
  return (x - ExactRat(e_[0])) * (x - ExactRat(e_[1])) * (x - ExactRat(e_[2]));
}

bool CurveE2::contains(const Point& P) const { return P.infinity || P.y * P.y == rhs(P.x); }

Point CurveE2::add(const Point& P, const Point& Q) const {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  ExactRat lambda;
  if (P.x == Q.x) {
    if (P.y + Q.y == 0) return Point::identity();
    lambda = (3 * P.x * P.x + 2 * ExactRat(a2()) * P.x + ExactRat(a4())) / (2 * P.y);
  } else {
    lambda = (Q.y - P.y) / (Q.x - P.x);
  }
  lambda.canonicalize();
  ExactRat x3 = lambda * lambda - ExactRat(a2()) - P.x - Q.x;
  ExactRat y3 = -(lambda * (x3 - P.x) + P.y);
  x3.canonicalize();
  y3.canonicalize();
  return Point{x3, y3, false};
}

Point CurveE2::multiply(const Point& P, long n) const {
  Point base = n < 0 ? negate(P) : P;
  unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
  Point acc = Point::identity();
  while (k) {
    if (k & 1) acc = add(acc, base);
    base = add(base, base);
    k >>= 1;
  }
  return acc;
}

std::string CurveE2::label() const {
  return shadiv::to_string(e_[0]) + " " + shadiv::to_string(e_[1]) + " " + shadiv::to_string(e_[2]);
}

std::string CurveE2::describe() const {
  std::string s = "y^2 = ";
  for (const auto& e : e_) {
    if (e == 0) {
      s += "x";
    } else if (e < 0) {
      s += "(x+" + shadiv::to_string(ExactInt(-e)) + ")";
    } else {
      s += "(x-" + shadiv::to_string(e) + ")";
    }
  }
  return s;
}

GlobalClass::GlobalClass(const ExactInt& a, const ExactInt& b) : d1(squarefree_part(a)), d2(squarefree_part(b)) {}

bool GlobalClass::operator<(const GlobalClass& o) const {
  const ExactInt n = abs(d1 * d2), on = abs(o.d1 * o.d2);
  if (n != on) return n < on;
  if (abs(d1) != abs(o.d1)) return abs(d1) < abs(o.d1);
  if (d1 != o.d1) return d1 < o.d1;
  return d2 < o.d2;
}

std::string GlobalClass::to_string() const {
  return "(" + shadiv::to_string(d1) + "," + shadiv::to_string(d2) + ")";
}

GlobalClass GlobalClass::parse(std::string_view text) {
  std::string s(text);
  for (char& c : s)
    if (c == '(' || c == ')' || c == ',') c = ' ';
  std::istringstream in(s);
  std::string a, b, extra;
  if (!(in >> a >> b) || (in >> extra))
    throw Error(ErrorCode::ParseError, "class must be \"(d1,d2)\": " + std::string(text));
  const ExactInt d1 = parse_int(a), d2 = parse_int(b);
  if (d1 == 0 || d2 == 0) throw Error(ErrorCode::ZeroInput, "class entries must be nonzero");
  return GlobalClass(d1, d2);
}

SquareClassPair localize(const GlobalClass& c, const Place& v) {
  return square_class_pair(ExactRat(c.d1), ExactRat(c.d2), v);
}

std::pair<ExactInt, ExactInt> delta_representatives(const CurveE2& E, const Point& P) {
  if (!E.contains(P)) throw Error(ErrorCode::PointNotOnCurve, P.to_string() + " is not on " + E.describe());
  if (P.infinity) return {1, 1};
  const ExactInt& e1 = E.e1();
  const ExactInt& e2 = E.e2();
  const ExactInt& e3 = E.e3();
  if (P.x == e1) return {(e1 - e2) * (e1 - e3), e1 - e2};
  if (P.x == e2) return {e2 - e1, (e2 - e1) * (e2 - e3)};
  if (P.x == e3) return {e3 - e1, e3 - e2};
  // x - e_i = num / den with den a square, so the class is that of num * den.
  const ExactRat u = P.x - ExactRat(e1), w = P.x - ExactRat(e2);
  return {u.get_num() * u.get_den(), w.get_num() * w.get_den()};
}

GlobalClass delta_of_point(const CurveE2& E, const Point& P) {
  const auto [a, b] = delta_representatives(E, P);
  return GlobalClass(a, b);
}

SquareClassPair local_delta(const CurveE2& E, const Point& P, const Place& v) {
  const auto [a, b] = delta_representatives(E, P);
  return square_class_pair(ExactRat(a), ExactRat(b), v);
}

std::vector<GlobalClass> torsion_image_set(const CurveE2& E) {
  return {GlobalClass(), delta_of_point(E, E.two_torsion(0)), delta_of_point(E, E.two_torsion(1)),
          delta_of_point(E, E.two_torsion(2))};
}

bool LocalImage::contains(const SquareClassPair& c) const {
  return std::find(classes.begin(), classes.end(), c) != classes.end();
}

LocalImage local_image(const CurveE2& E, const Place& v) {
  LocalImage out;
  out.place = v;
  const auto reps = square_class_representatives(v);
  for (const auto& d1 : reps) {
    for (const auto& d2 : reps) {
      const ConicPair cp(d1, d2, E.e1(), E.e2(), E.e3());
      LocalVerdict verdict = conic_pair_solvable_at(cp, v);
      if (!verdict.solvable) continue;
      out.classes.push_back(square_class_pair(ExactRat(d1), ExactRat(d2), v));
      out.witnesses.push_back(std::move(verdict));
    }
  }
  return out;
}

namespace {

using i128 = __int128;

bool is_square_i128(i128 v, i128* root) {
  if (v < 0) return false;
  if (v == 0) {
    *root = 0;
    return true;
  }
  // Quadratic residues mod 64 and mod 63 reject most non-squares.
  static const auto table = [] {
    std::array<bool, 64 * 63> t{};
    for (int i = 0; i < 64; ++i) t[(i * i) % 64] = true;
    for (int i = 0; i < 63; ++i) t[64 + (i * i) % 63] = true;
    return t;
  }();
  if (!table[static_cast<int>(v % 64)] || !table[64 + static_cast<int>(v % 63)]) return false;
  i128 r = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  if (r * r != v) return false;
  *root = r;
  return true;
}

std::string i128_to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  if (neg) v = -v;
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace

std::vector<Point> point_search(const CurveE2& E, const PointSearchOptions& opts) {
  std::vector<Point> points;
  const long A = opts.numerator_bound, C = opts.denominator_bound;
  const ExactInt limit = ExactInt(1) << 40;
  const bool small = abs(E.e1()) < limit && abs(E.e2()) < limit && abs(E.e3()) < limit && A < (1L << 40) &&
                     C < (1L << 20);
  for (long c = 1; c <= C; ++c) {
    const long c2 = c * c;
    for (long a = -A; a <= A; ++a) {
      if (std::gcd(a, c) != 1) continue;
      if (small) {
        const i128 f1 = static_cast<i128>(a) - static_cast<i128>(to_i64(E.e1())) * c2;
        const i128 f2 = static_cast<i128>(a) - static_cast<i128>(to_i64(E.e2())) * c2;
        const i128 f3 = static_cast<i128>(a) - static_cast<i128>(to_i64(E.e3())) * c2;
        const i128 v = f1 * f2 * f3;
        i128 r;
        if (!is_square_i128(v, &r)) continue;
        points.push_back(Point{ExactRat(ExactInt(a), ExactInt(c2)),
                               ExactRat(ExactInt(i128_to_string(r)), ExactInt(c2) * c), false});
      } else {
        const ExactInt cc = c2;
        const ExactInt v = (a - E.e1() * cc) * (a - E.e2() * cc) * (a - E.e3() * cc);
        if (v < 0 || !is_square(v)) continue;
        ExactInt r;
        mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
        points.push_back(Point{ExactRat(ExactInt(a), cc), ExactRat(r, cc * c), false});
      }
      points.back().x.canonicalize();
      points.back().y.canonicalize();
    }
  }
  return points;
}

std::vector<GlobalClass> span(const std::vector<GlobalClass>& gens) {
  std::set<GlobalClass> group{GlobalClass()};
  for (const auto& g : gens) {
    if (group.count(g)) continue;
    std::vector<GlobalClass> add;
    for (const auto& h : group) add.push_back(h * g);
    group.insert(add.begin(), add.end());
  }
  return {group.begin(), group.end()};
}

unsigned f2_dimension(std::size_t order) {
  unsigned d = 0;
  while ((std::size_t{1} << d) < order) ++d;
  if ((std::size_t{1} << d) != order) throw Error(ErrorCode::InvalidArgument, "order is not a power of two");
  return d;
}

bool SelmerGroup::contains(const GlobalClass& c) const {
  return std::binary_search(elements.begin(), elements.end(), c);
}

SelmerGroup selmer2(const CurveE2& E, const PointSearchOptions& opts) {
  SelmerGroup sel;
  sel.places = E.bad_places();
  sel.support.push_back(-1);
  for (const auto& p : E.bad_primes()) sel.support.push_back(p);
  const std::size_t m = sel.support.size();
  if (m > 12) throw Error(ErrorCode::BoundExceeded, "too many bad primes for Selmer enumeration");

  // Canonical local classes of each support element at each place.
  struct PlaceData {
    LocalImage image;
    std::vector<SquareClass> gen_class;
  };
  std::vector<PlaceData> data;
  for (const auto& v : sel.places) {
    PlaceData d{local_image(E, v), {}};
    for (const auto& g : sel.support) d.gen_class.push_back(square_class(ExactRat(g), v));
    data.push_back(std::move(d));
  }
  auto product = [&](std::size_t mask) {
    ExactInt d = 1;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) d *= sel.support[i];
    return d;
  };
  auto local_class = [&](const PlaceData& d, std::size_t mask) {
    SquareClass c = square_class(ExactRat(1), d.image.place);
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) c = class_product(c, d.gen_class[i]);
    return c;
  };

  const std::size_t n = std::size_t{1} << m;
  for (std::size_t m1 = 0; m1 < n; ++m1) {
    for (std::size_t m2 = 0; m2 < n; ++m2) {
      bool ok = true;
      for (const auto& d : data) {
        if (!d.image.contains(SquareClassPair{local_class(d, m1), local_class(d, m2)})) {
          ok = false;
          break;
        }
      }
      if (ok) sel.elements.push_back(GlobalClass(product(m1), product(m2)));
    }
  }
  std::sort(sel.elements.begin(), sel.elements.end());
  sel.dimension = f2_dimension(sel.elements.size());

  sel.points = point_search(E, opts);
  std::vector<GlobalClass> images = torsion_image_set(E);
  for (const auto& P : sel.points) images.push_back(delta_of_point(E, P));
  sel.point_image = span(images);
  sel.axioms.push_back(
      "places outside S: a class supported on S is unramified there and lies in the local image, "
      "which is the unramified subgroup at odd primes of good reduction");
  return sel;
}

Sha2Quotient sha2_classes(const SelmerGroup& selmer) {
  Sha2Quotient q;
  q.point_image = selmer.point_image;
  for (const auto& g : q.point_image) {
    if (!selmer.contains(g)) {
      throw Error(ErrorCode::InternalPigeonholeViolation, "point image " + g.to_string() + " not in Selmer group");
    }
  }
  std::set<GlobalClass> assigned(q.point_image.begin(), q.point_image.end());
  for (const auto& s : selmer.elements) {
    if (assigned.count(s)) continue;
    ShaCoset coset;
    for (const auto& g : q.point_image) coset.members.push_back(s * g);
    std::sort(coset.members.begin(), coset.members.end());
    coset.representative = coset.members.front();
    assigned.insert(coset.members.begin(), coset.members.end());
    q.cosets.push_back(std::move(coset));
  }
  std::sort(q.cosets.begin(), q.cosets.end(),
            [](const ShaCoset& a, const ShaCoset& b) { return a.representative < b.representative; });
  return q;
}

}  // namespace shadiv
