#include "shadiv/homogeneous_spaces.hpp"

#include <algorithm>
#include <set>

namespace shadiv {

namespace {

// Perturbation margin that keeps the square class of a p-adic number fixed.
unsigned class_margin(const ExactInt& p) { return p == 2 ? 3 : 1; }

unsigned search_depth(unsigned disc_valuation, const ExactInt& p) {
  if (auto o = precision_override()) return *o;
  return 2 * disc_valuation + 3 + class_margin(p);
}

bool matches(const ExactInt& value, const SquareClass& target, const Place& v) {
  return value == 0 || square_class(ExactRat(value), v) == target;
}

}  // namespace

ClassSearchResult padic_class_search(const std::vector<IntPoly>& forms, const std::vector<ExactInt>& targets,
                                     const ExactInt& p, const ExactInt& center, unsigned level,
                                     unsigned max_level) {
  if (forms.size() != targets.size() || forms.empty()) {
    throw Error(ErrorCode::InvalidArgument, "padic_class_search needs one target per form");
  }
  const Place v = Place::finite(p);
  std::vector<SquareClass> target_classes;
  for (const auto& t : targets) target_classes.push_back(square_class(ExactRat(t), v));
  const unsigned margin = class_margin(p);
  const std::uint64_t pu = to_u64(p);

  ClassSearchResult result;
  std::vector<ExactInt> current{center};
  ExactInt radius = pow_int(p, level);
  for (unsigned lev = level;; ++lev) {
    result.depth = lev;
    std::vector<ExactInt> next;
    for (const ExactInt& a : current) {
      ++result.discs;
      bool all_match = true;
      bool refuted = false;
      for (size_t i = 0; i < forms.size(); ++i) {
        const IntPoly shifted = forms[i].taylor_shift(a);
        const ExactInt& b0 = shifted.coeff(0);
        if (!matches(b0, target_classes[i], v)) all_match = false;
        if (b0 == 0) continue;
        const unsigned m0 = valuation(b0, p);
        bool constant = true;
        for (int k = 1; k <= shifted.degree() && constant; ++k) {
          const ExactInt& bk = shifted.coeff(static_cast<unsigned>(k));
          if (bk == 0) continue;
          if (valuation(bk, p) + lev * static_cast<unsigned>(k) < m0 + margin) constant = false;
        }
        if (constant && !(square_class(ExactRat(b0), v) == target_classes[i])) refuted = true;
      }
      if (all_match) {
        result.witness = a;
        return result;
      }
      if (refuted) continue;
      if (lev >= max_level) {
        result.exhausted = true;
        if (!result.undecided_center) result.undecided_center = a;
        continue;
      }
      for (std::uint64_t i = 0; i < pu; ++i) next.push_back(a + static_cast<unsigned long>(i) * radius);
    }
    if (next.empty()) return result;
    current = std::move(next);
    radius *= p;
  }
}

QuarticCover::QuarticCover(IntPoly g, std::optional<std::pair<IntPoly, IntPoly>> factors)
    : g_(std::move(g)), factors_(std::move(factors)) {
  if (g_.degree() != 3 && g_.degree() != 4) {
    throw Error(ErrorCode::InvalidArgument, "quartic cover needs deg g in {3, 4}, got " + g_.to_string());
  }
  disc_ = shadiv::discriminant(g_);
  if (disc_ == 0) throw Error(ErrorCode::InvalidArgument, "g is not squarefree: " + g_.to_string());
}

QuarticCover QuarticCover::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  const IntPoly g = IntPoly::parse(s);
  if (!s.empty() && s.front() == '(') {
    const size_t split = s.find(")*(");
    if (split != std::string::npos && s.find(")*(", split + 1) == std::string::npos) {
      const IntPoly q1 = IntPoly::parse(s.substr(0, split + 1));
      const IntPoly q2 = IntPoly::parse(s.substr(split + 2));
      return QuarticCover(g, std::make_pair(q1, q2));
    }
  }
  return QuarticCover(g);
}

std::string QuarticCover::describe() const { return "y^2 = " + g_.to_string(); }

LocalVerdict quartic_solvable_at(const QuarticCover& cover, const Place& v) {
  LocalVerdict out;
  out.place = v;
  const IntPoly& g = cover.g();
  if (v.is_real()) {
    if (sgn(g.leading()) > 0 || g.degree() == 3) {
      out.solvable = true;
      out.witness = ExactRat(0);
      out.witness_at_infinity = true;
      out.reason = g.degree() == 3 ? "odd degree: point at infinity" : "leading coefficient positive";
      return out;
    }
    const auto roots = isolate_real_roots(g, ExactRat(1, 1024));
    if (roots.empty()) {
      out.reason = "g has no real root and negative leading coefficient";
      return out;
    }
    const RootInterval& r = roots.front();
    out.solvable = true;
    if (r.exact) {
      out.witness = r.lo;
    } else {
      out.witness = sgn(g(r.lo)) >= 0 ? r.lo : r.hi;
    }
    out.reason = "g changes sign at a real root";
    return out;
  }

  const ExactInt& p = v.prime();
  const unsigned depth = search_depth(valuation(cover.discriminant(), p), p);
  // Chart x in Z_p.
  ClassSearchResult affine = padic_class_search({g}, {ExactInt(1)}, p, 0, 0, depth);
  out.discs += affine.discs;
  out.depth = affine.depth;
  if (affine.witness) {
    out.solvable = true;
    out.witness = ExactRat(*affine.witness);
    out.reason = "square value of g at an integral x";
    return out;
  }
  // Chart x = 1/t, t in pZ_p.
  ClassSearchResult at_inf = padic_class_search({cover.form_at_infinity()}, {ExactInt(1)}, p, 0, 1, depth);
  out.discs += at_inf.discs;
  out.depth = std::max(out.depth, at_inf.depth);
  if (at_inf.witness) {
    out.solvable = true;
    out.witness = ExactRat(*at_inf.witness);
    out.witness_at_infinity = true;
    out.reason = "square value of t^4 g(1/t) at t in pZ_p";
    return out;
  }
  if (affine.exhausted || at_inf.exhausted) {
    const ExactInt c = affine.exhausted ? *affine.undecided_center : *at_inf.undecided_center;
    throw Error(ErrorCode::PrecisionExhausted, "quartic at p = " + to_string(p) + ": undecided residue " +
                                                   to_string(c) + " at level " + std::to_string(depth));
  }
  out.reason = "every residue disc refuted at depth " + std::to_string(out.depth);
  return out;
}

bool verify_quartic_witness(const QuarticCover& cover, const LocalVerdict& verdict) {
  if (!verdict.solvable || !verdict.witness) return false;
  const IntPoly form = verdict.witness_at_infinity ? cover.form_at_infinity() : cover.g();
  const ExactRat value = form(*verdict.witness);
  if (verdict.place.is_real()) return sgn(value) >= 0;
  if (verdict.witness_at_infinity && *verdict.witness != 0 &&
      rat_valuation(*verdict.witness, verdict.place.prime()) < 1) {
    return false;
  }
  return value == 0 || square_class(value, verdict.place).is_trivial();
}

bool ElsReport::els() const {
  return std::all_of(places.begin(), places.end(), [](const LocalVerdict& v) { return v.solvable; });
}

std::optional<Place> ElsReport::first_failure() const {
  for (const auto& v : places)
    if (!v.solvable) return v.place;
  return std::nullopt;
}

ElsReport quartic_els(const QuarticCover& cover) {
  std::set<Place> places{Place::real()};
  for (const std::uint64_t p : primes_up_to(13)) places.insert(Place::finite(p));
  const ExactInt bad = 2 * cover.discriminant() * cover.g().leading();
  for (const auto& p : factorize(bad).primes()) places.insert(Place::finite(p));

  ElsReport report;
  for (const auto& v : places) report.places.push_back(quartic_solvable_at(cover, v));
  report.axioms.push_back(
      "primes p >= 17 not dividing 2*disc(g)*lc(g): good reduction of genus one, "
      "#C(F_p) >= p + 1 - 2 sqrt(p) > 0 and a smooth F_p-point lifts by Hensel");
  return report;
}

ConicPair::ConicPair(ExactInt d1_, ExactInt d2_, ExactInt e1_, ExactInt e2_, ExactInt e3_)
    : d1(std::move(d1_)), d2(std::move(d2_)), e1(std::move(e1_)), e2(std::move(e2_)), e3(std::move(e3_)) {
  if (d1 == 0 || d2 == 0) throw Error(ErrorCode::ZeroInput, "conic pair needs d1 d2 != 0");
  if (e1 == e2 || e1 == e3 || e2 == e3) throw Error(ErrorCode::DegenerateCurve, "conic pair needs distinct roots");
}

namespace {

bool conic_point_ok(const ConicPair& c, const ExactRat& x, const Place& v) {
  const ExactRat diffs[3] = {x - ExactRat(c.e1), x - ExactRat(c.e2), x - ExactRat(c.e3)};
  const ExactInt targets[3] = {c.d1, c.d2, c.d1 * c.d2};
  for (int i = 0; i < 3; ++i) {
    if (diffs[i] == 0) continue;
    if (!(square_class(diffs[i], v) == square_class(ExactRat(targets[i]), v))) return false;
  }
  return true;
}

}  // namespace

LocalVerdict conic_pair_solvable_at(const ConicPair& c, const Place& v) {
  LocalVerdict out;
  out.place = v;
  if (square_class(ExactRat(c.d1), v).is_trivial() && square_class(ExactRat(c.d2), v).is_trivial()) {
    out.solvable = true;
    out.witness_at_infinity = true;
    out.reason = "trivial class: the identity";
    return out;
  }
  for (const ExactInt& e : {c.e1, c.e2, c.e3}) {
    if (conic_point_ok(c, ExactRat(e), v)) {
      out.solvable = true;
      out.witness = ExactRat(e);
      out.reason = "two-torsion point";
      return out;
    }
  }
  if (v.is_real()) {
    std::vector<ExactInt> roots{c.e1, c.e2, c.e3};
    std::sort(roots.begin(), roots.end());
    const std::vector<ExactRat> samples{ExactRat(roots[0] - 1), ExactRat(roots[0] + roots[1], 2),
                                        ExactRat(roots[1] + roots[2], 2), ExactRat(roots[2] + 1)};
    for (const auto& x : samples) {
      ExactRat xc = x;
      xc.canonicalize();
      if (conic_point_ok(c, xc, v)) {
        out.solvable = true;
        out.witness = xc;
        out.reason = "sign pattern realized";
        return out;
      }
    }
    out.reason = "no interval realizes the sign pattern";
    return out;
  }

  const ExactInt& p = v.prime();
  // x = u / p^(2s) with u in Z_p covers v(x) >= -2s; beyond that every x - e_i has
  // the class of x and only the trivial pair occurs.
  const ExactInt scale = p == 2 ? ExactInt(4) : ExactInt(1);
  std::vector<IntPoly> forms;
  for (const ExactInt& e : {c.e1, c.e2, c.e3}) forms.push_back(IntPoly(std::vector<ExactInt>{-scale * e, 1}));
  const ExactInt disc = 16 * pow_int((c.e1 - c.e2) * (c.e1 - c.e3) * (c.e2 - c.e3), 2) * scale;
  const unsigned depth = search_depth(valuation(disc, p), p);
  const ClassSearchResult r = padic_class_search(forms, {c.d1, c.d2, c.d1 * c.d2}, p, 0, 0, depth);
  out.discs = r.discs;
  out.depth = r.depth;
  if (r.witness) {
    out.solvable = true;
    out.witness = ExactRat(*r.witness, scale);
    out.witness->canonicalize();
    out.reason = "x realizes the class pair";
    return out;
  }
  if (r.exhausted) {
    throw Error(ErrorCode::PrecisionExhausted, "conic pair at p = " + to_string(p) + ": undecided residue " +
                                                   to_string(*r.undecided_center));
  }
  out.reason = "every residue disc refuted at depth " + std::to_string(out.depth);
  return out;
}

bool verify_conic_witness(const ConicPair& c, const LocalVerdict& verdict) {
  if (!verdict.solvable) return false;
  if (verdict.witness_at_infinity) {
    return square_class(ExactRat(c.d1), verdict.place).is_trivial() &&
           square_class(ExactRat(c.d2), verdict.place).is_trivial();
  }
  if (!verdict.witness) return false;
  return conic_point_ok(c, *verdict.witness, verdict.place);
}

}  // namespace shadiv
