#include "doctest.h"

#include <algorithm>
#include <set>

#include "shadiv/divisibility.hpp"

using namespace shadiv;

namespace {

const CurveE2& curve_1025() {
  static const CurveE2 E = CurveE2::parse("80 205");
  return E;
}

const SelmerGroup& selmer_1025() {
  static const SelmerGroup sel = selmer2(curve_1025());
  return sel;
}

// Index of the sign pattern realized at a prime p outside S.
std::size_t realized_pattern(const EverywhereReport& rep, std::uint64_t p) {
  std::size_t s = 0;
  for (std::size_t i = 0; i < rep.generators.size(); ++i)
    if (jacobi(rep.generators[i], ExactInt(static_cast<unsigned long>(p))) == -1) s |= std::size_t{1} << i;
  return s;
}

bool outside(const CurveE2& E, std::uint64_t p) {
  const auto bad = E.bad_primes();
  return p != 2 && !std::binary_search(bad.begin(), bad.end(), ExactInt(static_cast<unsigned long>(p)));
}

// All classes with entries supported on -1 and the bad primes.
std::vector<GlobalClass> all_classes(const CurveE2& E) {
  std::vector<ExactInt> gens{-1};
  for (const auto& p : E.bad_primes()) gens.push_back(p);
  std::vector<ExactInt> units;
  for (std::size_t m = 0; m < (std::size_t{1} << gens.size()); ++m) {
    ExactInt d = 1;
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (m >> i & 1) d *= gens[i];
    units.push_back(d);
  }
  std::vector<GlobalClass> out;
  for (const auto& a : units)
    for (const auto& b : units) out.emplace_back(a, b);
  return out;
}

}  // namespace

TEST_CASE("E[4] kernel membership at single places") {
  const CurveE2& E = curve_1025();
  // At 3: (-5|3) = 1 and (5|3) = -1, so (1,5) agrees with (-5,-1).
  const auto j = e4_kernel_match(E, GlobalClass(1, 5), Place::finite(3ul));
  REQUIRE(j);
  CHECK(torsion_image_set(E)[*j] == GlobalClass(-5, -1));
  for (const auto& v : E.bad_places()) CHECK(locally_in_e4_kernel(E, GlobalClass(1, 1), v));
  // (-1,-1) lies in another Sha coset and fails at some small prime.
  bool refuted_somewhere = false;
  for (const std::uint64_t p : primes_up_to(200))
    if (!locally_in_e4_kernel(E, GlobalClass(-1, -1), Place::finite(p))) refuted_somewhere = true;
  CHECK(refuted_somewhere);
}

TEST_CASE("everywhere check of (1,5) on y^2 = x(x+80)(x+205)") {
  const CurveE2& E = curve_1025();
  const EverywhereReport rep = verify_everywhere(E, GlobalClass(1, 5));
  CHECK(rep.verified);
  CHECK_FALSE(rep.witness_search_exhausted);
  CHECK_FALSE(rep.failure);
  CHECK(rep.generators == std::vector<ExactInt>{-1, 5, 41});
  REQUIRE(rep.patterns.size() == 8);
  REQUIRE(rep.bad_places.size() == 4);
  for (const auto& pc : rep.bad_places) CHECK(pc.in_kernel);
  std::set<std::string> labels;
  for (const auto& pc : rep.patterns) {
    CHECK(pc.in_kernel);
    REQUIRE(pc.witness_prime);
    CHECK(*pc.witness_prime <= 10000);
    labels.insert(pc.label);
  }
  CHECK(labels == std::set<std::string>{"5 square", "41 square", "-5 square", "none square"});
  // -1 a square, 5 and 41 non-squares: none of 5, -5, 41 is a square.
  CHECK(rep.patterns[6].label == "none square");
  CHECK(*rep.patterns[6].matched == GlobalClass(-205, -5));
  CHECK(rep.patterns[7].label == "-5 square");
}

TEST_CASE("everywhere check of the trivial class") {
  const EverywhereReport rep = verify_everywhere(curve_1025(), GlobalClass(1, 1));
  CHECK(rep.verified);
  for (const auto& pc : rep.patterns) CHECK(pc.label == "trivial class");
}

TEST_CASE("everywhere check rejects classes off S") {
  CHECK_THROWS_AS(verify_everywhere(curve_1025(), GlobalClass(3, 1)), Error);
}

TEST_CASE("a class from another Sha coset is refuted at a real failing place") {
  const CurveE2& E = curve_1025();
  const EverywhereReport rep = verify_everywhere(E, GlobalClass(-1, -1));
  CHECK_FALSE(rep.verified);
  REQUIRE(rep.failure);
  CHECK_FALSE(locally_in_e4_kernel(E, GlobalClass(-1, -1), *rep.failure));
}

TEST_CASE("pattern verdicts agree with direct checks at sampled good primes") {
  const char* curves[] = {"80 205", "11 30", "20 45", "3 8"};
  const auto primes = primes_up_to(100000);
  for (const char* label : curves) {
    const CurveE2 E = CurveE2::parse(label);
    const SelmerGroup sel = selmer2(E);
    for (const auto& xi : sel.elements) {
      const EverywhereReport rep = verify_everywhere(E, xi, 2000);
      for (std::size_t k = 0; k < primes.size(); k += 97) {
        const std::uint64_t p = primes[k];
        if (!outside(E, p)) continue;
        const auto& pc = rep.patterns[realized_pattern(rep, p)];
        CHECK(pc.in_kernel == locally_in_e4_kernel(E, xi, Place::finite(p)));
      }
      for (const auto& pc : rep.patterns) {
        if (!pc.witness_prime) continue;
        CHECK(pc.in_kernel == locally_in_e4_kernel(E, xi, Place::finite(*pc.witness_prime)));
      }
    }
  }
}

TEST_CASE("verdicts are invariant under the torsion image") {
  const CurveE2& E = curve_1025();
  const auto torsion = torsion_image_set(E);
  for (const auto& xi : selmer_1025().elements) {
    const bool base = verify_everywhere(E, xi, 2000).verified;
    for (const auto& t : torsion) CHECK(verify_everywhere(E, xi * t, 2000).verified == base);
  }
}

TEST_CASE("lift classification on y^2 = x(x+80)(x+205)") {
  const CurveE2& E = curve_1025();
  const auto classes = classify_sha_lifts(E, sha2_classes(selmer_1025()));
  REQUIRE(classes.size() == 3);
  int marked = 0;
  for (const auto& cc : classes) {
    REQUIRE(cc.lifts.size() == 4);
    const bool has_xi =
        std::find(cc.coset.members.begin(), cc.coset.members.end(), GlobalClass(1, 5)) != cc.coset.members.end();
    CHECK(cc.has_everywhere_trivial_lift() == has_xi);
    if (cc.has_everywhere_trivial_lift()) ++marked;
    for (const auto& l : cc.lifts) {
      if (has_xi) {
        CHECK(l.verified);
      } else {
        CHECK_FALSE(l.verified);
        REQUIRE(l.witness_place);
        CHECK_FALSE(locally_in_e4_kernel(E, l.lift, *l.witness_place));
      }
    }
  }
  CHECK(marked == 1);
}

TEST_CASE("lift classification on curves without Sha[2]") {
  CHECK(classify_sha_lifts(CurveE2::parse("1 2")).empty());
  CHECK(classify_sha_lifts(CurveE2::parse("3 8")).empty());
}

TEST_CASE("non-divisibility certificate for y^2 = x(x+80)(x+205)") {
  const DivisibilityCertificate cert = certify_nondivisibility(curve_1025());
  CHECK(cert.verified);
  CHECK(cert.failed_step.empty());
  REQUIRE(cert.witness);
  CHECK(cert.witness->xi == GlobalClass(1, 5));
  CHECK(cert.selmer.dimension == 4);
  CHECK(cert.selmer.contains(GlobalClass(1, 5)));
  CHECK(cert.rank_zero_evidence);
  CHECK(cert.l_value.conductor == 1025);
  CHECK(cert.l_value.value == doctest::Approx(2.19055709503632).epsilon(1e-9));
  for (const auto& t : cert.tried) CHECK_FALSE(verify_everywhere(curve_1025(), t).verified);
}

TEST_CASE("no witness class on y^2 = x(x+1)(x+2)") {
  try {
    certify_nondivisibility(CurveE2::parse("1 2"));
    FAIL("expected NoWitnessClass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoWitnessClass);
  }
}

TEST_CASE("delta image of the 2-power torsion") {
  // y^2 = x(x+1)(x+9) has torsion Z/4 x Z/2 with (-3, 6) of order 4 and (0,0) = 2(-3,6).
  const CurveE2 E = CurveE2::parse("1 9");
  const auto image = torsion_delta_image(E);
  CHECK(image.size() == 4);
  CHECK(std::binary_search(image.begin(), image.end(), delta_of_point(E, Point{-3, 6, false})));
  CHECK(delta_of_point(E, E.two_torsion(0)).is_trivial());
  // Full 2-torsion only: the image is the torsion image set.
  const auto plain = torsion_delta_image(curve_1025());
  auto expected = torsion_image_set(curve_1025());
  std::sort(expected.begin(), expected.end());
  CHECK(plain == expected);
}

TEST_CASE("bitmask class search agrees with the everywhere check") {
  const char* curves[] = {"80 205", "1 2", "3 8", "11 30", "20 45", "1 9", "5 9", "9 25", "7 15", "34 50"};
  for (const char* label : curves) {
    const CurveE2 E = CurveE2::parse(label);
    const auto image = torsion_delta_image(E);
    std::vector<GlobalClass> expected;
    for (const auto& c : all_classes(E)) {
      if (std::binary_search(image.begin(), image.end(), c)) continue;
      if (verify_everywhere(E, c, 0).verified) expected.push_back(c);
    }
    std::sort(expected.begin(), expected.end());
    CAPTURE(label);
    CHECK(locally_trivial_classes(E) == expected);
  }
  const auto found = locally_trivial_classes(curve_1025());
  CHECK(std::binary_search(found.begin(), found.end(), GlobalClass(1, 5)));
}

TEST_CASE("grid search on a small box") {
  SearchOptions opts;
  opts.amax = 120;
  opts.bmax = 120;
  const SearchSummary s = search_4div(opts);
  CHECK(s.curves == 120 * 119 / 2);
  // Every curve below has analytic rank 0 and nontrivial Sha[2] (PARI/GP
  // ellanalyticrank and ellrank), with L(E,1) matching to 1e-4.
  std::vector<std::pair<long, long>> found;
  for (const auto& h : s.hits) found.emplace_back(h.a, h.b);
  CHECK(found == std::vector<std::pair<long, long>>{{17, 34}, {32, 34}, {98, 112}});
  CHECK(s.hits.size() + s.rank_positive_or_unknown == s.locally_trivial_candidates);
  for (const auto& h : s.hits) {
    const CurveE2 E(0, -h.a, -h.b);
    REQUIRE_FALSE(h.witnesses.empty());
    CHECK(verify_everywhere(E, h.witnesses.front(), 0).verified);
    CHECK(h.l_value > opts.l_threshold);
  }
  SearchOptions serial = opts;
  serial.threads = 1;
  const SearchSummary again = search_4div(serial);
  REQUIRE(again.hits.size() == s.hits.size());
  for (std::size_t i = 0; i < s.hits.size(); ++i) {
    CHECK(again.hits[i].a == s.hits[i].a);
    CHECK(again.hits[i].b == s.hits[i].b);
    CHECK(again.hits[i].witnesses == s.hits[i].witnesses);
  }
  CHECK_THROWS_AS(search_4div(SearchOptions{5, 3, 10}), Error);
}
