// Acceptance run: one PASS/FAIL line per criterion, with wall-clock time.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "shadiv/errors.hpp"
#include "shadiv/reports.hpp"

using namespace shadiv;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Collects failed conditions; the first one becomes the detail line.
class Checks {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && first_.empty()) first_ = what;
    all_ = all_ && ok;
  }
  void note(const std::string& text) { notes_ += (notes_.empty() ? "" : "; ") + text; }
  Outcome outcome() const { return {all_, all_ ? notes_ : "failed: " + first_}; }

 private:
  bool all_ = true;
  std::string first_, notes_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, const char* format = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

const CurveE2& curve() {
  static const CurveE2 E = CurveE2::parse("80 205");
  return E;
}

const GlobalClass kXi(1, 5);

const char* const kTorsors[] = {"(11x^2-67x+31)*(-x^2-3x-1)", "(11x^2-34x+19)*(x^2+6x+4)",
                                "(11x^2-89x-11)*(-x^2-x+1)"};

std::vector<std::uint64_t> random_primes(std::size_t count, std::uint64_t limit, std::uint32_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(3, limit);
  std::vector<std::uint64_t> out;
  while (out.size() < count) {
    const std::uint64_t r = dist(rng);
    if (is_prime_u64(r)) out.push_back(r);
  }
  return out;
}

bool contains_place(const LocalFactorScan& scan, const Place& v) {
  return std::any_of(scan.checks.begin(), scan.checks.end(), [&](const auto& w) { return w.place == v; });
}

// ---------------------------------------------------------------------------

Outcome delta_table(double budget) {
  Checks c;
  const CurveE2& E = curve();
  const std::vector<std::pair<Point, GlobalClass>> expected{
      {Point{ExactRat(0), ExactRat(0)}, GlobalClass(41, 5)},
      {Point{ExactRat(-80), ExactRat(0)}, GlobalClass(-5, -1)},
      {Point{ExactRat(0), ExactRat(0), true}, GlobalClass(1, 1)},
      {Point{ExactRat(-205), ExactRat(0)}, GlobalClass(-205, -5)}};
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<GlobalClass> got;
  for (const auto& [P, d] : expected) got.push_back(delta_of_point(E, P));
  const double dt = seconds_since(t0);
  for (std::size_t i = 0; i < expected.size(); ++i)
    c.require(got[i] == expected[i].second, "delta of " + expected[i].first.to_string() + " is " + got[i].to_string());
  c.require(dt < budget, "table took " + fmt(dt) + " s");
  c.note("table in " + fmt(dt * 1e6, "%.1f") + " us");
  return c.outcome();
}

Outcome everywhere_verified() {
  Checks c;
  const EverywhereReport r = verify_everywhere(curve(), kXi, 10000);
  c.require(r.verified, "(1,5) not verified");
  const std::vector<std::string> labels = r.case_labels();
  const std::set<std::string> got(labels.begin(), labels.end());
  const std::set<std::string> want{"5 square", "41 square", "-5 square", "none square"};
  c.require(got == want, "pattern labels differ");
  for (const auto& p : r.patterns) {
    c.require(p.in_kernel, "pattern " + p.label + " outside the kernel");
    c.require(p.witness_prime && *p.witness_prime <= 10000, "pattern " + p.label + " without witness prime");
    if (!p.witness_prime) continue;
    // The witness realizes its signs, checked by Euler's criterion on the raw prime.
    const ExactInt w(static_cast<unsigned long>(*p.witness_prime));
    for (std::size_t i = 0; i < r.generators.size(); ++i) {
      ExactInt g = r.generators[i] % w;
      if (g < 0) g += w;
      ExactInt e;
      mpz_powm(e.get_mpz_t(), g.get_mpz_t(), ExactInt((w - 1) / 2).get_mpz_t(), w.get_mpz_t());
      const int sign = e == 1 ? 1 : -1;
      c.require(sign == p.signs[i], "witness " + std::to_string(*p.witness_prime) + " does not realize its signs");
    }
  }
  std::set<std::string> bad;
  for (const auto& b : r.bad_places) {
    c.require(b.in_kernel, "bad place " + b.place.label() + " fails");
    bad.insert(b.place.label());
  }
  c.require(bad == std::set<std::string>{"2", "5", "41", "real"}, "bad places are not {2, 5, 41, real}");
  c.note(std::to_string(r.patterns.size()) + " patterns, " + std::to_string(got.size()) + " labels");
  return c.outcome();
}

Outcome selmer_group() {
  Checks c;
  const SelmerGroup S = selmer2(curve());
  c.require(S.dimension == 4, "dimension " + std::to_string(S.dimension));
  c.require(S.contains(kXi), "(1,5) not in Sel_2");
  const Sha2Quotient q = sha2_classes(S);
  c.require(q.cosets.size() == 3, std::to_string(q.cosets.size()) + " nontrivial cosets");
  c.note("dimension " + std::to_string(S.dimension) + ", " + std::to_string(q.cosets.size()) + " cosets");
  return c.outcome();
}

Outcome torsors_els() {
  Checks c;
  for (const char* t : kTorsors) {
    const QuarticCover cover = QuarticCover::parse(t);
    const ElsReport r = quartic_els(cover);
    c.require(r.els(), std::string(t) + " not locally solvable everywhere");
    for (const auto& v : r.places)
      c.require(verify_quartic_witness(cover, v), std::string(t) + " witness rejected at " + v.place.label());
  }
  c.note("3 quartics with witnesses");
  return c.outcome();
}

Outcome lift_classification() {
  Checks c;
  const auto cls = classify_sha_lifts(curve());
  int marked = 0;
  for (const auto& cc : cls) {
    const bool has_xi =
        std::find(cc.coset.members.begin(), cc.coset.members.end(), kXi) != cc.coset.members.end();
    if (cc.has_everywhere_trivial_lift()) {
      ++marked;
      c.require(has_xi, "marked coset " + cc.coset.representative.to_string() + " lacks (1,5)");
      continue;
    }
    c.require(cc.lifts.size() == 4, "coset " + cc.coset.representative.to_string() + " has " +
                                         std::to_string(cc.lifts.size()) + " lifts");
    for (const auto& l : cc.lifts) {
      c.require(!l.verified && l.witness_place.has_value(), "lift " + l.lift.to_string() + " not refuted");
      if (l.witness_place)
        c.require(!locally_in_e4_kernel(curve(), l.lift, *l.witness_place),
                  "witness place of " + l.lift.to_string() + " does not refute it");
    }
  }
  c.require(cls.size() == 3, std::to_string(cls.size()) + " cosets classified");
  c.require(marked == 1, std::to_string(marked) + " cosets marked");
  c.note(std::to_string(marked) + " marked of " + std::to_string(cls.size()));
  return c.outcome();
}

Outcome l_value() {
  Checks c;
  const LValueEstimate l = l_value_approx(curve(), 4000);
  c.require(std::fabs(l.value) > 0.05, "|L| = " + fmt(std::fabs(l.value)));
  c.require(l.change < 1e-3, "change " + fmt(l.change));
  c.note("L = " + fmt(l.value, "%.10f") + ", change " + fmt(l.change) + ", N = " + to_string(l.conductor));
  return c.outcome();
}

Outcome cyclic_two_seventeen() {
  Checks c;
  const KummerFamily F(2, 17);
  const LocalFactorScan scan = local_factor_scan(F, 1000);
  c.require(scan.passed, "scan to 1000 failed");
  for (const Place& v : {Place::finite(2ul), Place::finite(17ul), Place::real()})
    c.require(contains_place(scan, v), "scan misses " + v.label());
  for (const auto& w : scan.checks) c.require(verify_local_factor(F, w), "witness at " + w.place.label());
  const auto certs = obstruction_prime_search(F, 50);
  std::vector<std::uint64_t> rs;
  for (const auto& cert : certs) {
    rs.push_back(cert.r);
    c.require(verify_obstruction(cert), "certificate for r = " + std::to_string(cert.r));
  }
  for (std::uint64_t r : {3ul, 7ul})
    c.require(std::find(rs.begin(), rs.end(), r) != rs.end(), "obstruction list misses " + std::to_string(r));
  std::string list;
  for (auto r : rs) list += (list.empty() ? "" : ",") + std::to_string(r);
  c.note(std::to_string(scan.checks.size()) + " places, obstruction primes {" + list + "}");
  return c.outcome();
}

Outcome cyclic_odd() {
  Checks c;
  for (const auto& [p, q, g] : {std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>{3, 19, 10}, {5, 101, 56}}) {
    const std::string fam = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
    c.require(admissible(p, q), fam + " not admissible");
    c.require(genus(p) == g, fam + " genus " + std::to_string(genus(p)));
    const KummerFamily F(p, q);
    const LocalFactorScan scan = local_factor_scan(F, 1000);
    c.require(scan.passed, fam + " scan failed");
    for (const auto& w : scan.checks) c.require(verify_local_factor(F, w), fam + " witness at " + w.place.label());
    const auto certs = obstruction_prime_search(F, 1000);
    c.require(!certs.empty(), fam + " has no obstruction prime below 1000");
    for (const auto& cert : certs)
      c.require(verify_obstruction(cert), fam + " certificate for r = " + std::to_string(cert.r));
    c.note(fam + ": genus " + std::to_string(genus(p)) + ", " + std::to_string(certs.size()) +
           " obstruction primes, least " + (certs.empty() ? std::string("-") : std::to_string(certs.front().r)));
  }
  return c.outcome();
}

Outcome property_suites() {
  Checks c;
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> families{{2, 17}, {3, 19}, {5, 101}};

  // Pigeonhole: some factor is linear at every random prime.
  for (const auto& [p, q] : families) {
    const KummerFamily F(p, q);
    for (const std::uint64_t r : random_primes(500, 1000000, static_cast<std::uint32_t>(q))) {
      if (r == p || r == q) continue;
      bool ok = false;
      try {
        ok = verify_local_factor(F, local_factor_check(F, Place::finite(r)));
      } catch (const Error&) {
      }
      c.require(ok, "pigeonhole fails at r = " + std::to_string(r) + " for p = " + std::to_string(p));
    }
  }

  // Mutual exclusion: away from p-th powers mod p^2 at most one tau is prime to p.
  for (const auto& [p, q] : families) {
    const KummerFamily F(p, q);
    for (const std::uint64_t s : primes_up_to(3000)) {
      if (s == p || s == q || pth_power_mod_p2(s, p)) continue;
      int prime_to_p = 0;
      for (int i = 1; i <= 3; ++i) prime_to_p += tau_parity(i, s, F) == TauParity::PrimeToP;
      c.require(prime_to_p <= 1, "tau exclusion fails at s = " + std::to_string(s));
    }
  }

  // delta is a homomorphism: the raw representatives of delta(P), delta(Q) and
  // delta(P + Q) multiply to squares.
  std::size_t pairs = 0;
  for (const char* name : {"3 8", "5 21", "80 205", "11 30"}) {
    const CurveE2 E = CurveE2::parse(name);
    std::vector<Point> pts = point_search(E, {2000, 20});
    if (pts.size() > 8) pts.resize(8);
    for (const auto& P : pts) {
      for (const auto& Q : pts) {
        const Point R = E.add(P, Q);
        if (P.infinity || Q.infinity || R.infinity) continue;
        const auto a = delta_representatives(E, P), b = delta_representatives(E, Q), s = delta_representatives(E, R);
        const ExactInt x = a.first * b.first * s.first, y = a.second * b.second * s.second;
        c.require(x > 0 && y > 0 && mpz_perfect_square_p(x.get_mpz_t()) && mpz_perfect_square_p(y.get_mpz_t()),
                  std::string("delta not multiplicative on ") + name);
        ++pairs;
      }
    }
  }

  // Local images against the points counted modulo p^3.
  std::size_t images = 0;
  for (const char* name : {"1 2", "1 3", "2 3", "1 4"}) {
    const CurveE2 E = CurveE2::parse(name);
    for (std::uint64_t p : {3, 5, 7, 11, 13}) {
      if (E.discriminant() % ExactInt(static_cast<unsigned long>(p)) == 0) continue;
      const Place v = Place::finite(p);
      std::vector<SquareClassPair> brute;
      for (const auto& t : torsion_image_set(E)) brute.push_back(localize(t, v));
      const std::uint64_t m = oracle::ipow(p, 3);
      for (std::uint64_t x = 0; x < m; ++x) {
        const ExactRat X(ExactInt(static_cast<unsigned long>(x)));
        const ExactRat f = E.rhs(X);
        if (f == 0 || !oracle::is_local_square(f, p)) continue;
        brute.push_back(square_class_pair(X - ExactRat(E.e1()), X - ExactRat(E.e2()), v));
      }
      const LocalImage img = local_image(E, v);
      for (const auto& b : brute) c.require(img.contains(b), std::string("local image misses a point on ") + name);
      for (const auto& k : img.classes)
        c.require(std::find(brute.begin(), brute.end(), k) != brute.end(),
                  std::string("local image class without a point on ") + name);
      ++images;
    }
  }

  // Replay determinism: identical bytes on two runs, and replay reproduces.
  for (const auto& make : std::vector<std::function<Report()>>{
           [] { return report_verify_4div(curve()); }, [] { return report_cyclic_search(3, 19, 300); },
           [] { return report_quartic_els({kTorsors[0], kTorsors[1], kTorsors[2]}); }}) {
    const Report a = make(), b = make();
    c.require(dump_certificate(a.certificate) == dump_certificate(b.certificate),
              a.certificate["command"].get<std::string>() + " not deterministic");
    c.require(replay(a.certificate).reproduced, a.certificate["command"].get<std::string>() + " does not replay");
  }

  c.note(std::to_string(pairs) + " delta pairs, " + std::to_string(images) + " local images");
  return c.outcome();
}

Outcome grid_search() {
  Checks c;
  SearchOptions opts;
  opts.amin = 1;
  opts.amax = 300;
  opts.bmax = 300;
  const SearchSummary s = search_4div(opts);
  const bool found =
      std::any_of(s.hits.begin(), s.hits.end(), [](const SearchHit& h) { return h.a == 80 && h.b == 205; });
  c.require(found, "(80,205) not among the hits");
  c.note(std::to_string(s.curves) + " curves, " + std::to_string(s.hits.size()) + " hits");
  return c.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "delta table of the torsion points", 1e-3, [] { return delta_table(1e-3); }},
      {2, "(1,5) everywhere in the E[4] kernel with witness primes", 10, everywhere_verified},
      {3, "2-Selmer group of dimension 4 with three Sha[2] cosets", 60, selmer_group},
      {4, "three quartic torsors everywhere locally solvable", 30, torsors_els},
      {5, "lift classification marks only the (1,5) coset", 60, lift_classification},
      {6, "L(E,1) nonzero and stable with 4000 terms", 60, l_value},
      {7, "cyclic family (2,17): local factors and obstruction primes", 30, cyclic_two_seventeen},
      {8, "cyclic families (3,19) and (5,101)", 300, cyclic_odd},
      {9, "property suites", 600, property_suites},
      {10, "grid search 1 <= a < b <= 300 finds (80,205)", 1800, grid_search},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double dt = seconds_since(t0);
    if (dt > cr.budget) {
      out.pass = false;
      out.detail = "over budget of " + fmt(cr.budget) + " s; " + out.detail;
    }
    failed += !out.pass;
    std::printf("%s criterion %d: %s (%.3f s) %s\n", out.pass ? "PASS" : "FAIL", cr.id, cr.name, dt,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
