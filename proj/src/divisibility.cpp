#include "shadiv/divisibility.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>

namespace shadiv {

std::optional<int> e4_kernel_match(const CurveE2& E, const GlobalClass& xi, const Place& v) {
  const SquareClassPair target = localize(xi, v);
  const auto torsion = torsion_image_set(E);
  for (std::size_t j = 0; j < torsion.size(); ++j) {
    if (localize(torsion[j], v) == target) return static_cast<int>(j);
  }
  return std::nullopt;
}

bool locally_in_e4_kernel(const CurveE2& E, const GlobalClass& xi, const Place& v) {
  return e4_kernel_match(E, xi, v).has_value();
}

std::vector<std::string> EverywhereReport::case_labels() const {
  std::vector<std::string> out;
  for (const auto& c : patterns)
    if (std::find(out.begin(), out.end(), c.label) == out.end()) out.push_back(c.label);
  return out;
}

namespace {

void add_support(const ExactInt& d, std::set<ExactInt>& primes, bool& negative) {
  if (d < 0) negative = true;
  for (const auto& p : factorize(d).primes()) primes.insert(p);
}

// Product of the signs of the generators dividing the squarefree d.
int pattern_sign(const ExactInt& d, const std::vector<ExactInt>& gens, const std::vector<int>& signs) {
  int s = 1;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const bool divides = gens[i] == -1 ? d < 0 : mpz_divisible_p(d.get_mpz_t(), gens[i].get_mpz_t()) != 0;
    if (divides) s *= signs[i];
  }
  return s;
}

std::string case_label(const GlobalClass& xi, const std::vector<GlobalClass>& torsion, int j) {
  if (j == static_cast<int>(torsion.size()) - 1) return "none square";
  const GlobalClass c = xi * torsion[j];
  if (c.is_trivial()) return "trivial class";
  std::vector<ExactInt> entries;
  for (const auto& d : {c.d1, c.d2})
    if (d != 1 && std::find(entries.begin(), entries.end(), d) == entries.end()) entries.push_back(d);
  std::string label;
  for (std::size_t i = 0; i < entries.size(); ++i) label += (i ? " and " : "") + to_string(entries[i]);
  return label + " square";
}

}  // namespace

EverywhereReport verify_everywhere(const CurveE2& E, const GlobalClass& xi, std::uint64_t witness_bound) {
  EverywhereReport rep;
  rep.xi = xi;
  rep.torsion_image = torsion_image_set(E);
  rep.witness_bound = witness_bound;

  const std::vector<ExactInt> bad = E.bad_primes();
  for (const auto& d : {xi.d1, xi.d2}) {
    for (const auto& p : factorize(d).primes()) {
      if (!std::binary_search(bad.begin(), bad.end(), p)) {
        throw Error(ErrorCode::InvalidArgument, xi.to_string() + " is not supported on the bad primes");
      }
    }
  }

  std::set<ExactInt> primes;
  bool negative = false;
  add_support(xi.d1, primes, negative);
  add_support(xi.d2, primes, negative);
  for (const auto& t : rep.torsion_image) {
    add_support(t.d1, primes, negative);
    add_support(t.d2, primes, negative);
  }
  rep.generators.push_back(-1);
  rep.generators.insert(rep.generators.end(), primes.begin(), primes.end());

  rep.verified = true;
  for (const auto& v : E.bad_places()) {
    PlaceCheck pc;
    pc.place = v;
    if (const auto j = e4_kernel_match(E, xi, v)) {
      pc.in_kernel = true;
      pc.matched = rep.torsion_image[*j];
    } else if (rep.verified) {
      rep.verified = false;
      rep.failure = v;
    }
    rep.bad_places.push_back(pc);
  }

  // Sign patterns at primes outside S: every entry is a unit there, so its
  // square class is the product of the signs of its prime factors.
  const std::size_t m = rep.generators.size();
  const std::size_t count = std::size_t{1} << m;
  rep.patterns.resize(count);
  for (std::size_t s = 0; s < count; ++s) {
    PatternCase& pc = rep.patterns[s];
    for (std::size_t i = 0; i < m; ++i) pc.signs.push_back((s >> i & 1) ? -1 : 1);
    for (std::size_t j = 0; j < rep.torsion_image.size(); ++j) {
      const GlobalClass c = xi * rep.torsion_image[j];
      if (pattern_sign(c.d1, rep.generators, pc.signs) == 1 && pattern_sign(c.d2, rep.generators, pc.signs) == 1) {
        pc.in_kernel = true;
        pc.matched = rep.torsion_image[j];
        pc.label = case_label(xi, rep.torsion_image, static_cast<int>(j));
        break;
      }
    }
    if (!pc.in_kernel) pc.label = "no match";
  }

  // Witness primes realizing each pattern.
  std::size_t missing = count;
  for (const std::uint64_t p : primes_up_to(witness_bound)) {
    if (missing == 0) break;
    if (p == 2 || std::binary_search(bad.begin(), bad.end(), ExactInt(static_cast<unsigned long>(p)))) continue;
    std::size_t s = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (jacobi(rep.generators[i], ExactInt(static_cast<unsigned long>(p))) == -1) s |= std::size_t{1} << i;
    if (!rep.patterns[s].witness_prime) {
      rep.patterns[s].witness_prime = p;
      --missing;
    }
  }
  rep.witness_search_exhausted = missing > 0;

  for (const auto& pc : rep.patterns) {
    if (pc.in_kernel) continue;
    if (rep.verified) {
      rep.verified = false;
      if (pc.witness_prime) rep.failure = Place::finite(*pc.witness_prime);
    }
  }
  return rep;
}

bool CosetClassification::has_everywhere_trivial_lift() const {
  return std::any_of(lifts.begin(), lifts.end(), [](const LiftVerdict& l) { return l.verified; });
}

std::vector<CosetClassification> classify_sha_lifts(const CurveE2& E, const Sha2Quotient& quotient,
                                                    std::uint64_t witness_bound) {
  std::vector<CosetClassification> out;
  for (const auto& coset : quotient.cosets) {
    CosetClassification cc;
    cc.coset = coset;
    for (const auto& lift : coset.members) {
      const EverywhereReport rep = verify_everywhere(E, lift, witness_bound);
      cc.lifts.push_back(LiftVerdict{lift, rep.verified, rep.failure});
    }
    out.push_back(std::move(cc));
  }
  return out;
}

std::vector<CosetClassification> classify_sha_lifts(const CurveE2& E) {
  return classify_sha_lifts(E, sha2_classes(selmer2(E)));
}

WeierstrassModel weierstrass_model(const CurveE2& E) { return WeierstrassModel{0, E.a2(), 0, E.a4(), E.a6()}; }

LValueEstimate l_value_approx(const CurveE2& E, std::size_t terms, const std::optional<ExactInt>& conductor) {
  return l_value_approx(weierstrass_model(E), terms, conductor);
}

namespace {

bool analytic_rank_zero(const LValueEstimate& l, double threshold) {
  const double uncertainty = l.change + l.tail_bound;
  return l.root_number == 1 && std::fabs(l.value) > threshold && std::fabs(l.value) > 10 * uncertainty;
}

}  // namespace

DivisibilityCertificate certify_nondivisibility(const CurveE2& E, const CertifyOptions& opts) {
  DivisibilityCertificate cert;
  cert.selmer = selmer2(E, opts.search);
  cert.quotient = sha2_classes(cert.selmer);
  for (const auto& xi : cert.selmer.elements) {
    if (std::binary_search(cert.selmer.point_image.begin(), cert.selmer.point_image.end(), xi)) continue;
    EverywhereReport rep = verify_everywhere(E, xi, opts.witness_bound);
    if (rep.verified) {
      cert.witness = std::move(rep);
      break;
    }
    cert.tried.push_back(xi);
  }
  if (!cert.witness) {
    throw Error(ErrorCode::NoWitnessClass,
                "no Selmer class outside the point image is everywhere locally in the E[4] kernel for " +
                    E.describe());
  }
  cert.l_value = l_value_approx(E, opts.l_terms);
  cert.rank_zero_evidence = analytic_rank_zero(cert.l_value, 1e-3);
  cert.verified = cert.rank_zero_evidence;
  if (!cert.verified) cert.failed_step = "rank-0 evidence";
  return cert;
}

std::vector<GlobalClass> torsion_delta_image(const CurveE2& E) {
  std::vector<Point> queue{E.two_torsion(0), E.two_torsion(1), E.two_torsion(2)};
  std::vector<GlobalClass> gens;
  auto rational_sqrt = [](const ExactRat& q, ExactRat* root) {
    if (q < 0) return false;
    const ExactInt n = q.get_num(), d = q.get_den();
    if (!is_square(n) || !is_square(d)) return false;
    ExactInt rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    *root = ExactRat(rn, rd);
    return true;
  };
  for (std::size_t k = 0; k < queue.size() && queue.size() < 64; ++k) {
    const Point P = queue[k];
    gens.push_back(delta_of_point(E, P));
    ExactRat r[3];
    bool halvable = true;
    for (int i = 0; i < 3 && halvable; ++i) halvable = rational_sqrt(P.x - ExactRat(E.root(i)), &r[i]);
    if (!halvable) continue;
    for (int signs = 0; signs < 8; ++signs) {
      ExactRat s[3];
      for (int i = 0; i < 3; ++i) s[i] = (signs >> i & 1) ? ExactRat(-r[i]) : r[i];
      ExactRat x = P.x + s[0] * s[1] + s[0] * s[2] + s[1] * s[2];
      x.canonicalize();
      ExactRat y;
      if (!rational_sqrt(E.rhs(x), &y)) continue;
      Point Q{x, y, false};
      const Point D = E.add(Q, Q);
      if (!(D == P) && !(D == E.negate(P))) continue;
      const bool seen = std::any_of(queue.begin(), queue.end(), [&](const Point& R) { return R.x == x; });
      if (!seen) queue.push_back(Q);
    }
  }
  return span(gens);
}

namespace {

// Class vectors over F_2 of the generators at one place.
struct PlaceVectors {
  std::vector<std::uint32_t> table;  // indexed by generator mask
};

std::uint32_t generator_vector(const ExactInt& g, const Place& v) {
  if (v.is_real()) return g < 0 ? 1u : 0u;
  const ExactInt& p = v.prime();
  if (p == 2) {
    if (g == 2) return 4u;
    const std::uint64_t u = mod_floor(g, 8);
    return static_cast<std::uint32_t>((u >> 1) & 3u);  // 1 -> 0, 3 -> 1, 5 -> 2, 7 -> 3
  }
  if (g == p) return 2u;
  return jacobi(g, p) == -1 ? 1u : 0u;
}

std::uint32_t mask_of(const ExactInt& d, const std::vector<ExactInt>& gens) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const bool divides = gens[i] == -1 ? d < 0 : mpz_divisible_p(d.get_mpz_t(), gens[i].get_mpz_t()) != 0;
    if (divides) m |= 1u << i;
  }
  return m;
}

bool parity(std::uint32_t x) { return __builtin_popcount(x) & 1; }

}  // namespace

std::vector<GlobalClass> locally_trivial_classes(const CurveE2& E) {
  std::vector<ExactInt> gens{-1};
  for (const auto& p : E.bad_primes()) gens.push_back(p);
  const std::size_t m = gens.size();
  if (m > 14) throw Error(ErrorCode::BoundExceeded, "too many bad primes for class enumeration");
  const std::uint32_t n = 1u << m;

  std::vector<std::pair<std::uint32_t, std::uint32_t>> torsion;
  for (const auto& t : torsion_image_set(E)) torsion.emplace_back(mask_of(t.d1, gens), mask_of(t.d2, gens));

  std::vector<PlaceVectors> places;
  for (const auto& v : E.bad_places()) {
    std::vector<std::uint32_t> gv;
    for (const auto& g : gens) gv.push_back(generator_vector(g, v));
    PlaceVectors pv;
    pv.table.assign(n, 0);
    for (std::uint32_t mask = 1; mask < n; ++mask) {
      const int low = __builtin_ctz(mask);
      pv.table[mask] = pv.table[mask & (mask - 1)] ^ gv[low];
    }
    places.push_back(std::move(pv));
  }

  std::vector<GlobalClass> image = torsion_delta_image(E);
  std::vector<GlobalClass> out;
  for (std::uint32_t m1 = 0; m1 < n; ++m1) {
    for (std::uint32_t m2 = 0; m2 < n; ++m2) {
      bool ok = true;
      for (const auto& pv : places) {
        bool any = false;
        for (const auto& [t1, t2] : torsion) {
          if (pv.table[m1 ^ t1] == 0 && pv.table[m2 ^ t2] == 0) {
            any = true;
            break;
          }
        }
        if (!any) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (std::uint32_t s = 0; s < n && ok; ++s) {
        bool any = false;
        for (const auto& [t1, t2] : torsion) {
          if (!parity((m1 ^ t1) & s) && !parity((m2 ^ t2) & s)) {
            any = true;
            break;
          }
        }
        ok = any;
      }
      if (!ok) continue;
      ExactInt d1 = 1, d2 = 1;
      for (std::size_t i = 0; i < m; ++i) {
        if (m1 >> i & 1) d1 *= gens[i];
        if (m2 >> i & 1) d2 *= gens[i];
      }
      const GlobalClass c(d1, d2);
      if (!std::binary_search(image.begin(), image.end(), c)) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SearchCell evaluate_search_cell(long a, long b, const SearchOptions& opts) {
  const CurveE2 E(0, -a, -b);
  SearchCell r;
  r.data.a = a;
  r.data.b = b;
  r.data.witnesses = locally_trivial_classes(E);
  if (r.data.witnesses.empty()) return r;
  r.candidate = true;
  const WeierstrassModel W = weierstrass_model(E);
  const ExactInt N = reduction_data(W).conductor;
  // e^(-2 pi n / sqrt(N)) < 1e-10 beyond 4 sqrt(N) terms.
  const std::size_t terms = std::max(opts.l_terms_min, static_cast<std::size_t>(4 * std::sqrt(N.get_d())) + 2);
  const LValueEstimate l = l_value_approx(W, terms, N);
  r.data.conductor = N;
  r.data.l_value = l.value;
  r.hit = analytic_rank_zero(l, opts.l_threshold);
  return r;
}

SearchSummary search_4div(const SearchOptions& opts) {
  if (opts.amin < 1 || opts.amax < opts.amin || opts.bmax <= opts.amin) {
    throw Error(ErrorCode::InvalidArgument, "search bounds must satisfy 1 <= amin <= amax and bmax > amin");
  }
  std::vector<std::pair<long, long>> cells;
  for (long a = opts.amin; a <= opts.amax; ++a)
    for (long b = a + 1; b <= opts.bmax; ++b) cells.emplace_back(a, b);

  std::vector<SearchCell> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
      results[i] = evaluate_search_cell(cells[i].first, cells[i].second, opts);
  };
  std::size_t width = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  width = std::min(width, cells.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < width; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SearchSummary summary;
  summary.curves = cells.size();
  for (auto& r : results) {
    if (!r.candidate) continue;
    ++summary.locally_trivial_candidates;
    if (r.hit) {
      summary.hits.push_back(std::move(r.data));
    } else {
      ++summary.rank_positive_or_unknown;
    }
  }
  return summary;
}

}  // namespace shadiv
