#pragma once

// Everywhere-local triviality of the E[4]-image of a class in H^1(Q, E[2]),
// lift classification of Sha[2] cosets, and the non-divisibility certificate
// for curves with full rational 2-torsion.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shadiv/l_series.hpp"
#include "shadiv/two_descent.hpp"

namespace shadiv {

/// True iff the class pair of xi at v equals that of some element of torsion_image_set(E).
bool locally_in_e4_kernel(const CurveE2& E, const GlobalClass& xi, const Place& v);
/// Index into torsion_image_set(E) of the first element matching xi at v.
std::optional<int> e4_kernel_match(const CurveE2& E, const GlobalClass& xi, const Place& v);

struct PlaceCheck {
  Place place = Place::real();
  bool in_kernel = false;
  std::optional<GlobalClass> matched;  // torsion image element with the same class pair
};

/// One assignment of Legendre symbols to the generators at primes outside S.
struct PatternCase {
  std::vector<int> signs;               // +1 square, -1 non-square; parallel to generators
  bool in_kernel = false;
  std::optional<GlobalClass> matched;
  std::string label;                    // "5 square", ..., "none square"
  std::optional<std::uint64_t> witness_prime;  // a prime outside S realizing the pattern
};

struct EverywhereReport {
  GlobalClass xi;
  std::vector<GlobalClass> torsion_image;
  std::vector<ExactInt> generators;     // -1 and the primes of the supports, ascending
  std::vector<PlaceCheck> bad_places;
  std::vector<PatternCase> patterns;
  bool verified = false;
  bool witness_search_exhausted = false;  // some pattern without witness prime
  std::optional<Place> failure;           // first place where xi is not in the kernel
  std::uint64_t witness_bound = 0;

  /// Distinct labels of the pattern cases, in order of first appearance.
  std::vector<std::string> case_labels() const;
};

/// Checks the places of S directly and every sign pattern of the generators at
/// the remaining primes; witness primes are searched up to witness_bound.
/// Throws InvalidArgument unless xi is supported on S.
EverywhereReport verify_everywhere(const CurveE2& E, const GlobalClass& xi, std::uint64_t witness_bound = 10000);

struct LiftVerdict {
  GlobalClass lift;
  bool verified = false;
  std::optional<Place> witness_place;
};

struct CosetClassification {
  ShaCoset coset;
  std::vector<LiftVerdict> lifts;  // the coset members in order
  bool has_everywhere_trivial_lift() const;
};

/// For each nontrivial coset of the point image in Sel_2, tests every lift.
std::vector<CosetClassification> classify_sha_lifts(const CurveE2& E, const Sha2Quotient& quotient,
                                                    std::uint64_t witness_bound = 10000);
std::vector<CosetClassification> classify_sha_lifts(const CurveE2& E);

WeierstrassModel weierstrass_model(const CurveE2& E);
LValueEstimate l_value_approx(const CurveE2& E, std::size_t terms,
                              const std::optional<ExactInt>& conductor = std::nullopt);

struct CertifyOptions {
  PointSearchOptions search;
  std::uint64_t witness_bound = 10000;
  std::size_t l_terms = 4000;
};

struct DivisibilityCertificate {
  SelmerGroup selmer;
  Sha2Quotient quotient;
  std::optional<EverywhereReport> witness;  // the first xi passing every check
  std::vector<GlobalClass> tried;           // candidates examined before the witness
  LValueEstimate l_value;
  bool rank_zero_evidence = false;          // |L(E,1)| well above the estimate's uncertainty
  bool verified = false;
  std::string failed_step;                  // empty when verified
};

/// Throws NoWitnessClass when no class outside the point image is everywhere
/// locally in the E[4] kernel.
DivisibilityCertificate certify_nondivisibility(const CurveE2& E, const CertifyOptions& opts = {});

/// Grid search over y^2 = x(x + a)(x + b).
struct SearchOptions {
  long amin = 1, amax = 300, bmax = 300;
  std::size_t threads = 0;      // 0: hardware concurrency
  std::size_t l_terms_min = 2000;
  double l_threshold = 1e-3;    // |L(E,1)| must exceed this and the uncertainty
};

struct SearchHit {
  long a = 0, b = 0;
  std::vector<GlobalClass> witnesses;  // sorted
  ExactInt conductor;
  double l_value = 0;
};

struct SearchSummary {
  std::size_t curves = 0;
  std::size_t locally_trivial_candidates = 0;  // curves with a class outside the torsion image
  std::size_t rank_positive_or_unknown = 0;    // candidates rejected by the analytic test
  std::vector<SearchHit> hits;                 // by (a, b)
};

SearchSummary search_4div(const SearchOptions& opts);

/// One grid cell: candidate when a locally trivial class exists, hit when the
/// L-value test then shows analytic rank 0.
struct SearchCell {
  bool candidate = false;
  bool hit = false;
  SearchHit data;
};

SearchCell evaluate_search_cell(long a, long b, const SearchOptions& opts);

/// The classes outside the 2-power torsion image that are everywhere locally in
/// the E[4] kernel, for y^2 = x(x + a)(x + b); used by search_4div.
std::vector<GlobalClass> locally_trivial_classes(const CurveE2& E);
/// Span of delta over the rational 2-power torsion (found by repeated halving).
std::vector<GlobalClass> torsion_delta_image(const CurveE2& E);

}  // namespace shadiv
