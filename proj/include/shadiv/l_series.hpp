#pragma once

// Reduction types by Tate's algorithm, Dirichlet coefficients a_n and a
// truncated series for L(E, 1) of an elliptic curve over Q.

#include <optional>
#include <string>
#include <vector>

#include "shadiv/arith.hpp"

namespace shadiv {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct WeierstrassModel {
  ExactInt a1, a2, a3, a4, a6;

  ExactInt b2() const { return a1 * a1 + 4 * a2; }
  ExactInt b4() const { return 2 * a4 + a1 * a3; }
  ExactInt b6() const { return a3 * a3 + 4 * a6; }
  ExactInt b8() const;
  ExactInt discriminant() const;
  /// x = x' + r, y = y' + s x' + t.
  WeierstrassModel change(const ExactInt& r, const ExactInt& s, const ExactInt& t) const;
  /// a_i / p^i; the caller guarantees divisibility.
  WeierstrassModel scale_down(const ExactInt& p) const;
  bool operator==(const WeierstrassModel&) const = default;
};

enum class ReductionKind { Good, Split, NonSplit, Additive };

struct LocalReduction {
  ExactInt p;
  unsigned disc_valuation = 0;     // of the local minimal model
  unsigned conductor_exponent = 0;
  std::string kodaira;             // "I0", "I3", "III*", ...
  ReductionKind kind = ReductionKind::Good;
  WeierstrassModel minimal;        // local minimal model at p
};

/// Tate's algorithm at p. Throws ZeroInput on a singular model.
LocalReduction tate_local(const WeierstrassModel& E, const ExactInt& p);

struct ReductionData {
  ExactInt conductor;
  std::vector<LocalReduction> bad;  // every prime dividing the model discriminant, ascending
};

ReductionData reduction_data(const WeierstrassModel& E);

/// a_1 .. a_n (index 0 unused). For primes of good reduction a_p = p + 1 - #E(F_p),
/// counted on a model that is minimal at p.
std::vector<long> dirichlet_coefficients(const WeierstrassModel& E, const ReductionData& red, std::size_t n);

/// a_p = p + 1 - #E(F_p) by direct enumeration of the model over F_p (any p).
long trace_by_counting(const WeierstrassModel& E, std::uint64_t p);

struct LValueEstimate {
  double value = 0;          // estimate of L(E, 1)
  double previous = 0;       // the same series truncated at terms / 2
  double change = 0;         // |value - previous|
  double tail_bound = 0;     // bound on the omitted terms
  int root_number = 1;
  std::size_t terms = 0;
  ExactInt conductor;
};

/// L(E, 1) ~ (1 + w) sum_{n <= terms} a_n / n exp(-2 pi n / sqrt(N)). The root
/// number w is read off from the functional equation at two test points.
/// When conductor is given it is used instead of Tate's algorithm.
LValueEstimate l_value_approx(const WeierstrassModel& E, std::size_t terms,
                              const std::optional<ExactInt>& conductor = std::nullopt);

}  // namespace shadiv
