#pragma once

// Brute-force reference computations shared by the unit and acceptance tests.
// Nothing here calls into the search engines under test.

#include <optional>
#include <set>
#include <vector>

#include "shadiv/arith.hpp"
#include "shadiv/poly.hpp"

namespace oracle {

using shadiv::ExactInt;
using shadiv::ExactRat;
using shadiv::IntPoly;

inline std::uint64_t ipow(std::uint64_t p, unsigned n) {
  std::uint64_t r = 1;
  while (n--) r *= p;
  return r;
}

inline std::set<std::uint64_t> squares_mod(std::uint64_t m) {
  std::set<std::uint64_t> s;
  for (std::uint64_t y = 0; y < m; ++y) s.insert(y * y % m);
  return s;
}

inline std::uint64_t reduce(const ExactInt& a, std::uint64_t m) {
  ExactInt r = a % ExactInt(static_cast<unsigned long>(m));
  if (r < 0) r += static_cast<unsigned long>(m);
  return r.get_ui();
}

/// Is the nonzero rational x a square in Q_p? Decided by a brute-force
/// square test of the unit part modulo p (odd p) or 8 (p = 2).
inline bool is_local_square(const ExactRat& x, std::uint64_t p) {
  ExactInt num = x.get_num(), den = x.get_den();
  int v = 0;
  const ExactInt pp = static_cast<unsigned long>(p);
  while (num % pp == 0) num /= pp, ++v;
  while (den % pp == 0) den /= pp, --v;
  if (v % 2 != 0) return false;
  const std::uint64_t m = p == 2 ? 8 : p;
  const std::uint64_t u = reduce(num * den, m);
  for (std::uint64_t y = 0; y < m; ++y)
    if (y * y % m == u) return true;
  return false;
}

/// Same square class in Q_p.
inline bool same_local_class(const ExactRat& a, const ExactRat& b, std::uint64_t p) {
  return is_local_square(a * b, p);
}

/// Decides whether y^2 = g(x) has a Q_p point by looking at the two charts
/// x in Z_p and x = 1/t, t in pZ_p, modulo p^N. Returns nullopt when the
/// precision is too low to decide either way.
inline std::optional<bool> quartic_solvable_mod(const IntPoly& g, std::uint64_t p, unsigned N) {
  const std::uint64_t m = ipow(p, N);
  const auto sq = squares_mod(m);
  const unsigned kappa = p == 2 ? 3 : 1;
  const IntPoly G = g.reversed(4);
  bool any_square = false;
  for (int chart = 0; chart < 2; ++chart) {
    const IntPoly& f = chart == 0 ? g : G;
    for (std::uint64_t x = 0; x < m; ++x) {
      if (chart == 1 && x % p != 0) continue;
      const ExactInt value = f(ExactInt(static_cast<unsigned long>(x)));
      const std::uint64_t r = reduce(value, m);
      if (sq.count(r) == 0) continue;
      any_square = true;
      if (value == 0) return true;
      unsigned v = 0;
      ExactInt u = value;
      while (u % ExactInt(static_cast<unsigned long>(p)) == 0) u /= static_cast<unsigned long>(p), ++v;
      if (v % 2 == 0 && v + kappa <= N && is_local_square(ExactRat(value), p)) return true;
    }
  }
  if (!any_square) return false;
  return std::nullopt;
}

}  // namespace oracle
