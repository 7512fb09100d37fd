#pragma once

// Univariate polynomials with integer coefficients.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shadiv/arith.hpp"

namespace shadiv {

class IntPoly {
 public:
  IntPoly() = default;
  /// Coefficients low degree first.
  explicit IntPoly(std::vector<ExactInt> coeffs);
  static IntPoly from_high(const std::vector<ExactInt>& high_first);
  static IntPoly monomial(const ExactInt& c, unsigned degree);

  /// "[a4,a3,a2,a1,a0]" or a product of parenthesised factors "(11x^2-67x+31)*(-x^2-3x-1)".
  static IntPoly parse(std::string_view text);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<ExactInt>& coeffs() const { return coeffs_; }
  ExactInt coeff(unsigned i) const { return i < coeffs_.size() ? coeffs_[i] : ExactInt(0); }
  const ExactInt& leading() const;

  ExactInt operator()(const ExactInt& x) const;
  ExactRat operator()(const ExactRat& x) const;

  IntPoly derivative() const;
  /// Coefficients of f(a + x).
  IntPoly taylor_shift(const ExactInt& a) const;
  /// x^n f(1/x) for n = max(degree, min_degree).
  IntPoly reversed(unsigned min_degree = 0) const;

  IntPoly operator+(const IntPoly& o) const;
  IntPoly operator-(const IntPoly& o) const;
  IntPoly operator*(const IntPoly& o) const;
  bool operator==(const IntPoly& o) const = default;

  /// Coefficient list high degree first, as "[a_n,...,a_0]".
  std::string to_string() const;
  std::vector<std::string> coefficient_strings() const;

 private:
  void trim();
  std::vector<ExactInt> coeffs_;
};

ExactInt resultant(const IntPoly& f, const IntPoly& g);
ExactInt discriminant(const IntPoly& f);

/// Closed rational interval [lo, hi] containing exactly one real root of a squarefree polynomial.
struct RootInterval {
  ExactRat lo;
  ExactRat hi;
  bool exact = false;  // lo == hi is a root
};

/// Number of distinct real roots in (a, b] (Sturm).
int count_real_roots(const IntPoly& f, const ExactRat& a, const ExactRat& b);
int count_real_roots(const IntPoly& f);

/// Isolating intervals for all real roots of a squarefree polynomial, refined to width <= width.
std::vector<RootInterval> isolate_real_roots(const IntPoly& f, const ExactRat& width);

}  // namespace shadiv
