#include "shadiv/poly.hpp"

#include <algorithm>
#include <cctype>

namespace shadiv {

IntPoly::IntPoly(std::vector<ExactInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::from_high(const std::vector<ExactInt>& high_first) {
  return IntPoly(std::vector<ExactInt>(high_first.rbegin(), high_first.rend()));
}

IntPoly IntPoly::monomial(const ExactInt& c, unsigned degree) {
  std::vector<ExactInt> v(degree + 1, 0);
  v[degree] = c;
  return IntPoly(std::move(v));
}

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const ExactInt& IntPoly::leading() const {
  if (coeffs_.empty()) throw Error(ErrorCode::ZeroInput, "leading coefficient of zero polynomial");
  return coeffs_.back();
}

ExactInt IntPoly::operator()(const ExactInt& x) const {
  ExactInt acc = 0;
  for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

ExactRat IntPoly::operator()(const ExactRat& x) const {
  ExactRat acc = 0;
  for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + ExactRat(coeffs_[i]);
  acc.canonicalize();
  return acc;
}

IntPoly IntPoly::derivative() const {
  if (coeffs_.size() <= 1) return IntPoly();
  std::vector<ExactInt> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(d));
}

IntPoly IntPoly::taylor_shift(const ExactInt& a) const {
  std::vector<ExactInt> c = coeffs_;
  const size_t n = c.size();
  // Horner-style synthetic division, repeated.
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = n - 1; j > i; --j) c[j - 1] += a * c[j];
  }
  return IntPoly(std::move(c));
}

IntPoly IntPoly::reversed(unsigned min_degree) const {
  const unsigned n = std::max<unsigned>(min_degree, static_cast<unsigned>(std::max(degree(), 0)));
  std::vector<ExactInt> r(n + 1, 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) r[n - i] = coeffs_[i];
  return IntPoly(std::move(r));
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
  std::vector<ExactInt> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
  return IntPoly(std::move(c));
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
  std::vector<ExactInt> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) c[i] -= o.coeffs_[i];
  return IntPoly(std::move(c));
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
  if (is_zero() || o.is_zero()) return IntPoly();
  std::vector<ExactInt> c(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
  return IntPoly(std::move(c));
}

std::vector<std::string> IntPoly::coefficient_strings() const {
  std::vector<std::string> out;
  for (size_t i = coeffs_.size(); i-- > 0;) out.push_back(shadiv::to_string(coeffs_[i]));
  if (out.empty()) out.push_back("0");
  return out;
}

std::string IntPoly::to_string() const {
  std::string s = "[";
  const auto parts = coefficient_strings();
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += parts[i];
  }
  return s + "]";
}

namespace {

// One factor such as "11x^2-67x+31" or "-x^2 - 3x - 1".
IntPoly parse_factor(std::string_view text) {
  std::string s;
  for (const char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty polynomial factor");
  std::vector<ExactInt> coeffs;
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    ExactInt c = start == i ? ExactInt(1) : parse_int(s.substr(start, i - start));
    unsigned power = 0;
    if (i < s.size() && s[i] == '*') ++i;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) throw Error(ErrorCode::ParseError, "missing exponent in '" + s + "'");
        power = static_cast<unsigned>(std::stoul(s.substr(start, i - start)));
      }
    } else if (start == i) {
      throw Error(ErrorCode::ParseError, "unexpected character in '" + s + "'");
    }
    if (coeffs.size() <= power) coeffs.resize(power + 1, 0);
    coeffs[power] += sign * c;
    if (i < s.size() && s[i] != '+' && s[i] != '-') throw Error(ErrorCode::ParseError, "bad term in '" + s + "'");
  }
  return IntPoly(std::move(coeffs));
}

}  // namespace

IntPoly IntPoly::parse(std::string_view text) {
  std::string s;
  for (const char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty polynomial");
  if (s.front() == '[') {
    if (s.back() != ']') throw Error(ErrorCode::ParseError, "unterminated coefficient list");
    std::vector<ExactInt> high;
    size_t start = 1;
    for (size_t i = 1; i < s.size(); ++i) {
      if (s[i] == ',' || s[i] == ']') {
        high.push_back(parse_int(s.substr(start, i - start)));
        start = i + 1;
      }
    }
    return from_high(high);
  }
  IntPoly product(std::vector<ExactInt>{1});
  size_t i = 0;
  bool any = false;
  while (i < s.size()) {
    if (s[i] == '*') {
      ++i;
      continue;
    }
    if (s[i] != '(') {
      if (any) throw Error(ErrorCode::ParseError, "expected '(' in '" + s + "'");
      return parse_factor(s);
    }
    const size_t close = s.find(')', i);
    if (close == std::string::npos) throw Error(ErrorCode::ParseError, "unbalanced parentheses");
    product = product * parse_factor(std::string_view(s).substr(i + 1, close - i - 1));
    any = true;
    i = close + 1;
  }
  return product;
}

ExactInt resultant(const IntPoly& f, const IntPoly& g) {
  const int m = f.degree(), n = g.degree();
  if (m < 0 || n < 0) return 0;
  if (m == 0 && n == 0) return 1;
  const int size = m + n;
  if (size == 0) return 1;
  std::vector<std::vector<ExactInt>> a(size, std::vector<ExactInt>(size, 0));
  for (int row = 0; row < n; ++row)
    for (int j = 0; j <= m; ++j) a[row][row + j] = f.coeff(static_cast<unsigned>(m - j));
  for (int row = 0; row < m; ++row)
    for (int j = 0; j <= n; ++j) a[n + row][row + j] = g.coeff(static_cast<unsigned>(n - j));

  // Bareiss fraction-free elimination.
  int sign = 1;
  ExactInt prev = 1;
  for (int k = 0; k < size - 1; ++k) {
    if (a[k][k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < size; ++r)
        if (a[r][k] != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[size - 1][size - 1];
}

ExactInt discriminant(const IntPoly& f) {
  const int n = f.degree();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "discriminant of a constant");
  ExactInt r = resultant(f, f.derivative());
  mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), f.leading().get_mpz_t());
  if ((n * (n - 1) / 2) % 2 == 1) r = -r;
  return r;
}

namespace {

using RatPoly = std::vector<ExactRat>;

void trim_rat(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly to_rat(const IntPoly& f) {
  RatPoly p;
  for (const auto& c : f.coeffs()) p.emplace_back(c);
  return p;
}

RatPoly rat_rem(RatPoly a, const RatPoly& b) {
  trim_rat(a);
  while (a.size() >= b.size() && !a.empty()) {
    const ExactRat c = a.back() / b.back();
    const size_t shift = a.size() - b.size();
    for (size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    a.pop_back();
    trim_rat(a);
  }
  return a;
}

int sign_at(const RatPoly& p, const ExactRat& x) {
  ExactRat acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return sgn(acc);
}

std::vector<RatPoly> sturm_chain(const IntPoly& f) {
  std::vector<RatPoly> chain;
  chain.push_back(to_rat(f));
  chain.push_back(to_rat(f.derivative()));
  trim_rat(chain.back());
  while (!chain.back().empty()) {
    RatPoly r = rat_rem(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  return chain;
}

int variations(const std::vector<RatPoly>& chain, const ExactRat& x) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    if (p.empty()) continue;
    const int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int variations_at_infinity(const std::vector<RatPoly>& chain, bool positive) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    if (p.empty()) continue;
    int s = sgn(p.back());
    if (!positive && (p.size() - 1) % 2 == 1) s = -s;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

ExactRat cauchy_bound(const IntPoly& f) {
  ExactRat m = 0;
  const ExactRat lead = abs(ExactRat(f.leading()));
  for (int i = 0; i < f.degree(); ++i) {
    ExactRat q = abs(ExactRat(f.coeff(static_cast<unsigned>(i)))) / lead;
    if (q > m) m = q;
  }
  return m + 1;
}

}  // namespace

int count_real_roots(const IntPoly& f, const ExactRat& a, const ExactRat& b) {
  const auto chain = sturm_chain(f);
  return variations(chain, a) - variations(chain, b);
}

int count_real_roots(const IntPoly& f) {
  if (f.degree() < 1) return 0;
  const auto chain = sturm_chain(f);
  return variations_at_infinity(chain, false) - variations_at_infinity(chain, true);
}

std::vector<RootInterval> isolate_real_roots(const IntPoly& f, const ExactRat& width) {
  std::vector<RootInterval> out;
  if (f.degree() < 1) return out;
  const auto chain = sturm_chain(f);
  const ExactRat bound = cauchy_bound(f);
  auto count = [&](const ExactRat& a, const ExactRat& b) { return variations(chain, a) - variations(chain, b); };

  std::vector<std::pair<ExactRat, ExactRat>> stack{{-bound, bound}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    const int n = count(lo, hi);
    if (n == 0) continue;
    if (n > 1) {
      ExactRat mid = (lo + hi) / 2;
      stack.emplace_back(lo, mid);
      stack.emplace_back(mid, hi);
      continue;
    }
    // Exactly one root in (lo, hi]; refine.
    RootInterval ri{lo, hi, false};
    for (;;) {
      if (f(ri.hi) == 0) {
        ri.lo = ri.hi;
        ri.exact = true;
        break;
      }
      if (ri.hi - ri.lo <= width) break;
      ExactRat mid = (ri.lo + ri.hi) / 2;
      if (count(ri.lo, mid) == 1) {
        ri.hi = mid;
      } else {
        ri.lo = mid;
      }
    }
    out.push_back(ri);
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
  return out;
}

}  // namespace shadiv
