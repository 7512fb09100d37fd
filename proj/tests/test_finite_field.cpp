#include "doctest.h"

#include <set>

#include "shadiv/finite_field.hpp"

using namespace shadiv;

namespace {

ModPoly cyclotomic(std::uint64_t p) { return ModPoly(p, 1); }

ModPoly product_mod(const std::vector<ModPoly>& fs, std::uint64_t r) {
  ModPoly acc{1};
  for (const auto& f : fs) acc = modpoly::mul(acc, f, r);
  return acc;
}

// Every p-th power in the field, by exhausting all elements.
std::set<FiniteField::Elem> pth_powers(const FiniteField& F, std::uint64_t p) {
  std::set<FiniteField::Elem> out;
  const std::uint64_t n = to_u64(F.order());
  for (std::uint64_t k = 1; k < n; ++k) out.insert(F.pow(F.element_at(k), p));
  return out;
}

}  // namespace

TEST_CASE("residue degree is the order of r mod p") {
  CHECK(build_residue_field(3, 7).residue_degree() == 1);
  CHECK(build_residue_field(3, 5).residue_degree() == 2);
  CHECK(build_residue_field(5, 101).residue_degree() == 1);
  CHECK(build_residue_field(5, 2).residue_degree() == 4);
  CHECK(build_residue_field(7, 2).residue_degree() == 3);
  for (std::uint64_t p : {3, 5, 7, 11}) {
    for (std::uint64_t r : primes_up_to(60)) {
      if (r == p) continue;
      REQUIRE(build_residue_field(p, r).residue_degree() == multiplicative_order(r, p));
    }
  }
}

TEST_CASE("zeta is a primitive p-th root of unity") {
  for (std::uint64_t p : {3, 5, 7}) {
    for (std::uint64_t r : {2, 11, 13, 29, 31}) {
      if (r == p) continue;
      const ResidueField rf = build_residue_field(p, r);
      const FiniteField& F = rf.field;
      CHECK_FALSE(F.is_one(rf.zeta));
      CHECK(F.is_one(F.pow(rf.zeta, p)));
    }
  }
}

TEST_CASE("cyclotomic factors multiply back to Phi_p") {
  for (std::uint64_t p : {3, 5, 7, 11}) {
    for (std::uint64_t r : {2, 3, 13, 23, 43}) {
      if (r == p) continue;
      const auto fs = cyclotomic_factors_mod(p, r);
      CHECK(fs.size() == (p - 1) / multiplicative_order(r, p));
      CHECK(product_mod(fs, r) == cyclotomic(p));
      for (size_t i = 1; i < fs.size(); ++i) CHECK(modpoly::lex_less(fs[i - 1], fs[i]));
      for (const auto& f : fs) CHECK(modpoly::is_irreducible(f, r));
    }
  }
}

TEST_CASE("field construction validates its modulus") {
  CHECK_THROWS_AS(build_residue_field(3, 3), Error);
  CHECK_THROWS_AS(build_residue_field(4, 7), Error);
  CHECK_THROWS_AS(FiniteField(5, ModPoly{1, 0, 1}), Error);  // x^2 + 1 = (x - 2)(x + 2)
  CHECK_NOTHROW(FiniteField(7, ModPoly{1, 0, 1}));
}

TEST_CASE("p-th power test and roots agree with exhaustion") {
  struct Case {
    std::uint64_t r;
    ModPoly modulus;
    std::uint64_t p;
  };
  const std::vector<Case> cases{
      {7, {6, 1}, 3},       {19, {1, 1}, 3},        {5, {2, 0, 1}, 3},   {5, {2, 0, 1}, 2},
      {2, {1, 1, 0, 0, 1}, 5}, {2, {1, 1, 0, 1}, 7}, {11, {0, 1}, 5},   {31, {0, 1}, 5},
      {3, {2, 2, 1}, 2},    {13, {2, 0, 1}, 7}};
  for (const auto& c : cases) {
    const FiniteField F(c.r, c.modulus);
    const auto powers = pth_powers(F, c.p);
    const std::uint64_t n = to_u64(F.order());
    for (std::uint64_t k = 1; k < n; ++k) {
      const auto z = F.element_at(k);
      const bool expected = powers.count(z) > 0;
      REQUIRE(is_pth_power(F, z, c.p) == expected);
      const auto root = pth_root(F, z, c.p);
      REQUIRE(root.has_value() == expected);
      if (root) REQUIRE(F.pow(*root, c.p) == z);
    }
    CHECK_THROWS_AS(is_pth_power(F, F.zero(), c.p), Error);
  }
}

TEST_CASE("field arithmetic identities") {
  const FiniteField F(3, ModPoly{2, 2, 1});  // F_9
  for (std::uint64_t k = 1; k < 9; ++k) {
    const auto a = F.element_at(k);
    CHECK(F.is_one(F.mul(a, F.inv(a))));
    CHECK(F.is_one(F.pow(a, 8)));
    CHECK(F.pow(a, -1) == F.inv(a));
  }
}
