#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "common.hpp"
#include "cshape/patterns.hpp"

using namespace cshape;
using cshape::test::example;

namespace {

Substitution tm1d() { return example("tm1d"); }

// Letter of ζⁿ(a) at p by peeling digits from the top level down.
std::optional<Letter> letter_oracle(const Substitution& z, Letter a, int n, const IVec& p) {
  std::vector<int> digits;
  IVec q = p;
  for (int k = 0; k < n; ++k) {
    const auto dd = decompose(q, z.L(), z.support());
    digits.push_back(dd.digit);
    q = dd.quotient;
  }
  if (!q.isZero()) return std::nullopt;
  Letter cur = a;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) cur = z.image(cur, static_cast<std::size_t>(*it));
  return cur;
}

}  // namespace

TEST(Substitution, RejectsMalformedInput) {
  const IMat L = imat({{2}});
  const std::vector<IVec> F = {ivec({0}), ivec({1})};
  EXPECT_THROW(Substitution({"a", "a"}, L, F, {U"\0\1", U"\1\0"}), std::invalid_argument);
  EXPECT_THROW(Substitution({"a", "b"}, L, F, {U"\0\1"}), std::invalid_argument);
  EXPECT_THROW(Substitution({"a", "b"}, L, F, {Word{0, 1, 1}, Word{1, 0}}), std::invalid_argument);
  EXPECT_THROW(Substitution({"a", "b"}, L, F, {Word{0, 2}, Word{1, 0}}), std::invalid_argument);
  EXPECT_THROW(Substitution({"a", "b"}, L, {ivec({0}), ivec({2})}, {Word{0, 1}, Word{1, 0}}), std::invalid_argument);
  EXPECT_THROW(Substitution({"a", "b"}, imat({{1}}), {ivec({0})}, {Word{0}, Word{1}}), std::invalid_argument);
}

TEST(Substitution, IterateSizes) {
  const auto z = example("tm2d");
  const auto w = iterate(z, 3);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].size(), 64u);
  EXPECT_THROW(iterate(z, 30, 1000), BudgetExceeded);
}

TEST(Substitution, LetterAtMatchesDigitOracle) {
  for (const auto& name : {"tm2d", "table", "twindragon", "minus2", "nonlinear"}) {
    const auto z = example(name);
    for (int n = 1; n <= 3; ++n)
      for (const IVec& p : box(ivec({-10, -10}), ivec({10, 10})))
        for (Letter a = 0; a < static_cast<Letter>(z.size()); ++a) EXPECT_EQ(letter_at(z, a, n, p), letter_oracle(z, a, n, p)) << name;
  }
}

TEST(Substitution, PowerComposes) {
  const auto z = example("table");
  const auto z2 = power(z, 2);
  EXPECT_EQ(z2.L(), matpow(z.L(), 2));
  EXPECT_EQ(z2.support().size(), 16u);
  for (const IVec& p : z2.support())
    for (Letter a = 0; a < 4; ++a) EXPECT_EQ(letter_at(z2, a, 1, p), letter_at(z, a, 2, p));
}

TEST(Substitution, ThueMorseWord) {
  const auto z = tm1d();
  const std::string expected = "0110100110010110";
  for (Int i = 0; i < 16; ++i) EXPECT_EQ(*letter_at(z, 0, 4, ivec({i})), static_cast<Letter>(expected[static_cast<std::size_t>(i)] - '0'));
}

TEST(Substitution, Primitivity) {
  const auto p = is_primitive(tm1d());
  EXPECT_TRUE(p.primitive);
  EXPECT_EQ(p.witness, 1);
  const Substitution frozen({"a", "b"}, imat({{2}}), {ivec({0}), ivec({1})}, {Word{0, 0}, Word{0, 1}});
  EXPECT_FALSE(is_primitive(frozen).primitive);
  for (const auto& name : cshape::test::example_names()) EXPECT_TRUE(is_primitive(example(name)).primitive) << name;
}

TEST(Substitution, Bijectivity) {
  EXPECT_TRUE(is_bijective(example("tm2d")));
  EXPECT_TRUE(is_bijective(example("table")));
  EXPECT_FALSE(is_bijective(example("tmxdoubling")));
}

TEST(Substitution, ReductionMergesIndistinguishableLetters) {
  const auto z = example("tmxdoubling");
  const auto r = is_reduced(z);
  EXPECT_FALSE(r.reduced);
  const auto red = reduce(z);
  EXPECT_EQ(red.reduced.size(), 2);
  // The quotient map intertwines the two substitutions.
  for (Letter a = 0; a < 4; ++a)
    for (std::size_t f = 0; f < z.support().size(); ++f)
      EXPECT_EQ(red.quotient[z.image(a, f)], red.reduced.image(red.quotient[a], f));
  EXPECT_TRUE(is_reduced(example("tm2d")).reduced);
  EXPECT_TRUE(is_reduced(red.reduced).reduced);
}

TEST(Substitution, KSetExamples) {
  EXPECT_EQ(k_set(tm1d()), (VecSet{ivec({-1}), ivec({0})}));
  const auto k = k_set(example("twindragon"));
  EXPECT_TRUE(k.count(ivec({0, 0})));
  // Every point of K is periodic for the digit map.
  for (const auto& name : cshape::test::example_names()) {
    const auto z = example(name);
    for (const IVec& x : k_set(z)) {
      IVec y = x;
      bool back = false;
      for (int i = 0; i < 64 && !back; ++i) {
        y = decompose(y, z.L(), z.support()).quotient;
        back = y == x;
      }
      EXPECT_TRUE(back) << name;
    }
  }
}

TEST(Substitution, Pc4Power) {
  const auto m = pc4_power(example("tm2d"));
  ASSERT_TRUE(m.has_value());
  EXPECT_GE(*m, 1);
}

TEST(Substitution, KBarContainsK) {
  const auto z = example("tm2d");
  const auto k = k_set(z);
  const auto kb = k_bar(z);
  for (const IVec& x : k) EXPECT_TRUE(kb.count(x));
}

TEST(Substitution, ProductOfOneDimensionalFactors) {
  const auto p = product_substitution({tm1d(), tm1d()});
  EXPECT_EQ(p.dim(), 2);
  EXPECT_EQ(p.size(), 4);
  EXPECT_EQ(p.L(), imat({{2, 0}, {0, 2}}));
  const auto t = tm1d();
  // Letter (a, b) is a * |A2| + b; the product acts coordinatewise.
  for (Letter a = 0; a < 2; ++a)
    for (Letter b = 0; b < 2; ++b)
      for (const IVec& q : p.support()) {
        const Letter got = *letter_at(p, a * 2 + b, 1, q);
        EXPECT_EQ(got, *letter_at(t, a, 1, ivec({q(0)})) * 2 + *letter_at(t, b, 1, ivec({q(1)})));
      }
  EXPECT_THROW(product_substitution({example("tm2d")}), std::invalid_argument);
}

TEST(Substitution, PeriodicPairsOfThueMorse) {
  const auto pp = periodic_pairs(tm1d());
  EXPECT_GE(pp.period, 1);
  EXPECT_FALSE(pp.pairs.empty());
  const auto dis = asymptotic_disjoint_pairs(tm1d());
  for (const auto& [a, b] : dis) EXPECT_NE(a, b);
}

TEST(Substitution, IndistinguishableClasses) {
  const auto z = example("tmxdoubling");
  const auto red = reduce(z);
  std::vector<int> tau;
  for (Letter a = 0; a < 4; ++a) tau.push_back(static_cast<int>(red.quotient[a]));
  const auto classes = indistinguishable(z, tau);
  EXPECT_EQ(classes.size(), 2u);
  const auto singletons = indistinguishable(z, {0, 1, 2, 3});
  EXPECT_EQ(singletons.size(), 4u);
}

TEST(Substitution, FixedPointsAreLegal) {
  EXPECT_TRUE(fixed_points(example("tm2d")).empty());
  const auto z = power(example("tm2d"), 2);
  const auto fps = fixed_points(z);
  // Oracle: legal K-words reproduced by ζ at the digits of K.
  const auto kv = k_set(z);
  const std::vector<IVec> K(kv.begin(), kv.end());
  std::size_t expected = 0;
  for (const auto& w : language(z, K).words) {
    bool fixed = true;
    for (std::size_t i = 0; i < K.size(); ++i) {
      const auto dd = decompose(K[i], z.L(), z.support());
      const auto src = std::find(K.begin(), K.end(), dd.quotient) - K.begin();
      fixed = fixed && z.image(w[static_cast<std::size_t>(src)], static_cast<std::size_t>(dd.digit)) == w[i];
    }
    if (fixed) ++expected;
  }
  EXPECT_EQ(fps.size(), expected);
  EXPECT_GT(expected, 0u);
  for (const auto& o : fps) {
    EXPECT_TRUE(o.shift.isZero());
    EXPECT_EQ(o.seed_support, K);
    EXPECT_TRUE(language(z, o.seed_support).contains(o.seed));
  }
}

TEST(Substitution, RecodingIsConjugate) {
  const auto z = example("tm2d");
  const auto rc = recode(z, 1.0);
  ASSERT_EQ(static_cast<std::size_t>(rc.recoded.size()), rc.patterns.size());
  const auto lang = language(z, rc.shape);
  for (const auto& w : rc.patterns) EXPECT_TRUE(lang.contains(w));
  for (Letter i = 0; i < static_cast<Letter>(rc.recoded.size()); ++i)
    for (std::size_t f = 0; f < z.support().size(); ++f)
      EXPECT_EQ(rc.to_letter[rc.recoded.image(i, f)], z.image(rc.to_letter[i], f));
}
