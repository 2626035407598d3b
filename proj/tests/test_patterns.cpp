#include <gtest/gtest.h>

#include <set>

#include "common.hpp"
#include "cshape/patterns.hpp"

using namespace cshape;
using cshape::test::example;

namespace {

// Brute-force language: every window of the given shape inside ζⁿ(a), for all letters a.
std::set<Word> windows_oracle(const Substitution& z, const std::vector<IVec>& shape, int n) {
  std::set<Word> out;
  const auto Fn = iterated_support(z.L(), z.support(), n);
  for (Letter a = 0; a < static_cast<Letter>(z.size()); ++a)
    for (const IVec& t : Fn) {
      Word w;
      for (const IVec& s : shape) {
        const auto l = letter_at(z, a, n, IVec(t + s));
        if (!l) break;
        w.push_back(*l);
      }
      if (w.size() == shape.size()) out.insert(w);
    }
  return out;
}

}  // namespace

TEST(Patterns, MakePatternSortsSupport) {
  const Pattern p = make_pattern({ivec({1, 0}), ivec({0, 0})}, Word{7, 3});
  EXPECT_EQ(p.support.front(), ivec({0, 0}));
  EXPECT_EQ(*p.at(ivec({0, 0})), 3u);
  EXPECT_EQ(*p.at(ivec({1, 0})), 7u);
  EXPECT_FALSE(p.at(ivec({2, 0})).has_value());
}

TEST(Patterns, SubstituteMatchesLetterAt) {
  const auto z = example("table");
  const Pattern seed = make_pattern({ivec({0, 0}), ivec({1, 0})}, Word{0, 2});
  const Pattern img = substitute(z, seed, 2);
  EXPECT_EQ(img.support.size(), 2u * 16u);
  for (const IVec& f : iterated_support(z.L(), z.support(), 2)) {
    EXPECT_EQ(img.at(f), letter_at(z, 0, 2, f));
    EXPECT_EQ(img.at(IVec(matpow(z.L(), 2) * ivec({1, 0}) + f)), letter_at(z, 2, 2, f));
  }
}

TEST(Patterns, OccurrencesBruteForce) {
  const auto z = example("tm1d");
  const Pattern host = substitute(z, make_pattern({ivec({0})}, Word{0}), 5);
  const Pattern w = make_pattern({ivec({0}), ivec({1})}, Word{1, 1});
  const auto occ = occurrences(host, w);
  std::vector<IVec> expect;
  for (Int i = 0; i + 1 < 32; ++i)
    if (*host.at(ivec({i})) == 1 && *host.at(ivec({i + 1})) == 1) expect.push_back(ivec({i}));
  EXPECT_EQ(occ, expect);
}

TEST(Patterns, LanguageContainsWindowsOfIterates) {
  for (const auto& name : {"tm2d", "table", "minus2", "rocket"}) {
    const auto z = example(name);
    const auto shape = box(ivec({-1, -1}), ivec({1, 1}));
    const auto lang = language(z, shape);
    const auto seen = windows_oracle(z, shape, 4);
    for (const auto& w : seen) EXPECT_TRUE(lang.contains(w)) << name;
    // Windows at level 5 do not add new words for these examples.
    EXPECT_EQ(lang.words.size(), windows_oracle(z, shape, 5).size()) << name;
  }
}

TEST(Patterns, LanguageRestriction) {
  const auto z = example("tm2d");
  const auto big = language(z, box(ivec({-1, -1}), ivec({1, 1})));
  const auto small = big.restrict(box(ivec({-1, -1}), ivec({0, 0})));
  EXPECT_EQ(small.words, language(z, box(ivec({-1, -1}), ivec({0, 0}))).words);
}

TEST(Patterns, ThueMorseLanguageCounts) {
  const auto z = example("tm1d");
  // Factor complexity of Thue-Morse: 2, 4, 6, 10, 12, 16.
  const std::vector<std::size_t> counts = {2, 4, 6, 10, 12, 16};
  for (Int n = 1; n <= 6; ++n) EXPECT_EQ(language(z, box(ivec({0}), ivec({n - 1}))).size(), counts[static_cast<std::size_t>(n - 1)]);
}

TEST(Patterns, GeneratorPatchIsLegal) {
  const auto z = example("table");
  LanguageGenerator gen(z);
  const Patch p = gen.patch(6);
  const auto shape = box(ivec({-1, -1}), ivec({1, 1}));
  const auto lang = gen.language(shape);
  for (const IVec& c : box(ivec({-5, -5}), ivec({5, 5}))) {
    Word w;
    for (const IVec& s : shape) w.push_back(*p.at(IVec(c + s)));
    EXPECT_TRUE(lang.contains(w));
  }
}

TEST(Patterns, DifferenceSetsAreDisagreements) {
  const auto z = example("tm2d");
  const auto lk = language(z, box(ivec({-1, -1}), ivec({0, 0})));
  const auto ds = difference_sets(lk);
  std::set<std::vector<std::size_t>> oracle;
  for (const auto& a : lk.words)
    for (const auto& b : lk.words) {
      std::vector<std::size_t> diff;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) diff.push_back(i);
      if (!diff.empty()) oracle.insert(diff);
    }
  EXPECT_EQ(ds.size(), oracle.size());
  for (const auto& d : ds) {
    EXPECT_TRUE(lk.contains(d.first) && lk.contains(d.second));
    std::vector<IVec> w;
    for (std::size_t i = 0; i < d.first.size(); ++i)
      if (d.first[i] != d.second[i]) w.push_back(lk.shape[i]);
    EXPECT_EQ(w, d.W);
  }
}

TEST(Patterns, RecognizabilityRadius) {
  const auto r = recognizability_radius(example("tm1d"), 6);
  ASSERT_TRUE(r.has_value());
  EXPECT_GE(*r, 1);
}

TEST(Patterns, PeriodSearch) {
  EXPECT_TRUE(period_search(example("tm2d"), 3).periods.empty());
  const Substitution cols({"a", "b"}, imat({{2, 0}, {0, 2}}), box(ivec({0, 0}), ivec({1, 1})), {Word{0, 0, 1, 1}, Word{1, 1, 0, 0}});
  const auto ps = period_search(cols, 2);
  ASSERT_FALSE(ps.periods.empty());
  EXPECT_EQ(ps.periods.front(), ivec({0, 1}));
}

TEST(Patterns, OccurrenceFreeBall) {
  const Pattern host = make_pattern(box(ivec({0, 0}), ivec({9, 9})), Word(100, 0));
  const Pattern w = make_pattern({ivec({0, 0})}, Word{1});
  EXPECT_TRUE(occurrence_free_ball(host, w, Rational(3)).has_value());
  EXPECT_FALSE(occurrence_free_ball(host, make_pattern({ivec({0, 0})}, Word{0}), Rational(1)).has_value());
  EXPECT_FALSE(occurrence_free_ball(host, w, Rational(6)).has_value());
}

TEST(Patterns, RepetitivityIsLinearForThueMorse) {
  const auto r = repetitivity(example("tm2d"), {1, 2, 4});
  ASSERT_EQ(r.values.size(), 3u);
  EXPECT_LT(r.exponent, 1.5);
}
