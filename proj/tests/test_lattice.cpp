#include <gtest/gtest.h>

#include <random>

#include "cshape/lattice.hpp"

using namespace cshape;

namespace {

IMat random_nonsingular(std::mt19937& rng, int d, Int range) {
  std::uniform_int_distribution<Int> entry(-range, range);
  IMat m(d, d);
  do {
    for (Int& e : m.reshaped()) e = entry(rng);
  } while (det(m) == 0);
  return m;
}

// Laplace expansion along the first row.
Int det_oracle(const IMat& m) {
  const auto n = m.rows();
  if (n == 1) return m(0, 0);
  Int s = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    IMat minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, k = 0; c < n; ++c)
        if (c != j) minor(r - 1, k++) = m(r, c);
    s += (j % 2 ? -1 : 1) * m(0, j) * det_oracle(minor);
  }
  return s;
}

}  // namespace

TEST(Lattice, DeterminantMatchesCofactorExpansion) {
  std::mt19937 rng(7);
  for (int d = 1; d <= 4; ++d)
    for (int t = 0; t < 20; ++t) {
      const IMat m = random_nonsingular(rng, d, 5);
      EXPECT_EQ(det(m), det_oracle(m));
      EXPECT_EQ(m * adjugate(m), det(m) * IMat::Identity(d, d));
    }
}

TEST(Lattice, MatrixPower) {
  const IMat m = imat({{1, 1}, {1, 0}});
  EXPECT_EQ(matpow(m, 10), imat({{89, 55}, {55, 34}}));
  EXPECT_EQ(matpow(m, 0), IMat::Identity(2, 2));
}

TEST(Lattice, InverseIsExact) {
  const IMat m = imat({{2, 1}, {1, 3}});
  const QMat inv = inverse(m);
  EXPECT_EQ(inv(0, 0), Rational(3, 5));
  EXPECT_EQ(inv(0, 1), Rational(-1, 5));
  EXPECT_EQ(to_q(m) * inv, QMat::Identity(2, 2));
}

TEST(Lattice, ExpansionDecision) {
  EXPECT_TRUE(is_expansion(imat({{2, 0}, {0, 2}})));
  EXPECT_TRUE(is_expansion(imat({{1, -1}, {1, 1}})));
  EXPECT_TRUE(is_expansion(imat({{-2, 0}, {0, -2}})));
  EXPECT_FALSE(is_expansion(imat({{1, 1}, {0, 1}})));
  EXPECT_FALSE(is_expansion(imat({{2, 0}, {0, 1}})));
  EXPECT_FALSE(is_expansion(imat({{0, 1}, {1, 0}})));
  // Eigenvalues (3 ± sqrt 5)/2: one inside the unit disc.
  EXPECT_FALSE(is_expansion(imat({{2, 1}, {1, 1}})));
  EXPECT_TRUE(is_expansion(imat({{3}})));
  EXPECT_FALSE(is_expansion(imat({{-1}})));
}

TEST(Lattice, CharacteristicPolynomial) {
  const auto p = char_poly(imat({{1, 2}, {3, 4}}));
  ASSERT_EQ(p.size(), 3u);
  // x^2 - 5x - 2, ascending coefficients
  EXPECT_EQ(p[0], Rational(-2));
  EXPECT_EQ(p[1], Rational(-5));
  EXPECT_EQ(p[2], Rational(1));
}

TEST(Lattice, IndexEqualsDeterminant) {
  std::mt19937 rng(11);
  for (int t = 0; t < 40; ++t) {
    const IMat m = random_nonsingular(rng, 2 + t % 2, 6);
    const Lattice l = Lattice::from_generators(m);
    EXPECT_EQ(l.index(), std::abs(det(m)));
    EXPECT_EQ(static_cast<Int>(l.residues().size()), l.index());
    for (Eigen::Index c = 0; c < m.cols(); ++c) EXPECT_TRUE(l.contains(IVec(m.col(c))));
  }
}

TEST(Lattice, ReduceIsCanonical) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<Int> coord(-20, 20);
  const Lattice l = Lattice::from_generators(imat({{3, 1}, {0, 4}}));
  for (int t = 0; t < 200; ++t) {
    const IVec x = ivec({coord(rng), coord(rng)});
    const IVec y = ivec({coord(rng), coord(rng)});
    EXPECT_EQ(l.reduce(x) == l.reduce(y), l.contains(x - y));
    EXPECT_TRUE(l.contains(x - l.reduce(x)));
  }
}

TEST(Lattice, JoinAndIntersectIndexIdentity) {
  std::mt19937 rng(5);
  for (int t = 0; t < 40; ++t) {
    const Lattice a = Lattice::from_generators(random_nonsingular(rng, 2, 6));
    const Lattice b = Lattice::from_generators(random_nonsingular(rng, 2, 6));
    const Lattice j = join(a, b), m = intersect(a, b);
    EXPECT_TRUE(j.contains(a) && j.contains(b));
    EXPECT_TRUE(a.contains(m) && b.contains(m));
    EXPECT_EQ(j.index() * m.index(), a.index() * b.index());
  }
}

TEST(Lattice, TransformAndPreimage) {
  const IMat M = imat({{1, 2}, {0, 3}});
  const Lattice h = Lattice::scaled(2, 2);
  const Lattice t = transform(M, h);
  EXPECT_EQ(t, Lattice::from_generators(IMat(2 * M)));
  const Lattice p = preimage(M, h);
  for (const IVec& x : box(ivec({-4, -4}), ivec({4, 4}))) EXPECT_EQ(p.contains(x), h.contains(IVec(M * x)));
}

TEST(Lattice, DualPairing) {
  const Lattice h = Lattice::from_generators(imat({{2, 1}, {0, 3}}));
  const RationalLattice dl = dual(h);
  for (Int a = -12; a <= 12; ++a)
    for (Int b = -12; b <= 12; ++b) {
      const QVec x = qvec({Rational(a, 6), Rational(b, 6)});
      bool integral = true;
      for (Eigen::Index c = 0; c < 2; ++c) integral = integral && dot(x, to_q(IVec(h.basis().col(c)))).is_integer();
      EXPECT_EQ(dl.contains(x), integral);
    }
}

TEST(Lattice, CosetRepresentativesAndDigits) {
  std::mt19937 rng(17);
  for (int t = 0; t < 30; ++t) {
    const IMat L = random_nonsingular(rng, 2, 4);
    const auto reps = coset_representatives(L);
    ASSERT_EQ(static_cast<Int>(reps.size()), std::abs(det(L)));
    EXPECT_TRUE(is_fundamental_domain(reps, L));
    std::uniform_int_distribution<Int> coord(-30, 30);
    for (int k = 0; k < 30; ++k) {
      const IVec n = ivec({coord(rng), coord(rng)});
      const auto dd = decompose(n, L, reps);
      EXPECT_EQ(L * dd.quotient + reps[static_cast<std::size_t>(dd.digit)], n);
    }
  }
  EXPECT_FALSE(is_fundamental_domain({ivec({0, 0}), ivec({2, 0})}, imat({{2, 0}, {0, 1}})));
}

TEST(Lattice, IteratedSupportSize) {
  const IMat L = imat({{2, 0}, {0, 2}});
  const std::vector<IVec> F = {ivec({0, 0}), ivec({1, 0}), ivec({0, 1}), ivec({1, 1})};
  const auto F3 = iterated_support(L, F, 3);
  EXPECT_EQ(F3.size(), 64u);
  EXPECT_EQ(sorted_unique(F3), box(ivec({0, 0}), ivec({7, 7})));
}

TEST(Lattice, RationalLinearAlgebra) {
  QMat m(2, 3);
  m << Rational(1), Rational(2), Rational(3), Rational(2), Rational(4), Rational(6);
  EXPECT_EQ(rank(m), 1);
  const auto ker = kernel(m);
  EXPECT_EQ(ker.size(), 2u);
  for (const auto& v : ker) EXPECT_EQ(m * v, QVec::Constant(2, Rational(0)));
  QMat a(2, 2);
  a << Rational(2), Rational(1), Rational(1), Rational(3);
  const QVec x = solve(a, qvec({Rational(1), Rational(2)}));
  EXPECT_EQ(a * x, qvec({Rational(1), Rational(2)}));
}

TEST(Lattice, SolveIntegral) {
  IVec out;
  EXPECT_TRUE(solve_integral(imat({{2, 0}, {0, 3}}), ivec({4, 9}), out));
  EXPECT_EQ(out, ivec({2, 3}));
  EXPECT_FALSE(solve_integral(imat({{2, 0}, {0, 3}}), ivec({1, 0}), out));
}

TEST(Lattice, FromGeneratorsRejectsLowRank) {
  EXPECT_THROW(Lattice::from_generators(std::vector<IVec>{ivec({1, 1}), ivec({2, 2})}, 2), std::invalid_argument);
}

TEST(Lattice, SaturatedHeightIsInvariant) {
  const IMat L = imat({{3, 0}, {0, 4}});
  const Lattice h = saturate_height({ivec({2, 0}), ivec({0, 3})}, L);
  EXPECT_EQ(h, Lattice::from_generators(std::vector<IVec>{ivec({2, 0}), ivec({0, 3})}, 2));
  const Lattice h2 = saturate_height({ivec({4, 0}), ivec({0, 3})}, imat({{2, 0}, {0, 2}}));
  for (const IVec& x : box(ivec({-12, -12}), ivec({12, 12}))) {
    IVec y;
    if (h2.contains(x) && solve_integral(imat({{2, 0}, {0, 2}}), x, y)) EXPECT_TRUE(h2.contains(y));
  }
  EXPECT_TRUE(h2.contains(ivec({4, 0})) && h2.contains(ivec({0, 3})));
}
