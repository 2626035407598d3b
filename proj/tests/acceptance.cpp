#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cshape/directions.hpp"
#include "cshape/morphisms.hpp"
#include "cshape/spec_file.hpp"

using namespace cshape;

namespace {

const std::string examples = CSHAPE_EXAMPLES_DIR;

Substitution load(const std::string& name) { return load_spec(examples + "/" + name + ".sub"); }

struct Check {
  std::ostringstream notes;
  bool ok = true;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [failed: " << what << "]";
    }
  }
};

std::vector<IVec> as_vector(const VecSet& s) { return {s.begin(), s.end()}; }

std::vector<IVec> square(Int lo, Int hi) { return box(ivec({lo, lo}), ivec({hi, hi})); }

// Picture with the top row at y = 0 and the bottom row at y = -1, read on sorted K = [-1,0]^2.
Word k_word(int top_left, int top_right, int bottom_left, int bottom_right) {
  // sorted K: (-1,-1) (-1,0) (0,-1) (0,0)
  return Word{static_cast<Letter>(bottom_left), static_cast<Letter>(top_left), static_cast<Letter>(bottom_right),
              static_cast<Letter>(top_right)};
}

std::set<std::vector<IVec>, std::function<bool(const std::vector<IVec>&, const std::vector<IVec>&)>> set_family() {
  return std::set<std::vector<IVec>, std::function<bool(const std::vector<IVec>&, const std::vector<IVec>&)>>(
      [](const std::vector<IVec>& a, const std::vector<IVec>& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), LexLess{});
      });
}

void criterion1(Check& c) {
  c.expect(as_vector(k_set(load("tm1d"))) == std::vector<IVec>{ivec({-1}), ivec({0})}, "1-D K");
  c.expect(as_vector(k_set(load("tm2d"))) == square(-1, 0), "2-D K");
}

void criterion2(Check& c) {
  const auto z = load("tm2d");
  const Language lk = language(z, square(-1, 0));
  std::vector<Word> expected = {k_word(0, 1, 1, 0), k_word(1, 0, 0, 1), k_word(1, 0, 1, 0), k_word(0, 1, 0, 1),
                                k_word(0, 0, 1, 1), k_word(1, 1, 0, 0), k_word(0, 0, 0, 0), k_word(1, 1, 1, 1)};
  std::sort(expected.begin(), expected.end());
  c.expect(lk.words == expected, "L_K equals the eight listed patterns");
}

void criterion3(Check& c) {
  const auto K = square(-1, 0);
  {
    const auto ds = difference_sets(load("tm2d"));
    auto got = set_family();
    for (const auto& d : ds) got.insert(d.W);
    auto want = set_family();
    for (const auto& w : std::vector<std::vector<IVec>>{{ivec({0, -1}), ivec({0, 0})},
                                                        {ivec({-1, 0}), ivec({0, 0})},
                                                        {ivec({-1, 0}), ivec({0, -1})},
                                                        {ivec({-1, -1}), ivec({0, 0})},
                                                        {ivec({-1, -1}), ivec({-1, 0})}})
      want.insert(sorted_unique(w));
    c.notes << " TM sets=" << got.size();
    c.expect(got == want, "TM difference sets equal the five listed sets");
  }
  {
    const auto ds = difference_sets(load("table"));
    auto got = set_family();
    for (const auto& d : ds) got.insert(d.W);
    auto want = set_family();
    for (int mask = 1; mask < 15; ++mask) {
      std::vector<IVec> w;
      for (int i = 0; i < 4; ++i)
        if (mask >> i & 1) w.push_back(K[static_cast<std::size_t>(i)]);
      want.insert(w);
    }
    want.erase(sorted_unique({ivec({-1, -1}), ivec({0, 0})}));
    want.erase(sorted_unique({ivec({0, -1}), ivec({-1, 0})}));
    c.notes << " table sets=" << got.size();
    c.expect(got == want, "table difference sets equal P(K) minus the four listed sets");
  }
}

void criterion4(Check& c) {
  {
    const auto rep = direction_report(load("tm2d"), 5, 6);
    std::size_t nd_rays = 0, det_quadrants = 0, unknown_quadrants = 0;
    for (const auto& cr : rep.cones) {
      if (cr.cone.dim == 1 && cr.status == ConeStatus::nondeterministic && cr.certificate) {
        const IVec g = cr.cone.generators[0];
        if ((g.array() == 0).count() == 1) ++nd_rays;
      }
      if (cr.cone.dim == 2 && cr.status == ConeStatus::deterministic) ++det_quadrants;
      if (cr.cone.dim == 2 && cr.status == ConeStatus::unknown) ++unknown_quadrants;
    }
    c.notes << " TM nd=" << nd_rays << " det=" << det_quadrants << " unknown=" << unknown_quadrants;
    c.expect(rep.cones.size() == 8, "TM fan has 8 cones");
    c.expect(nd_rays == 4, "4 nondeterministic axis rays");
    c.expect(det_quadrants + unknown_quadrants == 4, "quadrants never nondeterministic");
  }
  {
    const auto rep = direction_report(load("table"), 5, 6);
    c.notes << " table nd=" << rep.count(ConeStatus::nondeterministic);
    c.expect(rep.cones.size() == 8 && rep.count(ConeStatus::nondeterministic) == 8, "table: all 8 cones nondeterministic");
  }
}

void criterion5(Check& c) {
  const auto np = load("nonpolytope");
  const auto t = polytope_test(np.L(), np.support(), 6);
  c.expect(t.status == PolytopeTest::Status::unknown, "nonpolytope status unknown");
  for (int n = 1; n <= 6; ++n) {
    const auto ext = iterated_extreme_points(np.L(), np.support(), n);
    c.expect(ext.size() == static_cast<std::size_t>(n + 3), "|Ext conv F_" + std::to_string(n) + "| = n+3");
    if (static_cast<std::size_t>(n) <= t.counts.size())
      c.expect(t.counts[static_cast<std::size_t>(n - 1)] == static_cast<std::size_t>(n + 3), "polytope_test count");
  }
  const auto ns = load("nonselfsimilar");
  const auto t2 = polytope_test(ns.L(), ns.support(), 6);
  c.expect(t2.status == PolytopeTest::Status::yes, "non-self-similar stabilizes");
  if (t2.status == PolytopeTest::Status::yes) {
    auto v = digit_tile_hull(ns.L(), ns.support(), t2.level).vertices;
    std::vector<QVec> want = {qvec({1, Rational(1, 2)}), qvec({1, Rational(3, 2)}), qvec({-2, Rational(-3, 2)}),
                              qvec({-2, Rational(-5, 2)})};
    std::sort(v.begin(), v.end(), LexLess{});
    std::sort(want.begin(), want.end(), LexLess{});
    c.expect(v == want, "digit tile hull vertices");
  }
}

void criterion6(Check& c) {
  const auto h = height_lattice(load("height"));
  c.expect(!h.partial && h.H == Lattice::from_generators(std::vector<IVec>{ivec({2, 0}), ivec({0, 3})}, 2),
           "height lattice 2Z x 3Z");
  const auto tm = load("tm2d");
  c.expect(eigenvalue_check(qvec({Rational(1, 2), 0}), tm), "(1/2, 0) eigenvalue");
  c.expect(!eigenvalue_check(qvec({Rational(1, 3), 0}), tm), "(1/3, 0) not an eigenvalue");
}

void criterion7(Check& c) {
  const auto z = load("tmxdoubling");
  const auto red = reduce(z);
  const auto& r = red.reduced;
  c.expect(r.size() == 2, "two letters after reduction");
  if (r.size() == 2) {
    // support order (0,0) (0,1) (1,0) (1,1): a column of a's, then a column of b's.
    const Word A{0, 0, 1, 1}, B{1, 1, 0, 0};
    const bool same = r.rule(0) == A && r.rule(1) == B;
    const Word A2{1, 1, 0, 0}, B2{0, 0, 1, 1};
    const bool renamed = r.rule(0) == B2 && r.rule(1) == A2;
    c.expect(r.support() == z.support() && (same || renamed), "reduced rules match up to renaming");
  }
  const auto ps = period_search(r, 2);
  c.expect(!ps.periods.empty() && ps.periods[0] == ivec({0, 1}), "period (0,1) found");
  for (const auto& p : ps.periods) c.expect(p(0) == 0, "periods are vertical");
}

void criterion8(Check& c) {
  const auto z = load("tm2d");
  const auto g = automorphisms(z, AutomorphismMode::bijective);
  // Centralizer oracle: every letter permutation tested against every column map.
  std::set<std::vector<Letter>> central;
  std::vector<Letter> p{0, 1};
  do {
    bool commutes = true;
    for (std::size_t f = 0; f < z.support().size(); ++f)
      for (Letter a = 0; a < 2; ++a)
        if (p[z.image(a, f)] != z.image(p[a], f)) commutes = false;
    if (commutes) central.insert(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::set<std::vector<Letter>> got(g.letter_perms.begin(), g.letter_perms.end());
  c.expect(got == central && got.size() == 2, "Aut/<S> is C2");
  c.expect(g.closed, "closed under composition");
  const auto n = g.multiplication.size();
  int identity = -1;
  for (std::size_t i = 0; i < n; ++i)
    if (g.letter_perms[i] == std::vector<Letter>{0, 1}) identity = static_cast<int>(i);
  c.expect(identity >= 0, "identity present");
  for (std::size_t i = 0; i < n && identity >= 0; ++i) {
    bool inverse = false;
    for (std::size_t j = 0; j < n; ++j) inverse = inverse || g.multiplication[i][j] == identity;
    c.expect(inverse, "inverse present");
  }
}

void criterion9(Check& c) {
  const auto z = load("tm2d");
  const auto rep = direction_report(z, 5, 6);
  const auto s = symmetry_candidates(z, rep, height_lattice(z).H);
  std::set<std::vector<Int>> want;
  for (int perm = 0; perm < 2; ++perm)
    for (int sx : {-1, 1})
      for (int sy : {-1, 1}) {
        IMat m = IMat::Zero(2, 2);
        m(0, perm) = sx;
        m(1, 1 - perm) = sy;
        want.insert(std::vector<Int>(m.data(), m.data() + 4));
      }
  std::set<std::vector<Int>> got;
  for (const auto& cand : s.candidates) got.insert(std::vector<Int>(cand.M.data(), cand.M.data() + 4));
  c.expect(got == want && s.candidates.size() == 8, "exactly the 8 signed permutation matrices");
  c.expect(s.finite_orders, "finite orders");
  c.expect(s.distinct_mod3, "pairwise distinct mod 3");
}

void criterion10(Check& c) {
  for (const char* name : {"tm1d", "tm2d", "table", "nonlinear", "height", "tmxdoubling"}) {
    const auto rb = radius_bound(load(name));
    c.expect(rb.finite && rb.factor <= Rational(3), std::string(name) + ": factor radius ≤ 3‖F1‖");
  }
  const auto z = load("tm2d");
  Rational prev(-1);
  for (Int k = 1; k <= 4; ++k) {
    const auto hb = homomorphism_radius_bound(z, imat({{k, 0}, {0, 1}}));
    c.expect(hb.finite && hb.factor > prev, "homomorphism bound increases with ‖M‖");
    prev = hb.factor;
  }
}

void criterion11(Check& c) {
  const auto z = load("nonlinear");
  for (int p : {2, 3}) {
    const Int width = Int{1} << (p - 1);
    const auto top = substitute(z, make_pattern({ivec({0, 0})}, Word{0}), p);
    std::vector<IVec> supp;
    Word letters;
    for (Int x = 0; x <= width; ++x) {
      supp.push_back(ivec({x, 0}));
      letters.push_back(*top.at(ivec({x, 0})));
    }
    const Pattern w = make_pattern(supp, letters);
    const Pattern host = substitute(z, w, p);
    Int pow3 = 1;
    for (int i = 0; i < p; ++i) pow3 *= 3;
    const auto centre = occurrence_free_ball(host, w, Rational(pow3, 2));
    c.notes << " p=" << p << (centre ? " ball at " + to_string(*centre) : " no ball");
    c.expect(centre.has_value(), "occurrence-free ball for p=" + std::to_string(p));
  }
}

bool caratheodory_extreme(const std::vector<IVec>& pts, std::size_t i) {
  // p is not extreme iff it lies in a segment or triangle spanned by other points.
  const IVec& p = pts[i];
  auto cross = [](const IVec& o, const IVec& a, const IVec& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
  };
  const std::size_t n = pts.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (a == i || pts[a] == p) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (b == i || pts[b] == p) continue;
      if (cross(p, pts[a], pts[b]) == 0 && (pts[a] - p).dot(pts[b] - p) < 0) return false;
      for (std::size_t e = b + 1; e < n; ++e) {
        if (e == i || pts[e] == p) continue;
        const Int c1 = cross(pts[a], pts[b], p), c2 = cross(pts[b], pts[e], p), c3 = cross(pts[e], pts[a], p);
        if (cross(pts[a], pts[b], pts[e]) == 0) continue;
        if ((c1 >= 0 && c2 >= 0 && c3 >= 0) || (c1 <= 0 && c2 <= 0 && c3 <= 0)) return false;
      }
    }
  }
  return true;
}

void criterion12(Check& c) {
  for (const char* name : {"tm1d", "tm2d", "table", "twindragon", "gasket", "rocket", "shooter", "nonlinear",
                           "nonpolytope", "nonselfsimilar", "minus2"}) {
    const auto z = load(name);
    const int d = z.dim();
    VecSet oracle;
    for (int m = 1; m <= 4; ++m) {
      const IMat A = IMat::Identity(d, d) - matpow(z.L(), m);
      for (const auto& f : iterated_support(z.L(), z.support(), m)) {
        IVec x;
        if (solve_integral(A, f, x)) oracle.insert(x);
      }
    }
    c.expect(oracle == k_set(z), std::string(name) + ": K equals the periodic-point enumeration");
  }

  std::mt19937 rng(12345);
  std::uniform_int_distribution<Int> coord(-6, 6);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<IVec> pts;
    const int n = 5 + trial % 36;
    for (int i = 0; i < n; ++i) pts.push_back(ivec({coord(rng), coord(rng)}));
    pts = sorted_unique(pts);
    std::vector<IVec> oracle;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (caratheodory_extreme(pts, i)) oracle.push_back(pts[i]);
    c.expect(extreme_points(pts) == oracle, "extreme points match the triangle oracle");
  }

  std::uniform_int_distribution<Int> entry(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    IMat L(2, 2);
    do {
      for (Int& e : L.reshaped()) e = entry(rng);
    } while (det(L) == 0);
    const auto reps = coset_representatives(L);
    const Int D = std::abs(det(L));
    auto same_class = [&](const IVec& x, const IVec& y) {
      const IVec u = adjugate(L) * (x - y);
      return u(0) % D == 0 && u(1) % D == 0;
    };
    bool ok = static_cast<Int>(reps.size()) == D;
    for (std::size_t i = 0; i < reps.size() && ok; ++i)
      for (std::size_t j = i + 1; j < reps.size() && ok; ++j) ok = !same_class(reps[i], reps[j]);
    for (const auto& x : box(ivec({-6, -6}), ivec({6, 6})))
      ok = ok && std::any_of(reps.begin(), reps.end(), [&](const IVec& r) { return same_class(x, r); });
    c.expect(ok, "coset representatives match the box enumeration");
  }

  for (const char* name : {"tm2d", "table"}) {
    const auto z = load(name);
    const DirectionContext ctx(z);
    const auto rep = direction_report(z, 5, 6);
    int checked = 0;
    for (const auto& cr : rep.cones) {
      if (!cr.certificate) continue;
      const auto res = verify_certificate(ctx, *cr.certificate, cr.cone.interior_sample(), 64);
      c.expect(res.ok(), std::string(name) + ": certificate rebuilt on B(0,64)");
      ++checked;
    }
    c.notes << " " << name << " certificates=" << checked;
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_s;
    void (*run)(Check&);
  };
  const std::vector<Criterion> all = {
      {1, "filling set K", 1, criterion1},
      {2, "language on K (2D Thue-Morse)", 10, criterion2},
      {3, "difference sets", 30, criterion3},
      {4, "nondeterministic directions", 120, criterion4},
      {5, "polytope test", 30, criterion5},
      {6, "height lattice and eigenvalues", 10, criterion6},
      {7, "reduction and period", 10, criterion7},
      {8, "automorphisms", 10, criterion8},
      {9, "symmetry candidates", 10, criterion9},
      {10, "radius bounds", 1, criterion10},
      {11, "non-linear repetitivity", 60, criterion11},
      {12, "oracle equivalences", 300, criterion12},
  };
  int failed = 0;
  for (const auto& cr : all) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes << " [exception: " << e.what() << "]";
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > cr.limit_s) c.expect(false, "time limit");
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << cr.id << " (" << cr.title << ") " << std::fixed
              << std::setprecision(3) << s << "s" << c.notes.str() << "\n";
    if (!c.ok) ++failed;
  }
  std::cout << (all.size() - static_cast<std::size_t>(failed)) << "/" << all.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
