#include "cshape/directions.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "cshape/lattice.hpp"

namespace cshape {

DirectionContext::DirectionContext(const Substitution& sub) : z(sub) {
  const auto k = k_set(z);
  K.assign(k.begin(), k.end());
  const auto kb = k_bar(z);
  Kbar.assign(kb.begin(), kb.end());
  differences = difference_sets(language(z, K));
}

bool DirectionContext::in_K(const IVec& x) const { return std::binary_search(K.begin(), K.end(), x, LexLess{}); }

IVec DirectionContext::ancestor(const IVec& p, int n) const {
  IVec cur = p;
  for (int i = 0; i < n; ++i) cur = z.digits().decompose(cur).quotient;
  return cur;
}

bool h1_check(const DirectionContext& ctx, const IVec& f, int n) {
  for (const auto& kb : ctx.Kbar)
    if (!ctx.in_K(ctx.ancestor(IVec(f + kb), n))) return false;
  return true;
}

bool h2_check(const DirectionContext& ctx, const IVec& f, int n, const std::vector<IVec>& W, const IVec& v) {
  for (const auto& kb : ctx.Kbar) {
    if (kb.dot(v) >= 0) continue;
    const IVec a = ctx.ancestor(IVec(f + kb), n);
    if (!ctx.in_K(a) || std::find(W.begin(), W.end(), a) != W.end()) return false;
  }
  return true;
}

std::size_t DirectionReport::count(ConeStatus s) const {
  return static_cast<std::size_t>(std::count_if(cones.begin(), cones.end(), [&](const ConeReport& c) { return c.status == s; }));
}

std::pair<Polytope, bool> stable_hull(const Substitution& z, int n_max) {
  const auto t = polytope_test(z.L(), z.support(), std::max(2, n_max));
  if (t.status == PolytopeTest::Status::yes) return {digit_tile_hull(z.L(), z.support(), t.level), true};
  return {convex_hull(z.support()), false};
}

std::vector<std::optional<Certificate>> certify_nondeterministic(const DirectionContext& ctx, const std::vector<Cone>& fan,
                                                                 int n_max) {
  std::vector<std::optional<Certificate>> out(fan.size());
  const auto& z = ctx.z;
  auto done = [&] { return std::all_of(out.begin(), out.end(), [](const auto& c) { return c.has_value(); }); };
  for (int n = 1; n <= n_max && !done(); ++n) {
    const IMat Ln = matpow(z.L(), n);
    const auto Fn = iterated_support(z.L(), z.support(), n);
    const auto ext_n = iterated_extreme_points(z.L(), z.support(), n);
    const Polytope hull_n = convex_hull(ext_n);
    std::vector<IVec> rim;
    for (const auto& f : Fn)
      if (hull_n.on_boundary(to_q(f))) rim.push_back(f);
    rim = sorted_unique(std::move(rim));
    for (const auto& ds : ctx.differences) {
      if (done()) break;
      std::vector<IVec> corners;
      for (const auto& w : ds.W)
        for (const auto& e : ext_n) corners.push_back(Ln * w + e);
      const Polytope Q = convex_hull(corners);
      if (!Q.full_dimensional()) continue;
      for (const auto& k : ds.W) {
        for (const auto& r : rim) {
          const IVec f = Ln * k + r;
          const QVec fq = to_q(f);
          if (!Q.on_boundary(fq) || !h1_check(ctx, f, n)) continue;
          const int face = Q.smallest_face(fq);
          const Cone cone = opposite_normal_cone(Q, Q.faces[static_cast<std::size_t>(face)]);
          for (std::size_t i = 0; i < fan.size(); ++i) {
            if (out[i]) continue;
            const auto& gens = fan[i].generators;
            if (!std::all_of(gens.begin(), gens.end(), [&](const IVec& g) { return cone.contains(g); })) continue;
            bool h2 = h2_check(ctx, f, n, ds.W, fan[i].interior_sample());
            for (const auto& g : gens) h2 = h2 && h2_check(ctx, f, n, ds.W, g);
            if (!h2) continue;
            Certificate c{ds.W, k, n, f, {}, cone};
            for (int vi : Q.faces[static_cast<std::size_t>(face)].vertices) {
              const QVec& vq = Q.vertices[static_cast<std::size_t>(vi)];
              IVec vz(vq.size());
              for (Eigen::Index j = 0; j < vq.size(); ++j) vz(j) = vq(j).to_int();
              c.face.push_back(vz);
            }
            out[i] = c;
          }
        }
      }
    }
  }
  return out;
}

std::optional<int> certify_deterministic(const LanguageGenerator& gen, const Cone& cone, int r_max) {
  const IVec v = primitive(cone.interior_sample());
  const int d = gen.substitution().dim();
  for (int r = 1; r <= r_max; ++r) {
    const Language lang = gen.language(ball(d, r));
    std::vector<std::size_t> known, target;
    for (std::size_t i = 0; i < lang.shape.size(); ++i) {
      const IVec& x = lang.shape[i];
      if (x.dot(v) < 0) known.push_back(i);
      else if (x.cwiseAbs().sum() <= 1 && euclid(x) <= 1.0) target.push_back(i);
    }
    std::unordered_map<Word, Word> seen;
    bool ok = true;
    for (const auto& w : lang.words) {
      Word key, val;
      for (auto i : known) key.push_back(w[i]);
      for (auto i : target) val.push_back(w[i]);
      auto [it, fresh] = seen.emplace(key, val);
      if (!fresh && it->second != val) {
        ok = false;
        break;
      }
    }
    if (ok) return r;
  }
  return std::nullopt;
}

DirectionReport direction_report(const Substitution& z, int n_max, int r_max) {
  DirectionReport rep;
  rep.max_level = n_max;
  rep.max_radius = r_max;
  auto [hull, stable] = stable_hull(z, n_max);
  rep.hull = hull;
  rep.stable = stable;
  const auto fan = normal_fan(rep.hull);
  const DirectionContext ctx(z);
  const auto certs = certify_nondeterministic(ctx, fan, n_max);
  std::optional<LanguageGenerator> gen;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    ConeReport cr{fan[i], ConeStatus::unknown, certs[i], std::nullopt};
    if (certs[i]) {
      cr.status = ConeStatus::nondeterministic;
    } else if (r_max > 0) {
      if (!gen) gen.emplace(z);
      cr.radius = certify_deterministic(*gen, fan[i], r_max);
      if (cr.radius) cr.status = ConeStatus::deterministic;
    }
    rep.cones.push_back(cr);
  }
  return rep;
}

PairCheck verify_certificate(const DirectionContext& ctx, const Certificate& cert, const IVec& v, int R, int m_max) {
  const auto& z = ctx.z;
  const int d = z.dim();
  const DifferenceSet* ds = nullptr;
  for (const auto& s : ctx.differences)
    if (s.W == cert.W) ds = &s;
  if (!ds) throw std::invalid_argument("certificate set is not a difference set");
  IVec g;
  for (const auto& e : extreme_points(z.support()))
    if (g.size() == 0 || e.dot(v) < g.dot(v)) g = e;

  auto letter = [&](const Word& seed, const IVec& p, int N) -> std::optional<Letter> {
    std::vector<int> digits;
    IVec cur = p;
    for (int i = 0; i < N; ++i) {
      const auto dd = z.digits().decompose(cur);
      digits.push_back(dd.digit);
      cur = dd.quotient;
    }
    auto it = std::lower_bound(ctx.K.begin(), ctx.K.end(), cur, LexLess{});
    if (it == ctx.K.end() || *it != cur) return std::nullopt;
    Letter x = seed[static_cast<std::size_t>(it - ctx.K.begin())];
    for (auto jt = digits.rbegin(); jt != digits.rend(); ++jt) x = z.image(x, static_cast<std::size_t>(*jt));
    return x;
  };

  PairCheck pc;
  IVec c = cert.f;
  for (int m = 1; m <= m_max; ++m) {
    c = z.L() * c + g;
    pc = PairCheck{};
    pc.m = m;
    bool covered = true;
    std::vector<IVec> half, rest;
    for (const auto& off : ball(d, R)) {
      const IVec p = c + off;
      if (off.dot(v) < 0) {
        const IVec a = ctx.ancestor(p, m) - cert.f;
        if (!std::binary_search(ctx.Kbar.begin(), ctx.Kbar.end(), a, LexLess{})) {
          covered = false;
          break;
        }
        half.push_back(p);
      } else {
        rest.push_back(p);
      }
    }
    if (!covered) continue;
    pc.covered = true;
    const int N = cert.n + m;
    pc.agree = true;
    for (const auto& p : half) {
      const auto a = letter(ds->first, p, N), b = letter(ds->second, p, N);
      if (!a || !b || *a != *b) {
        pc.agree = false;
        break;
      }
    }
    for (const auto& p : rest) {
      const auto a = letter(ds->first, p, N), b = letter(ds->second, p, N);
      if (a && b && *a != *b) {
        pc.disagree = true;
        break;
      }
    }
    return pc;
  }
  return pc;
}

}  // namespace cshape
