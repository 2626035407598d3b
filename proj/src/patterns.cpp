#include "cshape/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "cshape/lattice.hpp"

namespace cshape {

namespace {

using PosIndex = std::unordered_map<IVec, int, VecHash, VecEq>;

PosIndex index_of(const std::vector<IVec>& pts) {
  PosIndex m;
  for (std::size_t i = 0; i < pts.size(); ++i) m.emplace(pts[i], static_cast<int>(i));
  return m;
}

std::vector<IVec> sorted_shape(const std::vector<IVec>& s) { return sorted_unique(s); }

Word gather(const Word& src, const std::vector<int>& idx) {
  Word w(idx.size(), 0);
  for (std::size_t i = 0; i < idx.size(); ++i) w[i] = src[static_cast<std::size_t>(idx[i])];
  return w;
}

// Offsets t with t + shape ⊆ domain, with the domain index of every t + s.
std::vector<std::vector<int>> windows(const std::vector<IVec>& domain, const PosIndex& dom, const std::vector<IVec>& shape) {
  std::vector<std::vector<int>> out;
  std::vector<IVec> offsets;
  for (const auto& d : domain) offsets.push_back(d - shape[0]);
  offsets = sorted_unique(std::move(offsets));
  for (const auto& t : offsets) {
    std::vector<int> idx;
    idx.reserve(shape.size());
    for (const auto& s : shape) {
      auto it = dom.find(IVec(t + s));
      if (it == dom.end()) break;
      idx.push_back(it->second);
    }
    if (idx.size() == shape.size()) out.push_back(std::move(idx));
  }
  return out;
}

std::vector<Word> sorted_words(std::unordered_set<Word> s) {
  std::vector<Word> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::optional<Letter> Pattern::at(const IVec& p) const {
  auto it = std::lower_bound(support.begin(), support.end(), p, LexLess{});
  if (it == support.end() || *it != p) return std::nullopt;
  return letters[static_cast<std::size_t>(it - support.begin())];
}

Pattern make_pattern(std::vector<IVec> support, Word letters) {
  if (support.size() != letters.size()) throw std::invalid_argument("pattern support and letters differ in size");
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return LexLess{}(support[a], support[b]); });
  Pattern p;
  for (std::size_t i : order) {
    if (!p.support.empty() && p.support.back() == support[i]) throw std::invalid_argument("duplicate pattern position");
    p.support.push_back(support[i]);
    p.letters.push_back(letters[i]);
  }
  return p;
}

Pattern substitute(const Substitution& z, const Pattern& p, int n) {
  const auto Fn = iterated_support(z.L(), z.support(), n);
  const auto words = iterate(z, n);
  const IMat Ln = matpow(z.L(), n);
  std::vector<IVec> supp;
  Word letters;
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    const IVec base = Ln * p.support[i];
    const Word& w = words[p.letters[i]];
    for (std::size_t j = 0; j < Fn.size(); ++j) {
      supp.push_back(base + Fn[j]);
      letters.push_back(w[j]);
    }
  }
  return make_pattern(std::move(supp), std::move(letters));
}

std::vector<IVec> occurrences(const Pattern& host, const Pattern& w) {
  std::vector<IVec> out;
  if (w.support.empty()) return out;
  for (std::size_t i = 0; i < host.support.size(); ++i) {
    if (host.letters[i] != w.letters[0]) continue;
    const IVec t = host.support[i] - w.support[0];
    bool ok = true;
    for (std::size_t j = 1; j < w.support.size() && ok; ++j) {
      auto l = host.at(IVec(t + w.support[j]));
      ok = l && *l == w.letters[j];
    }
    if (ok) out.push_back(t);
  }
  return out;
}

std::optional<QVec> occurrence_free_ball(const Pattern& host, const Pattern& w, const Rational& radius) {
  if (host.support.empty()) return std::nullopt;
  const int d = static_cast<int>(host.support[0].size());
  PosIndex cells = index_of(host.support);
  std::unordered_set<IVec, VecHash, VecEq> occupied;
  for (const auto& t : occurrences(host, w))
    for (const auto& s : w.support) occupied.insert(IVec(t + s));
  IVec lo = host.support[0], hi = host.support[0];
  for (const auto& p : host.support) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Rational r2 = radius * radius * Rational(4);
  const Int reach = (radius + Rational(1)).floor();
  // Centers on the half-integer grid, stored doubled.
  for (const auto& C : box(IVec(2 * lo), IVec(2 * hi))) {
    bool ok = true;
    IVec blo(d), bhi(d);
    for (int i = 0; i < d; ++i) {
      blo(i) = C(i) / 2 - reach - 1;
      bhi(i) = C(i) / 2 + reach + 1;
    }
    for (const auto& x : box(blo, bhi)) {
      Int s = 0;
      for (int i = 0; i < d; ++i) s += (2 * x(i) - C(i)) * (2 * x(i) - C(i));
      if (Rational(s) > r2) continue;
      if (!cells.count(x) || occupied.count(x)) {
        ok = false;
        break;
      }
    }
    if (ok) return to_q(C) / Rational(2);
  }
  return std::nullopt;
}

bool Language::contains(const Word& w) const { return std::binary_search(words.begin(), words.end(), w); }

Language Language::restrict(const std::vector<IVec>& sub) const {
  Language out;
  out.shape = sorted_shape(sub);
  const PosIndex pos = index_of(shape);
  std::vector<int> idx;
  for (const auto& s : out.shape) {
    auto it = pos.find(s);
    if (it == pos.end()) throw std::invalid_argument("restriction shape is not a subshape");
    idx.push_back(it->second);
  }
  std::unordered_set<Word> ws;
  for (const auto& w : words) ws.insert(gather(w, idx));
  out.words = sorted_words(std::move(ws));
  return out;
}

std::optional<Letter> Patch::at(const IVec& p) const {
  auto it = cells_.find(p);
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

LanguageGenerator::LanguageGenerator(const Substitution& z, std::size_t cap) : z_(z), cap_(cap) {
  if (!is_primitive(z_).primitive) throw std::invalid_argument("language generation requires a primitive substitution");
  const int d = z_.dim();
  const auto K = k_set(z_);
  k_.assign(K.begin(), K.end());
  const int p = pc4_power(z_, 1 << 20).value_or(1);

  // A legal K-window inside some ζⁿ(a).
  Word v;
  for (int n = 1; v.empty(); ++n) {
    const auto Fn = iterated_support(z_.L(), z_.support(), n);
    const PosIndex fi = index_of(Fn);
    const auto words = iterate(z_, n, cap_);
    for (const auto& x : Fn) {
      const IVec t = x - k_[0];
      std::vector<int> idx;
      for (const auto& k : k_) {
        auto it = fi.find(IVec(t + k));
        if (it == fi.end()) break;
        idx.push_back(it->second);
      }
      if (idx.size() == k_.size()) {
        v = gather(words[0], idx);
        break;
      }
    }
    if (n > 64) throw std::logic_error("no K-window found in iterated images");
  }

  // T(v)_k = ζ^p(v_k) at k − L^p k; its cycles are legal ζ^{pq}-fixed seeds.
  const IMat Lp = matpow(z_.L(), p);
  const PosIndex fp = index_of(iterated_support(z_.L(), z_.support(), p));
  const auto wp = iterate(z_, p, cap_);
  std::vector<int> g;
  for (const auto& k : k_) g.push_back(fp.at(IVec(k - Lp * k)));
  std::map<Word, int> seen;
  int step = 0;
  while (!seen.count(v)) {
    seen[v] = step++;
    Word next(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) next[i] = wp[v[i]][static_cast<std::size_t>(g[i])];
    v = std::move(next);
  }
  seed_ = v;
  period_ = p * (step - seen[v]);

  const auto C = cover_set(z_, {IVec::Zero(d)}, minkowski_sum(z_.support(), z_.support()));
  cover_.assign(C.begin(), C.end());

  // Seeds: C-windows at K of ζ^r(x) for every residue r.
  std::unordered_set<Word> lang;
  std::vector<Word> work;
  auto add = [&](Word w) {
    if (lang.insert(w).second) work.push_back(std::move(w));
  };
  for (int r = 0; r < period_; ++r)
    for (const auto& k : k_) {
      Word w;
      for (const auto& c : cover_) {
        // Walk until the quotient lies in K after a number of steps ≡ r.
        IVec cur = k + c;
        std::vector<int> digits;
        while (!(std::binary_search(k_.begin(), k_.end(), cur, LexLess{}) &&
                 static_cast<int>(digits.size()) % period_ == r)) {
          const auto dd = z_.digits().decompose(cur);
          digits.push_back(dd.digit);
          cur = dd.quotient;
        }
        const auto pos = std::lower_bound(k_.begin(), k_.end(), cur, LexLess{}) - k_.begin();
        Letter x = seed_[static_cast<std::size_t>(pos)];
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) x = z_.image(x, static_cast<std::size_t>(*it));
        w.push_back(x);
      }
      add(std::move(w));
    }

  // Closure under u ↦ C-windows of ζ(u).
  std::vector<IVec> D;
  std::vector<std::pair<int, int>> src;
  for (std::size_t c = 0; c < cover_.size(); ++c)
    for (std::size_t f = 0; f < z_.support().size(); ++f) {
      D.push_back(z_.L() * cover_[c] + z_.support()[f]);
      src.emplace_back(static_cast<int>(c), static_cast<int>(f));
    }
  const auto wins = windows(D, index_of(D), cover_);
  while (!work.empty()) {
    const Word u = std::move(work.back());
    work.pop_back();
    Word img(D.size(), 0);
    for (std::size_t i = 0; i < D.size(); ++i)
      img[i] = z_.image(u[static_cast<std::size_t>(src[i].first)], static_cast<std::size_t>(src[i].second));
    for (const auto& idx : wins) add(gather(img, idx));
    if (lang.size() * cover_.size() > cap_) throw BudgetExceeded("cover language exceeds cell cap " + std::to_string(cap_));
  }
  cover_lang_.shape = cover_;
  cover_lang_.words = sorted_words(std::move(lang));
}

Language LanguageGenerator::language(const std::vector<IVec>& input) const {
  const auto shape = sorted_shape(input);
  if (shape.empty()) throw std::invalid_argument("empty shape");
  // Smallest m with shape inside a translate of F_m.
  int m = 1;
  std::vector<IVec> Fm;
  for (;; ++m) {
    if (std::pow(static_cast<double>(z_.support().size()), m) * static_cast<double>(cover_.size()) > static_cast<double>(cap_))
      throw BudgetExceeded("language shape needs more than the cell cap " + std::to_string(cap_));
    Fm = iterated_support(z_.L(), z_.support(), m);
    const PosIndex fi = index_of(Fm);
    bool fits = false;
    for (const auto& f : Fm) {
      const IVec s = shape[0] - f;
      fits = std::all_of(shape.begin(), shape.end(), [&](const IVec& x) { return fi.count(IVec(x - s)) > 0; });
      if (fits) break;
    }
    if (fits) break;
  }
  const IMat Lm = matpow(z_.L(), m);
  const auto words = iterate(z_, m, cap_);
  std::vector<IVec> D;
  std::vector<std::pair<int, int>> src;
  for (std::size_t c = 0; c < cover_.size(); ++c)
    for (std::size_t f = 0; f < Fm.size(); ++f) {
      D.push_back(Lm * cover_[c] + Fm[f]);
      src.emplace_back(static_cast<int>(c), static_cast<int>(f));
    }
  const auto wins = windows(D, index_of(D), shape);
  if (static_cast<double>(wins.size()) * static_cast<double>(cover_lang_.size()) * static_cast<double>(shape.size()) >
      50.0 * static_cast<double>(cap_))
    throw BudgetExceeded("language extraction exceeds cell cap " + std::to_string(cap_));
  std::unordered_set<Word> out;
  Word img(D.size(), 0);
  for (const auto& u : cover_lang_.words) {
    for (std::size_t i = 0; i < D.size(); ++i)
      img[i] = words[u[static_cast<std::size_t>(src[i].first)]][static_cast<std::size_t>(src[i].second)];
    for (const auto& idx : wins) out.insert(gather(img, idx));
  }
  return {shape, sorted_words(std::move(out))};
}

Letter LanguageGenerator::letter(const IVec& p) const {
  IVec cur = p;
  std::vector<int> digits;
  while (!(std::binary_search(k_.begin(), k_.end(), cur, LexLess{}) && static_cast<int>(digits.size()) % period_ == 0)) {
    const auto dd = z_.digits().decompose(cur);
    digits.push_back(dd.digit);
    cur = dd.quotient;
  }
  const auto pos = std::lower_bound(k_.begin(), k_.end(), cur, LexLess{}) - k_.begin();
  Letter x = seed_[static_cast<std::size_t>(pos)];
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) x = z_.image(x, static_cast<std::size_t>(*it));
  return x;
}

Patch LanguageGenerator::patch(Int radius) const {
  const int d = z_.dim();
  int steps = 0;
  for (const auto& x : box(IVec::Constant(d, -radius), IVec::Constant(d, radius))) {
    IVec cur = x;
    int s = 0;
    while (!std::binary_search(k_.begin(), k_.end(), cur, LexLess{})) {
      cur = z_.digits().decompose(cur).quotient;
      ++s;
    }
    steps = std::max(steps, s);
  }
  const int N = std::max(period_, (steps + period_ - 1) / period_ * period_);
  if (std::pow(static_cast<double>(z_.support().size()), N) * static_cast<double>(k_.size()) > static_cast<double>(cap_))
    throw BudgetExceeded("patch exceeds cell cap " + std::to_string(cap_));
  const auto FN = iterated_support(z_.L(), z_.support(), N);
  const auto words = iterate(z_, N, cap_);
  const IMat LN = matpow(z_.L(), N);
  Patch P;
  for (std::size_t i = 0; i < k_.size(); ++i) {
    const IVec base = LN * k_[i];
    const Word& w = words[seed_[i]];
    for (std::size_t j = 0; j < FN.size(); ++j) P.cells_.emplace(IVec(base + FN[j]), w[j]);
  }
  Int r = radius;
  for (;; ++r) {
    bool full = true;
    const IVec lo = IVec::Constant(d, -(r + 1)), hi = IVec::Constant(d, r + 1);
    for (const auto& x : box(lo, hi)) {
      if ((x.array().abs() == r + 1).any() && !P.cells_.count(x)) {
        full = false;
        break;
      }
    }
    if (!full) break;
  }
  P.inner_ = r;
  return P;
}

Language language(const Substitution& z, const std::vector<IVec>& shape, std::size_t cap) {
  return LanguageGenerator(z, cap).language(shape);
}

std::vector<DifferenceSet> difference_sets(const Language& lk) {
  std::map<std::vector<IVec>, DifferenceSet, std::function<bool(const std::vector<IVec>&, const std::vector<IVec>&)>> found(
      [](const std::vector<IVec>& a, const std::vector<IVec>& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), LexLess{});
      });
  for (std::size_t i = 0; i < lk.words.size(); ++i)
    for (std::size_t j = i + 1; j < lk.words.size(); ++j) {
      std::vector<IVec> W;
      for (std::size_t s = 0; s < lk.shape.size(); ++s)
        if (lk.words[i][s] != lk.words[j][s]) W.push_back(lk.shape[s]);
      if (!W.empty() && !found.count(W)) found.emplace(W, DifferenceSet{W, lk.words[i], lk.words[j]});
    }
  std::vector<DifferenceSet> out;
  for (auto& [w, ds] : found) out.push_back(ds);
  return out;
}

std::vector<DifferenceSet> difference_sets(const Substitution& z) {
  const auto K = k_set(z);
  return difference_sets(language(z, std::vector<IVec>(K.begin(), K.end())));
}

std::optional<int> recognizability_radius(const Substitution& z, int r_max, std::size_t cap) {
  const LanguageGenerator gen(z, cap);
  const int d = z.dim();
  for (int R = 0; R <= r_max; ++R) {
    const auto B = sorted_shape(ball(d, R));
    const auto Cs = cover_set(z, B, z.support());
    const std::vector<IVec> E(Cs.begin(), Cs.end());
    const PosIndex ei = index_of(E);
    const Language le = gen.language(E);
    // For each phase f: source (index in E, digit) of every f + b.
    std::vector<std::vector<std::pair<int, int>>> gathers;
    for (const auto& f : z.support()) {
      std::vector<std::pair<int, int>> g;
      for (const auto& b : B) {
        const auto dd = z.digits().decompose(IVec(f + b));
        g.emplace_back(ei.at(dd.quotient), dd.digit);
      }
      gathers.push_back(std::move(g));
    }
    std::unordered_map<Word, int> phase;
    bool ok = true;
    for (const auto& u : le.words) {
      for (std::size_t f = 0; f < gathers.size() && ok; ++f) {
        Word w;
        for (const auto& [q, g] : gathers[f]) w.push_back(z.image(u[static_cast<std::size_t>(q)], static_cast<std::size_t>(g)));
        auto [it, fresh] = phase.emplace(std::move(w), static_cast<int>(f));
        if (!fresh && it->second != static_cast<int>(f)) ok = false;
      }
      if (!ok) break;
    }
    if (ok) return R;
  }
  return std::nullopt;
}

namespace {

struct Grid {
  Int r = 0;
  int d = 0;
  std::vector<Letter> cells;

  Letter at(const IVec& x) const {
    std::size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * static_cast<std::size_t>(2 * r + 1) + static_cast<std::size_t>(x(i) + r);
    return cells[idx];
  }
};

Grid grid_of(const Patch& p, Int r, int d) {
  Grid g{r, d, {}};
  for (const auto& x : box(IVec::Constant(d, -r), IVec::Constant(d, r))) g.cells.push_back(*p.at(x));
  return g;
}

bool is_period(const Grid& g, const IVec& p) {
  const int d = g.d;
  IVec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo(i) = std::max(-g.r, -g.r - p(i));
    hi(i) = std::min(g.r, g.r - p(i));
  }
  for (const auto& x : box(lo, hi))
    if (g.at(x) != g.at(IVec(x + p))) return false;
  return true;
}

}  // namespace

PeriodSearch period_search(const Substitution& z, int N, std::size_t cap) {
  PeriodSearch out;
  if (N <= 0) return out;
  const LanguageGenerator gen(z, cap);
  const int d = z.dim();
  const Int R0 = static_cast<Int>(std::ceil(2.0 * N * op_norm(z.L()))) + N;
  out.patch_radius = R0;
  const Grid g1 = grid_of(gen.patch(R0), R0, d);
  const Grid g2 = grid_of(gen.patch(2 * R0), 2 * R0, d);
  for (const auto& p : ball(d, N)) {
    Eigen::Index first = 0;
    while (first < d && p(first) == 0) ++first;
    if (first == d || p(first) < 0) continue;
    if (is_period(g1, p) && is_period(g2, p)) out.periods.push_back(p);
  }
  return out;
}

Repetitivity repetitivity(const Substitution& z, const std::vector<int>& radii, std::size_t cap) {
  Repetitivity out;
  const int d = z.dim();
  const bool scalar = z.L().isDiagonal() && (z.L().diagonal().array() == z.L()(0, 0)).all();
  out.exponent = scalar ? 1.0 : -std::log(op_norm(z.L())) / std::log(inv_op_norm(z.L()));
  if (radii.empty()) return out;
  const int rmax = *std::max_element(radii.begin(), radii.end());
  const LanguageGenerator gen(z, cap);
  Int S = std::max<Int>(8, static_cast<Int>(std::ceil(6.0 * (rmax + 1) * op_norm(z.L()))));
  for (;;) {
    const Grid g = grid_of(gen.patch(S), S, d);
    const Int half = S / 2;
    const Int step = std::max<Int>(1, half / 6);
    std::vector<IVec> centers;
    for (const auto& c : box(IVec::Constant(d, -half), IVec::Constant(d, half))) {
      bool on = true;
      for (int i = 0; i < d; ++i) on = on && ((c(i) + half) % step == 0);
      if (on) centers.push_back(c);
    }
    bool widen = false;
    out.values.clear();
    for (int R : radii) {
      const auto B = sorted_shape(ball(d, R));
      const Language lb = gen.language(B);
      std::unordered_map<Word, std::vector<IVec>> occ;
      for (const auto& t : box(IVec::Constant(d, -S + R), IVec::Constant(d, S - R))) {
        Word w;
        for (const auto& b : B) w.push_back(g.at(IVec(t + b)));
        occ[w].push_back(t);
      }
      double M = 0;
      for (const auto& w : lb.words) {
        auto it = occ.find(w);
        if (it == occ.end()) {
          widen = true;
          break;
        }
        for (const auto& c : centers) {
          double best = 1e300;
          for (const auto& t : it->second) best = std::min(best, euclid(IVec(t - c)));
          M = std::max(M, best + R);
        }
      }
      if (widen || M > static_cast<double>(S - half)) {
        widen = true;
        break;
      }
      out.values.emplace_back(R, M);
    }
    if (!widen) return out;
    S *= 2;
    if (std::pow(2.0 * static_cast<double>(S) + 1, d) > static_cast<double>(cap))
      throw BudgetExceeded("repetitivity master patch exceeds cell cap " + std::to_string(cap));
  }
}

}  // namespace cshape
