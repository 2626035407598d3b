#include "cshape/morphisms.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace cshape {

namespace {

using Cells = std::unordered_map<IVec, Letter, VecHash, VecEq>;

Int mod(Int a, Int m) {
  const Int r = a % m;
  return r < 0 ? r + m : r;
}

Int to_ll(const Rational::BigInt& v) { return static_cast<Int>(v); }

Int isqrt_floor(Int n) {
  Int r = static_cast<Int>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_diagonal(const IMat& g) {
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      if (i != j && g(i, j) != 0) return false;
  return true;
}

Rational round_up(double x) {
  constexpr Int scale = 1'000'000'000;
  return Rational(static_cast<Int>(std::ceil(x * static_cast<double>(scale))) + 1, scale);
}

// Smallest integer r with r >= factor * sqrt(n).
Int ceil_scaled_sqrt(const Rational& factor, Int n) {
  const Rational target = factor * factor * Rational(n);
  Int r = static_cast<Int>(std::floor(factor.to_double() * std::sqrt(static_cast<double>(n))));
  r = std::max<Int>(r - 2, 0);
  while (Rational(r * r) < target) ++r;
  return r;
}

Int f1_norm_sq(const Substitution& z) {
  Int best = 0;
  for (const auto& f : z.support()) best = std::max(best, f.squaredNorm());
  return best;
}

Word restrict_word(const Word& w, const std::vector<int>& idx) {
  Word out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(w[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<int> positions_in(const std::vector<IVec>& shape, const std::vector<IVec>& sub) {
  std::unordered_map<IVec, int, VecHash, VecEq> at;
  for (std::size_t i = 0; i < shape.size(); ++i) at.emplace(shape[i], static_cast<int>(i));
  std::vector<int> idx;
  for (const auto& p : sub) idx.push_back(at.at(p));
  return idx;
}

IMat integral_inverse(const IMat& M) {
  const Int dt = det(M);
  if (dt != 1 && dt != -1) throw std::invalid_argument("matrix is not in GL(d, Z)");
  return adjugate(M) * dt;
}

// φ applied to the cells of a configuration on [-R, R]^d where defined.
Cells apply_map(const BlockMap& phi, const Cells& x, Int R) {
  const int d = static_cast<int>(phi.M.rows());
  const IMat Minv = integral_inverse(phi.M);
  Cells out;
  for (const auto& n : box(IVec::Constant(d, -R), IVec::Constant(d, R))) {
    const IVec c = Minv * n + phi.offset;
    Word key;
    bool ok = true;
    for (const auto& b : phi.support) {
      auto it = x.find(IVec(c + b));
      if (it == x.end()) {
        ok = false;
        break;
      }
      key.push_back(it->second);
    }
    if (!ok) continue;
    auto t = phi.table.find(key);
    if (t != phi.table.end()) out.emplace(n, t->second);
  }
  return out;
}

struct ListLess {
  bool operator()(const std::vector<IVec>& a, const std::vector<IVec>& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), LexLess{});
  }
};

bool equal_up_to_shift(const Cells& a, const Cells& b, Int R, Int s) {
  const int d = static_cast<int>(a.begin()->first.size());
  const auto inner = box(IVec::Constant(d, -(R - s)), IVec::Constant(d, R - s));
  for (const auto& j : box(IVec::Constant(d, -s), IVec::Constant(d, s))) {
    bool same = true;
    for (const auto& n : inner) {
      auto ia = a.find(n);
      auto ib = b.find(IVec(n + j));
      if (ia == a.end() || ib == b.end() || ia->second != ib->second) {
        same = false;
        break;
      }
    }
    if (same) return true;
  }
  return false;
}

}  // namespace

HeightLattice height_lattice(const Substitution& z, Int window, Int max_window, std::size_t cap) {
  const LanguageGenerator gen(z, cap);
  const int d = z.dim();
  HeightLattice out;
  std::optional<Lattice> prev;
  std::vector<IVec> prev_gens;
  for (Int w = std::max<Int>(window, 1);; w *= 2) {
    if (w > max_window) {
      out.partial = true;
      break;
    }
    const Patch patch = gen.patch(w);
    std::vector<std::optional<IVec>> first(static_cast<std::size_t>(z.size()));
    std::vector<IVec> gens;
    for (const auto& p : box(IVec::Constant(d, -w), IVec::Constant(d, w))) {
      const Letter a = *patch.at(p);
      auto& f = first[a];
      if (!f) f = p;
      else gens.push_back(p - *f);
    }
    QMat g(d, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t i = 0; i < gens.size(); ++i) g.col(static_cast<Eigen::Index>(i)) = to_q(gens[i]);
    if (gens.empty() || rank(g) < d) continue;
    const Lattice R = Lattice::from_generators(gens, d);
    out.window = w;
    if (prev && *prev == R) break;
    prev = R;
  }
  if (!prev) {
    out.H = Lattice::integer(d);
    out.partial = true;
    return out;
  }
  for (Eigen::Index j = 0; j < prev->basis().cols(); ++j) out.returns.push_back(prev->basis().col(j));
  out.H = saturate_height(out.returns, z.L());
  return out;
}

bool eigenvalue_check(const QVec& x, const IMat& L, const Lattice& H) {
  const int d = static_cast<int>(L.rows());
  Int q = 1;
  for (Eigen::Index i = 0; i < x.size(); ++i) q = std::lcm(q, to_ll(x(i).denominator()));
  IVec u(d);
  for (int i = 0; i < d; ++i) u(i) = mod(to_ll((x(i) * Rational(q)).numerator()), q);
  const IMat Lt = L.transpose();
  std::map<std::vector<Int>, int> seen;
  std::vector<IVec> orbit;
  while (true) {
    std::vector<Int> key(u.data(), u.data() + d);
    auto [it, fresh] = seen.emplace(key, static_cast<int>(orbit.size()));
    if (!fresh) {
      for (std::size_t k = static_cast<std::size_t>(it->second); k < orbit.size(); ++k)
        for (Eigen::Index j = 0; j < H.basis().cols(); ++j) {
          __int128 s = 0;
          for (int i = 0; i < d; ++i) s += static_cast<__int128>(H.basis()(i, j)) * orbit[k](i);
          if (s % q != 0) return false;
        }
      return true;
    }
    orbit.push_back(u);
    IVec next(d);
    for (int i = 0; i < d; ++i) {
      __int128 s = 0;
      for (int j = 0; j < d; ++j) s += static_cast<__int128>(Lt(i, j)) * u(j);
      next(i) = static_cast<Int>(((s % q) + q) % q);
    }
    u = next;
  }
}

bool eigenvalue_check(const QVec& x, const Substitution& z) {
  return eigenvalue_check(x, z.L(), height_lattice(z).H);
}

Lattice OdometerChain::level(int n) const { return transform(matpow(L, n), H); }

IVec OdometerChain::phase(int n, const IVec& p) const { return level(n).reduce(p); }

OdometerChain meq_factor(const Substitution& z) { return {height_lattice(z).H, z.L()}; }

std::vector<NormalizerLevel> normalizer_condition(const IMat& M, const IMat& L1, const Lattice& H1, const IMat& L2,
                                                  const Lattice& H2, int n_max, std::size_t state_cap) {
  const int d = static_cast<int>(M.rows());
  std::vector<NormalizerLevel> out;
  for (int n = 0; n <= n_max; ++n) {
    NormalizerLevel lv;
    lv.n = n;
    const Lattice target = preimage(M, transform(matpow(L2, n), H2));
    const Int N = target.index();
    IMat B = H1.basis();
    for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = mod(B.data()[i], N);
    std::set<std::vector<Int>> seen;
    for (int m = 0;; ++m) {
      bool inside = true;
      for (int j = 0; j < d && inside; ++j) inside = target.contains(IVec(B.col(j)));
      if (inside) {
        lv.holds = true;
        lv.m = m;
        break;
      }
      if (!seen.emplace(B.data(), B.data() + B.size()).second) {
        lv.holds = false;
        break;
      }
      if (seen.size() > state_cap) break;
      IMat next(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          __int128 s = 0;
          for (int k = 0; k < d; ++k) s += static_cast<__int128>(L1(i, k)) * B(k, j);
          next(i, j) = static_cast<Int>(((s % N) + N) % N);
        }
      B = next;
    }
    out.push_back(lv);
  }
  return out;
}

OdometerFactor odometer_factor_check(const OdometerChain& from, const OdometerChain& to, int n_max) {
  const int d = static_cast<int>(from.L.rows());
  OdometerFactor out;
  out.holds = true;
  for (const auto& lv : normalizer_condition(IMat::Identity(d, d), from.L, from.H, to.L, to.H, n_max)) {
    out.witness.push_back(lv.m);
    if (lv.holds != true) out.holds = false;
  }
  return out;
}

Rational norm_upper_bound(const IMat& m) {
  const IMat g = m.transpose() * m;
  if (is_diagonal(g)) {
    const Int top = g.diagonal().maxCoeff();
    const Int s = isqrt_floor(top);
    if (s * s == top) return Rational(s);
  }
  return round_up(op_norm(m));
}

Rational inverse_norm_upper_bound(const IMat& m) {
  const IMat g = m * m.transpose();
  if (is_diagonal(g)) {
    const Int low = g.diagonal().minCoeff();
    const Int s = isqrt_floor(low);
    if (s * s == low) return Rational(1, s);
  }
  return round_up(inv_op_norm(m));
}

double RadiusBound::value() const {
  return finite ? factor.to_double() * std::sqrt(static_cast<double>(f1_norm_sq)) : HUGE_VAL;
}

RadiusBound radius_bound(const Substitution& z) {
  RadiusBound out;
  out.f1_norm_sq = f1_norm_sq(z);
  const Rational t = inverse_norm_upper_bound(z.L());
  if (t >= Rational(1)) return out;
  out.factor = Rational(1) + t * (Rational(2) + Rational(1) / (Rational(1) - t));
  out.radius = ceil_scaled_sqrt(out.factor, out.f1_norm_sq);
  out.finite = true;
  return out;
}

RadiusBound homomorphism_radius_bound(const Substitution& z, const IMat& M) {
  RadiusBound out;
  out.f1_norm_sq = f1_norm_sq(z);
  const Rational t = inverse_norm_upper_bound(z.L());
  if (t >= Rational(1)) return out;
  out.factor = t * (Rational(1) + norm_upper_bound(M)) * (Rational(2) - t) / (Rational(1) - t);
  out.radius = ceil_scaled_sqrt(out.factor, out.f1_norm_sq);
  out.finite = true;
  return out;
}

BlockMap letter_block_map(const Substitution& z, const std::vector<Letter>& perm) {
  BlockMap phi;
  phi.radius = 0;
  phi.support = {zeros<Int>(z.dim())};
  phi.M = IMat::Identity(z.dim(), z.dim());
  phi.offset = zeros<Int>(z.dim());
  for (int a = 0; a < z.size(); ++a) phi.table[Word(1, static_cast<Letter>(a))] = perm[static_cast<std::size_t>(a)];
  return phi;
}

HomomorphismCheck verify_homomorphism(const Substitution& z, const BlockMap& phi, Int window, std::size_t cap) {
  const int d = z.dim();
  const LanguageGenerator gen(z, cap);
  const IMat Minv = integral_inverse(phi.M);
  const auto target = box(IVec::Constant(d, -window), IVec::Constant(d, window));
  std::vector<IVec> source;
  for (const auto& n : target)
    for (const auto& b : phi.support) source.push_back(Minv * n + phi.offset + b);
  source = sorted_unique(source);
  std::unordered_map<IVec, int, VecHash, VecEq> at;
  for (std::size_t i = 0; i < source.size(); ++i) at.emplace(source[i], static_cast<int>(i));
  std::vector<std::vector<int>> reads;
  for (const auto& n : target) {
    std::vector<int> r;
    for (const auto& b : phi.support) r.push_back(at.at(IVec(Minv * n + phi.offset + b)));
    reads.push_back(r);
  }

  const Language ls = gen.language(source);
  const Language lt = gen.language(target);
  HomomorphismCheck out;
  out.window = window;
  std::set<Word> images;
  for (const auto& u : ls.words) {
    Word img;
    for (const auto& r : reads) {
      auto it = phi.table.find(restrict_word(u, r));
      if (it == phi.table.end()) {
        out.counterexample = make_pattern(source, u);
        out.reason = "block map undefined on a legal pattern";
        return out;
      }
      img.push_back(it->second);
    }
    if (!lt.contains(img)) {
      out.counterexample = make_pattern(source, u);
      out.reason = "image pattern is not in the language";
      return out;
    }
    images.insert(img);
  }
  for (const auto& w : lt.words)
    if (!images.count(w)) {
      out.counterexample = make_pattern(target, w);
      out.reason = "language pattern has no preimage";
      return out;
    }
  out.verified = true;
  return out;
}

namespace {

// Letter permutations T with T(ζ(a)_f) = ζ(T a)_f for all a, f.
std::vector<std::vector<Letter>> commuting_permutations(const Substitution& z) {
  const int n = z.size();
  std::vector<std::vector<Letter>> out;
  for (int b = 0; b < n; ++b) {
    std::vector<int> T(static_cast<std::size_t>(n), -1);
    T[0] = b;
    std::vector<int> queue{0};
    bool ok = true;
    while (!queue.empty() && ok) {
      const int a = queue.back();
      queue.pop_back();
      for (std::size_t f = 0; f < z.support().size() && ok; ++f) {
        const int src = static_cast<int>(z.image(static_cast<Letter>(a), f));
        const int dst = static_cast<int>(z.image(static_cast<Letter>(T[static_cast<std::size_t>(a)]), f));
        int& slot = T[static_cast<std::size_t>(src)];
        if (slot < 0) {
          slot = dst;
          queue.push_back(src);
        } else if (slot != dst) {
          ok = false;
        }
      }
    }
    if (!ok || std::count(T.begin(), T.end(), -1) > 0) continue;
    std::vector<int> sorted = T;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    out.emplace_back(T.begin(), T.end());
  }
  return out;
}

struct Csp {
  std::vector<std::uint64_t> dom;
  // (P, f, R): Φ(R) = ζ(Φ(P))_f
  std::vector<std::array<int, 3>> cons;
  std::vector<std::vector<int>> touching;
};

class BlockSearch {
 public:
  BlockSearch(const Substitution& z, Csp csp, std::size_t node_cap) : z_(z), csp_(std::move(csp)), cap_(node_cap) {}

  std::vector<std::vector<Letter>> run() {
    auto dom = csp_.dom;
    if (propagate(dom, {})) search(dom);
    return solutions_;
  }
  bool exhausted() const { return nodes_ > cap_; }

 private:
  std::uint64_t forward(std::uint64_t src, std::size_t f) const {
    std::uint64_t out = 0;
    for (int v = 0; v < z_.size(); ++v)
      if (src >> v & 1) out |= std::uint64_t{1} << z_.image(static_cast<Letter>(v), f);
    return out;
  }
  std::uint64_t backward(std::uint64_t dst, std::size_t f) const {
    std::uint64_t out = 0;
    for (int v = 0; v < z_.size(); ++v)
      if (dst >> z_.image(static_cast<Letter>(v), f) & 1) out |= std::uint64_t{1} << v;
    return out;
  }

  bool propagate(std::vector<std::uint64_t>& dom, std::vector<int> queue) {
    if (queue.empty())
      for (std::size_t c = 0; c < csp_.cons.size(); ++c) queue.push_back(static_cast<int>(c));
    std::vector<char> queued(csp_.cons.size(), 0);
    for (int c : queue) queued[static_cast<std::size_t>(c)] = 1;
    while (!queue.empty()) {
      const int c = queue.back();
      queue.pop_back();
      queued[static_cast<std::size_t>(c)] = 0;
      const auto [P, f, R] = csp_.cons[static_cast<std::size_t>(c)];
      const auto fs = static_cast<std::size_t>(f);
      const std::uint64_t nr = dom[static_cast<std::size_t>(R)] & forward(dom[static_cast<std::size_t>(P)], fs);
      const std::uint64_t np = dom[static_cast<std::size_t>(P)] & backward(nr, fs);
      for (auto [id, nv] : {std::pair{R, nr}, std::pair{P, np}}) {
        if (nv == 0) return false;
        if (nv != dom[static_cast<std::size_t>(id)]) {
          dom[static_cast<std::size_t>(id)] = nv;
          for (int c2 : csp_.touching[static_cast<std::size_t>(id)])
            if (!queued[static_cast<std::size_t>(c2)]) {
              queued[static_cast<std::size_t>(c2)] = 1;
              queue.push_back(c2);
            }
        }
      }
    }
    return true;
  }

  void search(std::vector<std::uint64_t>& dom) {
    if (++nodes_ > cap_) return;
    int pick = -1;
    int best = 65;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      const int c = std::popcount(dom[i]);
      if (c > 1 && c < best) {
        best = c;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) {
      std::vector<Letter> sol;
      for (auto v : dom) sol.push_back(static_cast<Letter>(std::countr_zero(v)));
      solutions_.push_back(sol);
      return;
    }
    for (int v = 0; v < z_.size(); ++v) {
      if (!(dom[static_cast<std::size_t>(pick)] >> v & 1)) continue;
      auto next = dom;
      next[static_cast<std::size_t>(pick)] = std::uint64_t{1} << v;
      if (propagate(next, csp_.touching[static_cast<std::size_t>(pick)])) search(next);
      if (nodes_ > cap_) return;
    }
  }

  const Substitution& z_;
  Csp csp_;
  std::size_t cap_;
  std::size_t nodes_ = 0;
  std::vector<std::vector<Letter>> solutions_;
};

// Block maps ψ of radius r with S^p ψ ζ = ζ ψ.
std::vector<BlockMap> equivariant_maps(const LanguageGenerator& gen, Int r, std::size_t node_cap, bool& partial) {
  const Substitution& z = gen.substitution();
  const int d = z.dim();
  if (z.size() > 64) throw std::invalid_argument("general automorphism search supports at most 64 letters");
  const auto B = sorted_unique(ball(d, static_cast<double>(r)));
  const Language lb = gen.language(B);
  std::map<Word, int> id;
  for (std::size_t i = 0; i < lb.words.size(); ++i) id.emplace(lb.words[i], static_cast<int>(i));

  std::vector<BlockMap> out;
  for (const auto& p : z.support()) {
    std::vector<IVec> U = B;
    std::vector<std::vector<std::pair<IVec, int>>> reads(z.support().size());
    for (std::size_t f = 0; f < z.support().size(); ++f)
      for (const auto& b : B) {
        const auto dd = z.digits().decompose(IVec(z.support()[f] + p + b));
        U.push_back(dd.quotient);
        reads[f].emplace_back(dd.quotient, dd.digit);
      }
    U = sorted_unique(U);
    const Language lu = gen.language(U);
    const auto bidx = positions_in(U, B);
    std::vector<std::vector<std::pair<int, int>>> ridx(reads.size());
    for (std::size_t f = 0; f < reads.size(); ++f)
      for (const auto& [q, g] : reads[f]) ridx[f].emplace_back(positions_in(U, {q})[0], g);

    Csp csp;
    csp.dom.assign(lb.words.size(), z.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << z.size()) - 1);
    csp.touching.resize(lb.words.size());
    std::set<std::array<int, 3>> seen;
    for (const auto& u : lu.words) {
      const int P = id.at(restrict_word(u, bidx));
      for (std::size_t f = 0; f < ridx.size(); ++f) {
        Word w;
        for (const auto& [qi, g] : ridx[f]) w.push_back(z.image(u[static_cast<std::size_t>(qi)], static_cast<std::size_t>(g)));
        const int R = id.at(w);
        std::array<int, 3> c{P, static_cast<int>(f), R};
        if (!seen.insert(c).second) continue;
        const int ci = static_cast<int>(csp.cons.size());
        csp.cons.push_back(c);
        csp.touching[static_cast<std::size_t>(P)].push_back(ci);
        if (R != P) csp.touching[static_cast<std::size_t>(R)].push_back(ci);
      }
    }
    BlockSearch search(z, std::move(csp), node_cap);
    for (const auto& sol : search.run()) {
      BlockMap phi;
      phi.radius = r;
      phi.support = B;
      phi.M = IMat::Identity(d, d);
      phi.offset = zeros<Int>(d);
      for (std::size_t i = 0; i < sol.size(); ++i) phi.table.emplace(lb.words[i], sol[i]);
      out.push_back(std::move(phi));
    }
    if (search.exhausted()) partial = true;
  }
  return out;
}

std::vector<Letter> compose_perm(const std::vector<Letter>& a, const std::vector<Letter>& b) {
  std::vector<Letter> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
  return out;
}

}  // namespace

AutomorphismGroup automorphisms(const Substitution& z, AutomorphismMode mode, Int r_max, std::size_t node_cap,
                                std::size_t cap) {
  const LanguageGenerator gen(z, cap);
  AutomorphismGroup out;
  out.mode = mode;

  if (mode == AutomorphismMode::bijective) {
    const auto kbar = k_bar(z);
    const Language lk = gen.language(std::vector<IVec>(kbar.begin(), kbar.end()));
    for (const auto& T : commuting_permutations(z)) {
      bool keeps = true;
      for (const auto& w : lk.words) {
        Word img;
        for (Letter a : w) img.push_back(T[a]);
        if (!lk.contains(img)) {
          keeps = false;
          break;
        }
      }
      if (!keeps) continue;
      out.letter_perms.push_back(T);
      out.maps.push_back(letter_block_map(z, T));
    }
    const std::size_t n = out.letter_perms.size();
    out.multiplication.assign(n, std::vector<int>(n, -1));
    bool closed = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto c = compose_perm(out.letter_perms[i], out.letter_perms[j]);
        auto it = std::find(out.letter_perms.begin(), out.letter_perms.end(), c);
        if (it == out.letter_perms.end()) closed = false;
        else out.multiplication[i][j] = static_cast<int>(it - out.letter_perms.begin());
      }
    out.closed = closed && n > 0;
    return out;
  }

  const RadiusBound rb = radius_bound(z);
  const Int r_top = rb.finite ? std::min(r_max, rb.radius) : r_max;
  out.partial = !rb.finite || r_top < rb.radius;
  out.radius = r_top;

  const Int R = 6 * (r_top + 2);
  const Patch patch = gen.patch(2 * R);
  const Int s = 2 * r_top + 2;
  std::vector<Cells> images;
  for (Int r = 0; r <= r_top; ++r) {
    for (auto& phi : equivariant_maps(gen, r, node_cap, out.partial)) {
      if (!verify_homomorphism(z, phi, 1, cap).verified) continue;
      Cells img = apply_map(phi, patch.cells(), R);
      bool known = false;
      for (const auto& other : images)
        if (equal_up_to_shift(other, img, R, s)) {
          known = true;
          break;
        }
      if (known) continue;
      images.push_back(std::move(img));
      out.maps.push_back(std::move(phi));
    }
  }

  const std::size_t n = out.maps.size();
  out.multiplication.assign(n, std::vector<int>(n, -1));
  bool closed = n > 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Cells inner = apply_map(out.maps[j], patch.cells(), 2 * R - out.maps[j].radius);
      const Cells both = apply_map(out.maps[i], inner, R);
      for (std::size_t k = 0; k < n; ++k)
        if (equal_up_to_shift(images[k], both, R, s)) {
          out.multiplication[i][j] = static_cast<int>(k);
          break;
        }
      if (out.multiplication[i][j] < 0) closed = false;
    }
  out.closed = closed;
  return out;
}

SymmetrySearch symmetry_candidates(const Substitution& z, const DirectionReport& report, const Lattice& H,
                                   int n_max) {
  const int d = z.dim();
  SymmetrySearch out;
  std::vector<std::vector<IVec>> nd_cones;
  for (const auto& c : report.cones) {
    if (c.status != ConeStatus::nondeterministic) continue;
    std::vector<IVec> g;
    for (const auto& v : c.cone.generators) g.push_back(primitive(v));
    nd_cones.push_back(sorted_unique(g));
    for (const auto& v : g) out.normals.push_back(v);
  }
  out.normals = sorted_unique(out.normals);
  const auto& N = out.normals;
  const int n = static_cast<int>(N.size());

  std::vector<int> basis;
  {
    QMat acc(d, 0);
    for (int i = 0; i < n && static_cast<int>(basis.size()) < d; ++i) {
      QMat next(d, acc.cols() + 1);
      next << acc, to_q(N[static_cast<std::size_t>(i)]);
      if (rank(next) > static_cast<int>(acc.cols())) {
        acc = next;
        basis.push_back(i);
      }
    }
    if (static_cast<int>(basis.size()) < d)
      throw std::domain_error("fewer than d linearly independent nondeterministic normals");
  }
  IMat P(d, d);
  for (int j = 0; j < d; ++j) P.col(j) = N[static_cast<std::size_t>(basis[static_cast<std::size_t>(j)])];
  const QMat Pinv = inverse(P);
  QMat Pall(d, n);
  for (int j = 0; j < n; ++j) Pall.col(j) = to_q(N[static_cast<std::size_t>(j)]);
  const double norm_bound = op_norm(Pall) * op_norm(Pinv);

  std::map<IVec, int, LexLess> where;
  for (int i = 0; i < n; ++i) where.emplace(N[static_cast<std::size_t>(i)], i);
  std::set<std::vector<IVec>, ListLess> cone_set(nd_cones.begin(), nd_cones.end());

  Int fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  const Int order_cap = 2 * fact;

  std::vector<int> choice(static_cast<std::size_t>(d), 0);
  const int options = 2 * n;
  std::set<std::vector<Int>> seen;
  while (true) {
    QMat img(d, d);
    for (int j = 0; j < d; ++j) {
      const int c = choice[static_cast<std::size_t>(j)];
      img.col(j) = to_q(N[static_cast<std::size_t>(c / 2)]) * Rational(c % 2 ? -1 : 1);
    }
    const QMat Ms = img * Pinv;
    bool ok = true;
    IMat Mstar(d, d);
    for (int i = 0; i < d && ok; ++i)
      for (int j = 0; j < d && ok; ++j) {
        if (!Ms(i, j).is_integer()) ok = false;
        else Mstar(i, j) = Ms(i, j).to_int();
      }
    SymmetryCandidate cand;
    if (ok) ok = std::abs(det(Mstar)) == 1;
    if (ok) {
      std::vector<char> hit(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < n && ok; ++i) {
        const IVec w = Mstar * N[static_cast<std::size_t>(i)];
        auto pos = where.find(w);
        auto neg = where.find(IVec(-w));
        int j = -1, sign = 1;
        if (pos != where.end()) j = pos->second;
        else if (neg != where.end()) j = neg->second, sign = -1;
        if (j < 0 || hit[static_cast<std::size_t>(j)]) ok = false;
        else {
          hit[static_cast<std::size_t>(j)] = 1;
          cand.normal_map.emplace_back(j, sign);
        }
      }
    }
    if (ok)
      for (const auto& c : nd_cones) {
        std::vector<IVec> m;
        for (const auto& v : c) m.push_back(primitive(IVec(Mstar * v)));
        if (!cone_set.count(sorted_unique(m))) {
          ok = false;
          break;
        }
      }
    if (ok) {
      cand.M = Mstar.transpose();
      std::vector<Int> key(cand.M.data(), cand.M.data() + cand.M.size());
      ok = seen.insert(key).second;
    }
    if (ok) {
      for (const auto& lv : normalizer_condition(cand.M, z.L(), H, z.L(), H, n_max))
        if (lv.holds == false) ok = false;
    }
    if (ok) {
      IMat pw = cand.M;
      const IMat id = IMat::Identity(d, d);
      for (Int k = 1; k <= order_cap; ++k) {
        if (pw == id) {
          cand.order = static_cast<int>(k);
          break;
        }
        pw = pw * cand.M;
      }
      cand.norm_bound = norm_bound;
      out.candidates.push_back(cand);
    }
    int pos = 0;
    while (pos < d && ++choice[static_cast<std::size_t>(pos)] == options) choice[static_cast<std::size_t>(pos++)] = 0;
    if (pos == d) break;
  }

  std::sort(out.candidates.begin(), out.candidates.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.M.data(), a.M.data() + a.M.size(), b.M.data(), b.M.data() + b.M.size());
  });
  out.finite_orders = std::all_of(out.candidates.begin(), out.candidates.end(), [](const auto& c) { return c.order > 0; });
  std::set<std::vector<Int>> residues;
  for (const auto& c : out.candidates) {
    std::vector<Int> r;
    for (Eigen::Index i = 0; i < c.M.size(); ++i) r.push_back(mod(c.M.data()[i], 3));
    residues.insert(r);
  }
  out.distinct_mod3 = residues.size() == out.candidates.size();
  return out;
}

}  // namespace cshape
