#include "cshape/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "cshape/geometry.hpp"

namespace cshape {

namespace {

DigitSystem checked_digits(const IMat& L, const std::vector<IVec>& support) {
  if (L.rows() == 0 || L.rows() != L.cols()) throw std::invalid_argument("L must be a nonempty square matrix");
  if (!is_expansion(L)) throw std::invalid_argument("L is not expanding");
  for (const auto& f : support)
    if (f.size() != L.rows()) throw std::invalid_argument("support vector has wrong dimension");
  if (sorted_unique(support).size() != support.size()) throw std::invalid_argument("duplicate support vector");
  if (!is_fundamental_domain(support, L))
    throw std::invalid_argument("support is not a fundamental domain of L(Z^d) containing 0");
  return DigitSystem(L, support);
}

std::vector<Letter> class_map(const Partition& p, int n) {
  std::vector<Letter> q(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < p.size(); ++c)
    for (Letter a : p[c]) q[a] = static_cast<Letter>(c);
  return q;
}

Partition from_union_find(std::vector<int> parent) {
  const int n = static_cast<int>(parent.size());
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  std::vector<int> root(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) root[static_cast<std::size_t>(i)] = find(i);
  Partition out;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int& s = slot[static_cast<std::size_t>(root[static_cast<std::size_t>(i)])];
    if (s < 0) {
      s = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(s)].push_back(static_cast<Letter>(i));
  }
  return out;
}

Partition partition_of(int n, const std::function<bool(int, int)>& same) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b)
      if (same(a, b)) {
        int r = b;
        while (parent[static_cast<std::size_t>(r)] != r) r = parent[static_cast<std::size_t>(r)];
        parent[static_cast<std::size_t>(a)] = r;
        break;
      }
  return from_union_find(std::move(parent));
}

}  // namespace

Substitution::Substitution(std::vector<std::string> alphabet, IMat L, std::vector<IVec> support, std::vector<Word> rules)
    : alphabet_(std::move(alphabet)),
      L_(std::move(L)),
      support_(std::move(support)),
      rules_(std::move(rules)),
      digits_(checked_digits(L_, support_)) {
  if (alphabet_.empty()) throw std::invalid_argument("empty alphabet");
  std::vector<std::string> names = alphabet_;
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) throw std::invalid_argument("duplicate letter");
  if (rules_.size() != alphabet_.size()) throw std::invalid_argument("one rule per letter required");
  for (std::size_t a = 0; a < rules_.size(); ++a) {
    if (rules_[a].size() != support_.size())
      throw std::invalid_argument("rule for " + alphabet_[a] + " does not match the support size");
    for (Letter b : rules_[a])
      if (b >= alphabet_.size()) throw std::invalid_argument("rule for " + alphabet_[a] + " uses an unknown letter");
  }
}

int Substitution::support_index(const IVec& f) const {
  for (std::size_t i = 0; i < support_.size(); ++i)
    if (support_[i] == f) return static_cast<int>(i);
  return -1;
}

std::vector<Word> iterate(const Substitution& z, int n, std::size_t cap) {
  if (n < 1) throw std::invalid_argument("iteration level must be positive");
  const double cells = std::pow(static_cast<double>(z.support().size()), n) * z.size();
  if (cells > static_cast<double>(cap)) throw BudgetExceeded("iterate exceeds cell cap " + std::to_string(cap));
  std::vector<Word> cur = z.rules();
  const std::size_t s = z.support().size();
  for (int level = 1; level < n; ++level)
    for (auto& w : cur) {
      Word next(w.size() * s, 0);
      for (std::size_t j = 0; j < w.size(); ++j) {
        const Word& r = z.rule(w[j]);
        std::copy(r.begin(), r.end(), next.begin() + static_cast<std::ptrdiff_t>(j * s));
      }
      w = std::move(next);
    }
  return cur;
}

Substitution power(const Substitution& z, int n, std::size_t cap) {
  if (n == 1) return z;
  Substitution p(z.alphabet(), matpow(z.L(), n), iterated_support(z.L(), z.support(), n), iterate(z, n, cap));
  p.declared_aperiodic = z.declared_aperiodic;
  return p;
}

std::optional<Letter> letter_at(const Substitution& z, Letter a, int n, const IVec& p) {
  std::vector<int> ks;
  IVec cur = p;
  for (int i = 0; i < n; ++i) {
    const auto dd = z.digits().decompose(cur);
    ks.push_back(dd.digit);
    cur = dd.quotient;
  }
  if (!cur.isZero()) return std::nullopt;
  Letter x = a;
  for (auto it = ks.rbegin(); it != ks.rend(); ++it) x = z.image(x, static_cast<std::size_t>(*it));
  return x;
}

Primitivity is_primitive(const Substitution& z) {
  const int s = z.size();
  using BMat = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  BMat m = BMat::Zero(s, s);
  for (int a = 0; a < s; ++a)
    for (Letter b : z.rule(static_cast<Letter>(a))) m(a, static_cast<int>(b)) = 1;
  const int bound = s * s - 2 * s + 2;
  BMat p = m;
  for (int n = 1; n <= bound; ++n) {
    if ((p.array() > 0).all()) return {true, n};
    p = ((p * m).array() > 0).cast<int>();
  }
  return {false, 0};
}

namespace {

bool bijective_at(const Substitution& z, const std::vector<std::size_t>& positions) {
  for (std::size_t f : positions) {
    std::vector<bool> hit(static_cast<std::size_t>(z.size()), false);
    for (int a = 0; a < z.size(); ++a) hit[z.image(static_cast<Letter>(a), f)] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
  }
  return true;
}

}  // namespace

bool is_bijective(const Substitution& z) {
  std::vector<std::size_t> all(z.support().size());
  std::iota(all.begin(), all.end(), 0);
  return bijective_at(z, all);
}

bool is_bijective_on_extremities(const Substitution& z) {
  std::vector<std::size_t> pos;
  for (const auto& e : extreme_points(z.support())) pos.push_back(static_cast<std::size_t>(z.support_index(e)));
  return bijective_at(z, pos);
}

PairGraph::PairGraph(const Substitution& z) : n_(z.size()), succ_(static_cast<std::size_t>(n_ * n_)) {
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (std::size_t f = 0; f < z.support().size(); ++f)
        succ_[static_cast<std::size_t>(vertex(static_cast<Letter>(a), static_cast<Letter>(b)))].push_back(
            vertex(z.image(static_cast<Letter>(a), f), z.image(static_cast<Letter>(b), f)));
}

std::vector<bool> PairGraph::reach(int v, const std::vector<bool>& allowed) const {
  std::vector<bool> seen(static_cast<std::size_t>(vertices()), false);
  std::deque<int> q{v};
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int w : successors(u))
      if (allowed[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        q.push_back(w);
      }
  }
  return seen;
}

Reducedness is_reduced(const Substitution& z) {
  const PairGraph g(z);
  const int V = g.vertices();
  const Rational s(static_cast<Int>(z.support().size()));
  std::vector<bool> all(static_cast<std::size_t>(V), true);
  std::vector<bool> hits_delta(static_cast<std::size_t>(V), false);
  for (int v = 0; v < V; ++v) {
    if (g.diagonal(v)) {
      hits_delta[static_cast<std::size_t>(v)] = true;
      continue;
    }
    const auto r = g.reach(v, all);
    for (int w = 0; w < V; ++w)
      if (r[static_cast<std::size_t>(w)] && g.diagonal(w)) hits_delta[static_cast<std::size_t>(v)] = true;
  }
  // x(v) = probability that the uniform walk from v never reaches the diagonal.
  std::vector<Rational> x(static_cast<std::size_t>(V), Rational(0));
  std::vector<int> transient;
  std::vector<int> slot(static_cast<std::size_t>(V), -1);
  for (int v = 0; v < V; ++v) {
    if (g.diagonal(v)) continue;
    if (!hits_delta[static_cast<std::size_t>(v)]) {
      x[static_cast<std::size_t>(v)] = 1;
    } else {
      slot[static_cast<std::size_t>(v)] = static_cast<int>(transient.size());
      transient.push_back(v);
    }
  }
  if (!transient.empty()) {
    const auto T = static_cast<Eigen::Index>(transient.size());
    QMat A = QMat::Identity(T, T);
    QVec r = QVec::Constant(T, Rational(0));
    for (Eigen::Index i = 0; i < T; ++i)
      for (int w : g.successors(transient[static_cast<std::size_t>(i)])) {
        if (g.diagonal(w)) continue;
        if (slot[static_cast<std::size_t>(w)] >= 0) A(i, slot[static_cast<std::size_t>(w)]) -= Rational(1) / s;
        else r(i) += Rational(1) / s;
      }
    const QVec sol = solve(A, r);
    for (Eigen::Index i = 0; i < T; ++i) x[static_cast<std::size_t>(transient[static_cast<std::size_t>(i)])] = sol(i);
  }
  Reducedness out;
  out.eta = 1;
  for (int v = 0; v < V; ++v)
    if (!g.diagonal(v)) out.eta = std::min(out.eta, x[static_cast<std::size_t>(v)]);
  out.reduced = out.eta > Rational(0);
  out.classes = partition_of(z.size(), [&](int a, int b) {
    return x[static_cast<std::size_t>(g.vertex(static_cast<Letter>(a), static_cast<Letter>(b)))] == Rational(0);
  });
  return out;
}

Reduction reduce(const Substitution& z) {
  const auto red = is_reduced(z);
  const auto q = class_map(red.classes, z.size());
  std::vector<std::string> names;
  std::vector<Word> rules;
  for (const auto& cls : red.classes) {
    names.push_back(z.name(cls[0]));
    Word r;
    for (Letter b : z.rule(cls[0])) r.push_back(q[b]);
    for (Letter a : cls) {
      Word ra;
      for (Letter b : z.rule(a)) ra.push_back(q[b]);
      if (ra != r) throw std::logic_error("reduced substitution is not well defined");
    }
    rules.push_back(r);
  }
  Substitution s(names, z.L(), z.support(), rules);
  s.declared_aperiodic = false;
  return {s, q};
}

namespace {

// Periodic points of n ↦ quotient(n), with their minimal periods.
std::vector<std::pair<IVec, int>> digit_cycles(const Substitution& z) {
  const int d = z.dim();
  const IMat idl = IMat::Identity(d, d) - z.L();
  const double radius = max_norm(z.support()) * op_norm(inverse(idl));
  std::unordered_map<IVec, int, VecHash, VecEq> state;
  std::vector<std::pair<IVec, int>> out;
  for (const auto& start : ball(d, radius)) {
    if (state.count(start)) continue;
    std::vector<IVec> path;
    IVec cur = start;
    while (!state.count(cur)) {
      state[cur] = 1;
      path.push_back(cur);
      cur = z.digits().decompose(cur).quotient;
    }
    if (state[cur] == 1) {
      auto it = std::find(path.begin(), path.end(), cur);
      const int len = static_cast<int>(path.end() - it);
      for (; it != path.end(); ++it) out.emplace_back(*it, len);
    }
    for (const auto& p : path) state[p] = 2;
  }
  return out;
}

}  // namespace

VecSet k_set(const Substitution& z) {
  VecSet k;
  for (const auto& [p, len] : digit_cycles(z)) k.insert(p);
  return k;
}

std::optional<int> pc4_power(const Substitution& z, int limit) {
  Int l = 1;
  for (const auto& [p, len] : digit_cycles(z)) l = std::lcm(l, static_cast<Int>(len));
  if (l > limit) return std::nullopt;
  return static_cast<int>(l);
}

VecSet cover_set(const Substitution& z, const std::vector<IVec>& A, const std::vector<IVec>& F) {
  const auto FA = minkowski_sum(F, A);
  VecSet c;
  std::vector<IVec> work;
  auto add = [&](const IVec& n) {
    IVec q = z.digits().decompose(n).quotient;
    if (c.insert(q).second) work.push_back(q);
  };
  for (const auto& n : FA) add(n);
  while (!work.empty()) {
    const IVec b = work.back();
    work.pop_back();
    for (const auto& t : FA) add(b + t);
  }
  return c;
}

double cover_norm_bound(const Substitution& z, const std::vector<IVec>& A, const std::vector<IVec>& F) {
  const double li = inv_op_norm(z.L());
  if (li >= 1) return std::numeric_limits<double>::infinity();
  std::vector<IVec> B;
  for (const auto& n : minkowski_sum(F, A)) B.push_back(z.digits().decompose(n).quotient);
  return max_norm(B) + li * (max_norm(A) + max_norm(F) + max_norm(z.support())) / (1 - li);
}

VecSet k_bar(const Substitution& z) {
  const auto k = k_set(z);
  const auto c = cover_set(z, {IVec::Zero(z.dim())}, minkowski_sum(z.support(), z.support()));
  VecSet out;
  for (const auto& a : k)
    for (const auto& b : c) out.insert(a + b);
  return out;
}

Substitution product_substitution(const std::vector<Substitution>& factors) {
  if (factors.empty()) throw std::invalid_argument("product of no factors");
  for (const auto& f : factors)
    if (f.dim() != 1) throw std::invalid_argument("product factors must be one-dimensional");
  if (factors.size() == 1) return factors[0];
  const int d = static_cast<int>(factors.size());
  bool short_names = true;
  for (const auto& f : factors)
    for (const auto& a : f.alphabet()) short_names = short_names && a.size() == 1;

  // Mixed radix with the last factor varying fastest.
  std::vector<std::vector<int>> letters{{}};
  for (const auto& f : factors) {
    std::vector<std::vector<int>> next;
    for (const auto& pre : letters)
      for (int a = 0; a < f.size(); ++a) {
        auto v = pre;
        v.push_back(a);
        next.push_back(v);
      }
    letters = std::move(next);
  }
  std::vector<std::vector<int>> positions{{}};
  for (const auto& f : factors) {
    std::vector<std::vector<int>> next;
    for (const auto& pre : positions)
      for (std::size_t i = 0; i < f.support().size(); ++i) {
        auto v = pre;
        v.push_back(static_cast<int>(i));
        next.push_back(v);
      }
    positions = std::move(next);
  }
  auto index_of = [&](const std::vector<int>& tuple) {
    std::size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * static_cast<std::size_t>(factors[static_cast<std::size_t>(i)].size()) + static_cast<std::size_t>(tuple[static_cast<std::size_t>(i)]);
    return static_cast<Letter>(idx);
  };

  std::vector<std::string> names;
  for (const auto& t : letters) {
    std::string s;
    for (int i = 0; i < d; ++i) {
      if (i && !short_names) s += ",";
      s += factors[static_cast<std::size_t>(i)].name(static_cast<Letter>(t[static_cast<std::size_t>(i)]));
    }
    names.push_back(s);
  }
  IMat L = IMat::Zero(d, d);
  for (int i = 0; i < d; ++i) L(i, i) = factors[static_cast<std::size_t>(i)].L()(0, 0);
  std::vector<IVec> support;
  for (const auto& p : positions) {
    IVec v(d);
    for (int i = 0; i < d; ++i) v(i) = factors[static_cast<std::size_t>(i)].support()[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])](0);
    support.push_back(v);
  }
  std::vector<Word> rules;
  for (const auto& t : letters) {
    Word r;
    for (const auto& p : positions) {
      std::vector<int> img(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i)
        img[static_cast<std::size_t>(i)] = static_cast<int>(factors[static_cast<std::size_t>(i)].image(
            static_cast<Letter>(t[static_cast<std::size_t>(i)]), static_cast<std::size_t>(p[static_cast<std::size_t>(i)])));
      r.push_back(index_of(img));
    }
    rules.push_back(r);
  }
  Substitution s(names, L, support, rules);
  s.declared_aperiodic = std::any_of(factors.begin(), factors.end(), [](const Substitution& f) { return f.declared_aperiodic; });
  return s;
}

PeriodicPairs periodic_pairs(const Substitution& z) {
  const PairGraph g(z);
  PeriodicPairs out;
  for (int v = 0; v < g.vertices(); ++v) {
    if (g.diagonal(v)) continue;
    // Shortest return time to v by breadth-first search.
    std::vector<int> dist(static_cast<std::size_t>(g.vertices()), -1);
    std::deque<int> q{v};
    dist[static_cast<std::size_t>(v)] = 0;
    int cycle = 0;
    while (!q.empty() && !cycle) {
      const int u = q.front();
      q.pop_front();
      for (int w : g.successors(u)) {
        if (w == v) {
          cycle = dist[static_cast<std::size_t>(u)] + 1;
          break;
        }
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push_back(w);
        }
      }
    }
    if (cycle) {
      out.pairs.push_back(g.pair(v));
      out.period = std::lcm(out.period, static_cast<Int>(cycle));
    }
  }
  return out;
}

std::vector<std::pair<Letter, Letter>> asymptotic_disjoint_pairs(const Substitution& z) {
  const PairGraph g(z);
  const int V = g.vertices();
  std::vector<bool> off(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) off[static_cast<std::size_t>(v)] = !g.diagonal(v);
  std::vector<bool> on_cycle(static_cast<std::size_t>(V), false);
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) {
    if (!off[static_cast<std::size_t>(v)]) continue;
    reach[static_cast<std::size_t>(v)] = g.reach(v, off);
    on_cycle[static_cast<std::size_t>(v)] = reach[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)];
  }
  std::vector<std::pair<Letter, Letter>> out;
  for (int v = 0; v < V; ++v) {
    if (!off[static_cast<std::size_t>(v)]) continue;
    bool ok = on_cycle[static_cast<std::size_t>(v)];
    for (int w = 0; w < V && !ok; ++w) ok = reach[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] && on_cycle[static_cast<std::size_t>(w)];
    if (ok) out.push_back(g.pair(v));
  }
  return out;
}

Partition indistinguishable(const Substitution& z, const std::vector<int>& tau) {
  const PairGraph g(z);
  const int V = g.vertices();
  std::vector<bool> all(static_cast<std::size_t>(V), true);
  auto bad = [&](int v) {
    const auto [a, b] = g.pair(v);
    return tau[a] != tau[b];
  };
  std::vector<bool> good(static_cast<std::size_t>(V), true);
  for (int v = 0; v < V; ++v) {
    if (bad(v)) {
      good[static_cast<std::size_t>(v)] = false;
      continue;
    }
    const auto r = g.reach(v, all);
    for (int w = 0; w < V; ++w)
      if (r[static_cast<std::size_t>(w)] && bad(w)) good[static_cast<std::size_t>(v)] = false;
  }
  return partition_of(z.size(), [&](int a, int b) {
    return static_cast<bool>(good[static_cast<std::size_t>(g.vertex(static_cast<Letter>(a), static_cast<Letter>(b)))]);
  });
}

}  // namespace cshape
