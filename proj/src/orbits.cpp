#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "cshape/patterns.hpp"
#include "cshape/substitution.hpp"

namespace cshape {

namespace {

using PosMap = std::unordered_map<IVec, int, VecHash, VecEq>;

struct ShiftedDigits {
  const Substitution& z;
  IVec j;

  DigitDecomposition step(const IVec& n) const { return z.digits().decompose(IVec(n - j)); }
};

// Periodic points of m ↦ d_{m−j}, grouped into cycles in walking order.
std::vector<std::vector<IVec>> shifted_cycles(const ShiftedDigits& sd) {
  const int d = sd.z.dim();
  const IMat A = sd.z.L() - IMat::Identity(d, d);
  const double radius = (max_norm(sd.z.support()) + euclid(sd.j)) * op_norm(inverse(A)) + 1;
  PosMap state;
  std::vector<std::vector<IVec>> cycles;
  for (const auto& start : ball(d, radius)) {
    if (state.count(start)) continue;
    std::vector<IVec> path;
    IVec cur = start;
    while (!state.count(cur)) {
      state[cur] = 1;
      path.push_back(cur);
      cur = sd.step(cur).quotient;
    }
    if (state[cur] == 1) cycles.emplace_back(std::find(path.begin(), path.end(), cur), path.end());
    for (const auto& p : path) state[p] = 2;
  }
  std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) { return LexLess{}(a[0], b[0]); });
  return cycles;
}

// Letter of the seeded point at n, walking into the periodic set.
Letter seeded_letter(const ShiftedDigits& sd, const PosMap& periodic, const Word& seed, const IVec& n) {
  std::vector<int> digits;
  IVec cur = n;
  while (!periodic.count(cur)) {
    const auto dd = sd.step(cur);
    digits.push_back(dd.digit);
    cur = dd.quotient;
  }
  Letter x = seed[static_cast<std::size_t>(periodic.at(cur))];
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) x = sd.z.image(x, static_cast<std::size_t>(*it));
  return x;
}

void orbits_for_shift(const Substitution& z, const LanguageGenerator& gen, const IVec& j, std::size_t budget,
                      OrbitSearch& out) {
  const ShiftedDigits sd{z, j};
  const auto cycles = shifted_cycles(sd);
  std::vector<IVec> support;
  for (const auto& c : cycles) support.insert(support.end(), c.begin(), c.end());
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return LexLess{}(support[a], support[b]); });
  std::vector<IVec> sorted;
  for (auto i : order) sorted.push_back(support[i]);
  PosMap periodic;
  for (std::size_t i = 0; i < sorted.size(); ++i) periodic[sorted[i]] = static_cast<int>(i);

  // Consistent letter choices per cycle: x_{c_i} = ζ(x_{c_{i+1}}) at the digit of c_i − j.
  std::vector<std::vector<Word>> per_cycle;
  for (const auto& c : cycles) {
    std::vector<Word> ok;
    for (int a = 0; a < z.size(); ++a) {
      Word w(c.size(), 0);
      const std::size_t l = c.size();
      w[0] = static_cast<Letter>(a);
      Letter next = static_cast<Letter>(a);
      for (std::size_t i = l; i-- > 0;) {
        const Letter here = z.image(next, static_cast<std::size_t>(sd.step(c[i]).digit));
        if (i == 0) {
          if (here == static_cast<Letter>(a)) ok.push_back(w);
        } else {
          w[i] = here;
          next = here;
        }
      }
    }
    per_cycle.push_back(std::move(ok));
  }

  const auto& C = gen.cover();
  std::vector<std::size_t> pick(cycles.size(), 0);
  for (;;) {
    if (std::any_of(per_cycle.begin(), per_cycle.end(), [](const auto& v) { return v.empty(); })) return;
    if (out.orbits.size() >= budget) {
      out.partial = true;
      return;
    }
    Word seed(sorted.size(), 0);
    for (std::size_t c = 0; c < cycles.size(); ++c)
      for (std::size_t i = 0; i < cycles[c].size(); ++i)
        seed[static_cast<std::size_t>(periodic.at(cycles[c][i]))] = per_cycle[c][pick[c]][i];
    bool legal = true;
    for (const auto& p : sorted) {
      Word w;
      for (const auto& c : C) w.push_back(seeded_letter(sd, periodic, seed, IVec(p + c)));
      if (!gen.cover_language().contains(w)) {
        legal = false;
        break;
      }
    }
    if (legal) out.orbits.push_back({j, sorted, seed});
    std::size_t c = 0;
    while (c < pick.size() && ++pick[c] == per_cycle[c].size()) pick[c++] = 0;
    if (c == pick.size()) return;
  }
}

}  // namespace

std::vector<InvariantOrbit> fixed_points(const Substitution& z) {
  const LanguageGenerator gen(z);
  OrbitSearch out;
  orbits_for_shift(z, gen, IVec::Zero(z.dim()), static_cast<std::size_t>(-1), out);
  return out.orbits;
}

OrbitSearch invariant_orbits(const Substitution& z, std::size_t budget) {
  const LanguageGenerator gen(z);
  OrbitSearch out;
  const IMat A = z.L() - IMat::Identity(z.dim(), z.dim());
  for (const auto& j : coset_representatives(A)) {
    orbits_for_shift(z, gen, j, budget, out);
    if (out.partial) break;
  }
  return out;
}

Recoding recode(const Substitution& z, double radius) {
  const int d = z.dim();
  std::vector<IVec> A = ball(d, radius);
  for (const auto& n : minkowski_sum(z.support(), z.support())) A.push_back(z.digits().decompose(n).quotient);
  A = sorted_unique(std::move(A));
  const auto Cs = cover_set(z, A, z.support());
  std::vector<IVec> D;
  for (const auto& c : Cs)
    for (const auto& f : z.support()) D.push_back(z.L() * c + f);
  D = sorted_unique(std::move(D));
  const PosMap di = [&] {
    PosMap m;
    for (std::size_t i = 0; i < D.size(); ++i) m[D[i]] = static_cast<int>(i);
    return m;
  }();
  const Language ld = language(z, D);

  // f + D ⊆ L(D) + F_1: source (index in D, digit) of each position.
  std::vector<std::vector<std::pair<int, int>>> src;
  for (const auto& f : z.support()) {
    std::vector<std::pair<int, int>> g;
    for (const auto& x : D) {
      const auto dd = z.digits().decompose(IVec(f + x));
      auto it = di.find(dd.quotient);
      if (it == di.end()) throw std::logic_error("recoding shape is not closed under the substitution");
      g.emplace_back(it->second, dd.digit);
    }
    src.push_back(std::move(g));
  }
  Recoding r{z, D, ld.words, {}};
  std::vector<std::string> names;
  std::vector<Word> rules;
  const auto zero = static_cast<std::size_t>(di.at(IVec::Zero(d)));
  for (std::size_t i = 0; i < ld.words.size(); ++i) {
    names.push_back("p" + std::to_string(i));
    const Word& u = ld.words[i];
    r.to_letter.push_back(u[zero]);
    Word rule;
    for (const auto& g : src) {
      Word w;
      for (const auto& [q, dig] : g) w.push_back(z.image(u[static_cast<std::size_t>(q)], static_cast<std::size_t>(dig)));
      auto it = std::lower_bound(ld.words.begin(), ld.words.end(), w);
      if (it == ld.words.end() || *it != w) throw std::logic_error("recoded image is not a language pattern");
      rule.push_back(static_cast<Letter>(it - ld.words.begin()));
    }
    rules.push_back(rule);
  }
  r.recoded = Substitution(names, z.L(), z.support(), rules);
  r.recoded.declared_aperiodic = z.declared_aperiodic;
  return r;
}

}  // namespace cshape
