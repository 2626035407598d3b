#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "cshape/substitution.hpp"

namespace cshape {

/// Finite pattern with lexicographically sorted support.
struct Pattern {
  std::vector<IVec> support;
  Word letters;

  std::optional<Letter> at(const IVec& p) const;
  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.support == b.support && a.letters == b.letters;
  }
};

Pattern make_pattern(std::vector<IVec> support, Word letters);
/// ζⁿ(p) on Lⁿ(supp p) + F_n.
Pattern substitute(const Substitution& z, const Pattern& p, int n);
/// Translates t with p_{t+s} = w_s for all s in supp w.
std::vector<IVec> occurrences(const Pattern& host, const Pattern& w);
/// Center of a ball of the given radius inside supp(host) meeting no occurrence of w.
std::optional<QVec> occurrence_free_ball(const Pattern& host, const Pattern& w, const Rational& radius);

/// Language words on a shape, words aligned with the sorted shape.
struct Language {
  std::vector<IVec> shape;
  std::vector<Word> words;  // sorted, unique

  bool contains(const Word& w) const;
  std::size_t size() const { return words.size(); }
  /// Projection onto a subshape (given in any order, returned sorted).
  Language restrict(const std::vector<IVec>& sub) const;
};

/// Large legal patch around the origin of a ζ^period-fixed legal point.
class Patch {
 public:
  std::optional<Letter> at(const IVec& p) const;
  std::size_t size() const { return cells_.size(); }
  const std::unordered_map<IVec, Letter, VecHash, VecEq>& cells() const { return cells_; }
  /// Largest r with the box [-r, r]^d fully inside the patch.
  Int inner_radius() const { return inner_; }

 private:
  friend class LanguageGenerator;
  std::unordered_map<IVec, Letter, VecHash, VecEq> cells_;
  Int inner_ = 0;
};

/// Language generation through the closure of C-shaped windows.
class LanguageGenerator {
 public:
  explicit LanguageGenerator(const Substitution& z, std::size_t cap = default_cell_cap);

  const Substitution& substitution() const { return z_; }
  const std::vector<IVec>& cover() const { return cover_; }
  const Language& cover_language() const { return cover_lang_; }
  /// Letters on K of a legal point x with ζ^{period}(x) = x.
  const std::vector<IVec>& seed_support() const { return k_; }
  const Word& seed() const { return seed_; }
  int period() const { return period_; }

  Language language(const std::vector<IVec>& shape) const;
  /// ζ^m(x) on L^m(K) + F_m for a multiple m of the period with [-radius, radius]^d inside.
  Patch patch(Int radius) const;
  /// Letter of x at p by digit walk (p ∈ L^N K + F_N for N = 0, period, ...).
  Letter letter(const IVec& p) const;

 private:
  Substitution z_;
  std::size_t cap_;
  std::vector<IVec> k_;
  Word seed_;
  int period_ = 1;
  std::vector<IVec> cover_;
  Language cover_lang_;
};

Language language(const Substitution& z, const std::vector<IVec>& shape, std::size_t cap = default_cell_cap);

struct DifferenceSet {
  std::vector<IVec> W;  // sorted
  Word first, second;   // witnesses on sorted K
};

/// All nonempty disagreement sets of pairs in L_K, ordered by size then lexicographically.
std::vector<DifferenceSet> difference_sets(const Substitution& z);
std::vector<DifferenceSet> difference_sets(const Language& lk);

std::optional<int> recognizability_radius(const Substitution& z, int r_max, std::size_t cap = default_cell_cap);

struct PeriodSearch {
  std::vector<IVec> periods;  // first nonzero coordinate positive
  Int patch_radius = 0;
};

PeriodSearch period_search(const Substitution& z, int N, std::size_t cap = default_cell_cap);

struct Repetitivity {
  std::vector<std::pair<int, double>> values;  // (R, M(R))
  double exponent = 0;
};

Repetitivity repetitivity(const Substitution& z, const std::vector<int>& radii, std::size_t cap = default_cell_cap);

}  // namespace cshape
