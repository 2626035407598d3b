#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cshape/lattice.hpp"
#include "cshape/types.hpp"

namespace cshape {

using Letter = char32_t;

/// Constant-shape substitution: rule(a)[i] is the letter at support()[i].
class Substitution {
 public:
  Substitution(std::vector<std::string> alphabet, IMat L, std::vector<IVec> support, std::vector<Word> rules);

  int dim() const { return static_cast<int>(L_.rows()); }
  int size() const { return static_cast<int>(alphabet_.size()); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::string& name(Letter a) const { return alphabet_[a]; }
  const IMat& L() const { return L_; }
  const std::vector<IVec>& support() const { return support_; }
  const std::vector<Word>& rules() const { return rules_; }
  const Word& rule(Letter a) const { return rules_[a]; }
  Letter image(Letter a, std::size_t f) const { return rules_[a][f]; }
  const DigitSystem& digits() const { return digits_; }
  int support_index(const IVec& f) const;

  bool declared_aperiodic = false;

 private:
  std::vector<std::string> alphabet_;
  IMat L_;
  std::vector<IVec> support_;
  std::vector<Word> rules_;
  DigitSystem digits_;
};

constexpr std::size_t default_cell_cap = 10'000'000;

/// ζⁿ(a) for every letter, laid out along iterated_support(L, F_1, n).
std::vector<Word> iterate(const Substitution& z, int n, std::size_t cap = default_cell_cap);
/// ζⁿ as a substitution with expansion Lⁿ and support F_n.
Substitution power(const Substitution& z, int n, std::size_t cap = default_cell_cap);
/// Letter of ζⁿ(a) at position p, or nothing when p ∉ F_n.
std::optional<Letter> letter_at(const Substitution& z, Letter a, int n, const IVec& p);

struct Primitivity {
  bool primitive = false;
  int witness = 0;
};

Primitivity is_primitive(const Substitution& z);
bool is_bijective(const Substitution& z);
bool is_bijective_on_extremities(const Substitution& z);

/// Letter classes; each class ascending, classes ordered by first member.
using Partition = std::vector<std::vector<Letter>>;

struct Reducedness {
  bool reduced = false;
  Rational eta;
  Partition classes;
};

Reducedness is_reduced(const Substitution& z);

struct Reduction {
  Substitution reduced;
  std::vector<Letter> quotient;  // old letter -> class letter
};

Reduction reduce(const Substitution& z);

/// Periodic points of the digit map n ↦ quotient(n).
VecSet k_set(const Substitution& z);
/// Smallest m ≤ limit with K = (Id − L^m)^{-1}(F_m) ∩ Z^d.
std::optional<int> pc4_power(const Substitution& z, int limit = 12);

/// Closure of B = {d_n : n ∈ F + A} under S ↦ {d_n : n ∈ S + F + A}.
VecSet cover_set(const Substitution& z, const std::vector<IVec>& A, const std::vector<IVec>& F);
double cover_norm_bound(const Substitution& z, const std::vector<IVec>& A, const std::vector<IVec>& F);
/// K̄ = K + cover_set(ζ, {0}, F_1 + F_1).
VecSet k_bar(const Substitution& z);

Substitution product_substitution(const std::vector<Substitution>& factors);

class PairGraph {
 public:
  explicit PairGraph(const Substitution& z);

  int letters() const { return n_; }
  int vertex(Letter a, Letter b) const { return static_cast<int>(a) * n_ + static_cast<int>(b); }
  std::pair<Letter, Letter> pair(int v) const { return {static_cast<Letter>(v / n_), static_cast<Letter>(v % n_)}; }
  bool diagonal(int v) const { return v / n_ == v % n_; }
  int vertices() const { return n_ * n_; }
  const std::vector<int>& successors(int v) const { return succ_[static_cast<std::size_t>(v)]; }
  /// Vertices reachable from v in at least one step, restricted to allowed vertices.
  std::vector<bool> reach(int v, const std::vector<bool>& allowed) const;

 private:
  int n_;
  std::vector<std::vector<int>> succ_;  // one entry per support position
};

struct PeriodicPairs {
  std::vector<std::pair<Letter, Letter>> pairs;
  Int period = 1;  // n(ζ)
};

PeriodicPairs periodic_pairs(const Substitution& z);
std::vector<std::pair<Letter, Letter>> asymptotic_disjoint_pairs(const Substitution& z);
/// Classes of letters with τ(ζⁿa) = τ(ζⁿb) for all n ≥ 0.
Partition indistinguishable(const Substitution& z, const std::vector<int>& tau);

/// Orbits with ζ(x) = S^j x, seeded on the periodic points of m ↦ d_{m−j}.
struct InvariantOrbit {
  IVec shift;                // j
  std::vector<IVec> seed_support;
  Word seed;
};

struct OrbitSearch {
  std::vector<InvariantOrbit> orbits;
  bool partial = false;
};

/// ζ-fixed seeds on K (j = 0), filtered for admissibility.
std::vector<InvariantOrbit> fixed_points(const Substitution& z);
OrbitSearch invariant_orbits(const Substitution& z, std::size_t budget);

/// Conjugate substitution on D-shaped language patterns, D = L(C) + F_1.
struct Recoding {
  Substitution recoded;
  std::vector<IVec> shape;      // D, sorted
  std::vector<Word> patterns;   // letter i of the recoded alphabet
  std::vector<Letter> to_letter;  // 0-block map: pattern at position 0
};

Recoding recode(const Substitution& z, double radius);

}  // namespace cshape
