#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cshape/directions.hpp"
#include "cshape/patterns.hpp"

namespace cshape {

struct HeightLattice {
  Lattice H;
  std::vector<IVec> returns;  // generators of the observed return lattice
  Int window = 0;             // box radius at which the return lattice stabilized
  bool partial = false;
};

/// Return vectors on [-w, w]^d with w doubling until two consecutive windows agree, then saturated under L.
HeightLattice height_lattice(const Substitution& z, Int window = 4, Int max_window = 64,
                             std::size_t cap = default_cell_cap);

/// ⟨Lⁿ j, x⟩ ∈ Z for all large n and every j ∈ H.
bool eigenvalue_check(const QVec& x, const IMat& L, const Lattice& H);
bool eigenvalue_check(const QVec& x, const Substitution& z);

/// Chain Lⁿ(H) of the maximal equicontinuous factor.
struct OdometerChain {
  Lattice H;
  IMat L;

  Lattice level(int n) const;
  /// Class of the translate S^p x of the reference point in Z^d / Lⁿ(H).
  IVec phase(int n, const IVec& p) const;
};

OdometerChain meq_factor(const Substitution& z);

struct OdometerFactor {
  bool holds = false;
  std::vector<std::optional<int>> witness;  // smallest m per checked n
};

/// For every n ≤ n_max some level m of `from` lies inside level n of `to`.
OdometerFactor odometer_factor_check(const OdometerChain& from, const OdometerChain& to, int n_max = 6);

/// factor * ‖F_1‖, with the factor exact whenever the norms involved are rational.
struct RadiusBound {
  Rational factor;
  Int f1_norm_sq = 0;
  Int radius = 0;  // smallest integer ≥ factor * ‖F_1‖
  bool finite = false;

  double value() const;
};

Rational norm_upper_bound(const IMat& m);
Rational inverse_norm_upper_bound(const IMat& m);
RadiusBound radius_bound(const Substitution& z);
RadiusBound homomorphism_radius_bound(const Substitution& z, const IMat& M);

/// φ(x)_n = table(x on M⁻¹n + B(0, radius)).
struct BlockMap {
  Int radius = 0;
  std::vector<IVec> support;  // B(0, radius), sorted
  std::map<Word, Letter> table;
  IMat M;
  IVec offset;
};

BlockMap letter_block_map(const Substitution& z, const std::vector<Letter>& perm);

struct HomomorphismCheck {
  bool verified = false;
  Int window = 0;
  std::optional<Pattern> counterexample;
  std::string reason;
};

/// Images of every legal source window land in L_{[-w,w]^d} and cover it.
HomomorphismCheck verify_homomorphism(const Substitution& z, const BlockMap& phi, Int window,
                                      std::size_t cap = default_cell_cap);

enum class AutomorphismMode { bijective, general };

struct AutomorphismGroup {
  AutomorphismMode mode = AutomorphismMode::bijective;
  std::vector<BlockMap> maps;                 // representatives modulo shifts
  std::vector<std::vector<Letter>> letter_perms;  // bijective mode
  std::vector<std::vector<int>> multiplication;  // Cayley table on the finite part
  bool closed = false;
  bool partial = false;
  Int radius = 0;

  std::size_t order() const { return maps.size(); }
};

AutomorphismGroup automorphisms(const Substitution& z, AutomorphismMode mode, Int r_max = 1,
                                std::size_t node_cap = 200000, std::size_t cap = default_cell_cap);

struct NormalizerLevel {
  int n = 0;
  std::optional<bool> holds;
  std::optional<int> m;
};

/// ∃ m with M L₁^m(H₁) ⊆ L₂ⁿ(H₂), by cycle detection on L₁^m H₁ modulo a multiple of Z^d.
std::vector<NormalizerLevel> normalizer_condition(const IMat& M, const IMat& L1, const Lattice& H1, const IMat& L2,
                                                  const Lattice& H2, int n_max, std::size_t state_cap = 1'000'000);

struct SymmetryCandidate {
  IMat M;
  std::vector<std::pair<int, int>> normal_map;  // normal i ↦ sign * normal j, stored as (j, sign)
  int order = 0;
  double norm_bound = 0;
};

struct SymmetrySearch {
  std::vector<IVec> normals;
  std::vector<SymmetryCandidate> candidates;
  bool distinct_mod3 = false;
  bool finite_orders = false;
};

/// Candidates M permuting the certified nondeterministic cones. Throws std::domain_error with fewer than d
/// independent normals.
SymmetrySearch symmetry_candidates(const Substitution& z, const DirectionReport& report, const Lattice& H,
                                   int n_max = 4);

}  // namespace cshape
