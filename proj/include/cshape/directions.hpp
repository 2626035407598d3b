#pragma once

#include <optional>
#include <vector>

#include "cshape/geometry.hpp"
#include "cshape/patterns.hpp"

namespace cshape {

/// Precomputed K, K̄ and difference sets shared by the direction checks.
struct DirectionContext {
  explicit DirectionContext(const Substitution& z);

  Substitution z;
  std::vector<IVec> K;     // sorted
  std::vector<IVec> Kbar;  // sorted
  std::vector<DifferenceSet> differences;

  bool in_K(const IVec& x) const;
  /// Final quotient after n digit steps.
  IVec ancestor(const IVec& p, int n) const;
};

/// f + K̄ ⊆ Lⁿ(K) + F_n.
bool h1_check(const DirectionContext& ctx, const IVec& f, int n);
/// Points of f + K̄ strictly on the −v side of f end in K∖W.
bool h2_check(const DirectionContext& ctx, const IVec& f, int n, const std::vector<IVec>& W, const IVec& v);

struct Certificate {
  std::vector<IVec> W;
  IVec k;
  int n = 0;
  IVec f;
  std::vector<IVec> face;  // vertices of the smallest face of conv(Lⁿ(W) + F_n) containing f
  Cone cone;               // N̂_F(conv(Lⁿ(W) + F_n))
};

enum class ConeStatus { nondeterministic, deterministic, unknown };

struct ConeReport {
  Cone cone;
  ConeStatus status = ConeStatus::unknown;
  std::optional<Certificate> certificate;
  std::optional<int> radius;
};

struct DirectionReport {
  Polytope hull;  // polytope whose normal fan is reported
  bool stable = false;
  std::vector<ConeReport> cones;
  int max_level = 0;
  int max_radius = 0;

  std::size_t count(ConeStatus s) const;
};

/// The fan of the digit-tile hull when the polytope test stabilizes, else of conv(F_1).
std::pair<Polytope, bool> stable_hull(const Substitution& z, int n_max);

/// Certificates for the cones of `fan`; unmatched entries stay empty.
std::vector<std::optional<Certificate>> certify_nondeterministic(const DirectionContext& ctx, const std::vector<Cone>& fan,
                                                                 int n_max);
std::optional<int> certify_deterministic(const LanguageGenerator& gen, const Cone& cone, int r_max);
DirectionReport direction_report(const Substitution& z, int n_max, int r_max);

struct PairCheck {
  bool covered = false;
  bool agree = false;
  bool disagree = false;
  int m = 0;
  bool ok() const { return covered && agree && disagree; }
};

/// Rebuilds the two points behind a certificate and compares them on B(c, R).
PairCheck verify_certificate(const DirectionContext& ctx, const Certificate& cert, const IVec& v, int R, int m_max = 12);

}  // namespace cshape
