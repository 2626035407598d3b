#pragma once

#include <vector>

#include "cshape/types.hpp"

namespace cshape {

/// Exact determinant by fraction-free elimination.
Int det(const IMat& m);
/// Classical adjugate, so that m * adjugate(m) = det(m) * Id.
IMat adjugate(const IMat& m);
IMat matpow(const IMat& m, int n);
QMat inverse(const IMat& m);

/// Characteristic polynomial det(z Id - m), coefficients in ascending degree.
std::vector<Rational> char_poly(const IMat& m);

/// Every eigenvalue has modulus > 1. Throws std::invalid_argument if singular.
bool is_expansion(const IMat& L);

/// Upper bound on the operator 2-norm.
double op_norm(const IMat& m);
double op_norm(const QMat& m);
double inv_op_norm(const IMat& m);

/// Exact L^{-1} x when it is integral.
bool solve_integral(const IMat& L, const IVec& x, IVec& out);

/// Full-rank sublattice of Z^d stored as a lower-triangular column Hermite basis.
class Lattice {
 public:
  Lattice() = default;
  static Lattice integer(int d);
  static Lattice scaled(int d, Int k);
  /// Columns are generators. Throws std::invalid_argument unless they span rank d.
  static Lattice from_generators(const IMat& gens);
  static Lattice from_generators(const std::vector<IVec>& gens, int d);
  static Lattice image(const IMat& M);

  const IMat& basis() const { return h_; }
  int dim() const { return static_cast<int>(h_.rows()); }
  Int index() const;
  IVec reduce(const IVec& x) const;
  bool contains(const IVec& x) const;
  bool contains(const Lattice& other) const;
  std::vector<IVec> residues() const;

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.h_ == b.h_; }

 private:
  explicit Lattice(IMat h) : h_(std::move(h)) {}
  IMat h_;
};

Lattice join(const Lattice& a, const Lattice& b);
Lattice intersect(const Lattice& a, const Lattice& b);
/// M applied to every vector of H.
Lattice transform(const IMat& M, const Lattice& H);
/// Preimage {x : M x ∈ H} for nonsingular M.
Lattice preimage(const IMat& M, const Lattice& H);

/// (1/denominator) * numerators, kept with minimal denominator.
struct RationalLattice {
  Int denominator = 1;
  Lattice numerators;

  bool contains(const QVec& x) const;
  bool is_integral() const { return denominator == 1; }
  friend bool operator==(const RationalLattice& a, const RationalLattice& b) {
    return a.denominator == b.denominator && a.numerators == b.numerators;
  }
};

RationalLattice normalize(Int denominator, const Lattice& numerators);
RationalLattice dual(const Lattice& H);
RationalLattice dual(const RationalLattice& H);
RationalLattice join(const RationalLattice& a, const RationalLattice& b);

/// Canonical representatives of Z^d / L Z^d inside L[0,1)^d, sorted.
std::vector<IVec> coset_representatives(const IMat& L);
bool is_fundamental_domain(const std::vector<IVec>& F, const IMat& L);

struct DigitDecomposition {
  IVec quotient;
  int digit = 0;
};

/// n = L q + F[digit] lookups for a fixed fundamental domain.
class DigitSystem {
 public:
  DigitSystem(IMat L, std::vector<IVec> F);
  DigitDecomposition decompose(const IVec& n) const;
  const IMat& matrix() const { return L_; }
  const std::vector<IVec>& digits() const { return F_; }

 private:
  IMat L_;
  IMat adj_;
  Int det_;
  std::vector<IVec> F_;
  Lattice image_;
  std::vector<std::pair<IVec, int>> table_;
};

DigitDecomposition decompose(const IVec& n, const IMat& L, const std::vector<IVec>& F);

/// F_n in the layout F_n[j |F_1| + k] = L F_{n-1}[j] + F_1[k], with F_0 = {0}.
std::vector<IVec> iterated_support(const IMat& L, const std::vector<IVec>& F1, int n);

/// Exact rank over the rationals.
int rank(const QMat& m);
/// Unique solution of A x = b; throws unless A is square and nonsingular.
QVec solve(const QMat& A, const QVec& b);
/// Basis of the right kernel.
std::vector<QVec> kernel(const QMat& m);

/// Smallest H containing G with H ∩ L Z^d ⊆ L H.
Lattice saturate_height(const std::vector<IVec>& G, const IMat& L);

}  // namespace cshape
