#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cshape/types.hpp"

namespace cshape {

struct Face {
  int dim = 0;
  std::vector<int> vertices;  // indices into Polytope::vertices, ascending
};

/// Inward facet: <normal, x> >= offset on the polytope.
struct Facet {
  IVec normal;
  Rational offset;
  int face = -1;
};

class Polytope {
 public:
  int ambient_dim = 0;
  int dim = 0;  // affine dimension
  std::vector<QVec> vertices;
  std::vector<Face> faces;  // every nonempty face, including the polytope itself
  std::vector<Facet> facets;

  bool full_dimensional() const { return dim == ambient_dim; }
  /// Vertex indices attaining min <v, .>.
  std::vector<int> minimizing_vertices(const QVec& v) const;
  /// Index into faces of the smallest face containing x, or -1 when x is outside.
  int smallest_face(const QVec& x) const;
  bool contains(const QVec& x) const;
  bool on_boundary(const QVec& x) const;
  int face_index(const std::vector<int>& verts) const;
};

Polytope convex_hull(const std::vector<QVec>& points);
Polytope convex_hull(const std::vector<IVec>& points);

/// Extreme points of a finite integer set, sorted.
std::vector<IVec> extreme_points(const std::vector<IVec>& points);

/// Closed polyhedral cone: generators plus an exact inequality description.
struct Cone {
  int dim = 0;
  std::vector<IVec> generators;
  std::vector<IVec> nonneg;  // <a, v> >= 0
  std::vector<IVec> zero;    // <a, v> == 0

  bool contains(const QVec& v) const;
  bool contains(const IVec& v) const { return contains(to_q(v)); }
  IVec interior_sample() const;
  friend bool operator==(const Cone& a, const Cone& b) { return a.generators == b.generators; }
};

/// N̂_F(P): directions whose minimum over P is attained on all of F.
Cone opposite_normal_cone(const Polytope& P, const Face& F);
/// Cones of all proper faces, ordered by face index.
std::vector<Cone> normal_fan(const Polytope& P);

/// Ext(conv(F_n)) via Ext(F_n) ⊆ Ext(F_1) + L Ext(F_{n-1}).
std::vector<IVec> iterated_extreme_points(const IMat& L, const std::vector<IVec>& F1, int n);

struct PolytopeTest {
  enum class Status { yes, unknown } status = Status::unknown;
  int level = 0;                     // stabilization level n*
  std::vector<std::size_t> counts;   // |Ext(conv F_n)| for n = 1..
};

PolytopeTest polytope_test(const IMat& L, const std::vector<IVec>& F1, int n_max);
/// (L^m - Id)^{-1} conv(F_m) with m = level + 1.
Polytope digit_tile_hull(const IMat& L, const std::vector<IVec>& F1, int level);

/// L^{-n}(F_n) stored as integer numerators over a common denominator.
struct TileApproximation {
  int level = 0;
  Int denominator = 1;
  IMat transform;  // adj(L^n), numerators = transform * F_n
  std::vector<IVec> numerators;

  std::size_t size() const { return numerators.size(); }
  QVec point(std::size_t i) const;
};

TileApproximation tile_approximation(const IMat& L, const std::vector<IVec>& F1, int n, std::size_t cap);

struct ImageParams {
  int width = 512;
  int height = 512;
  int margin = 8;
};

void write_pgm(const TileApproximation& t, const std::string& path, const ImageParams& p);
void write_svg(const TileApproximation& t, const std::string& path, const ImageParams& p);

struct FacetEigen {
  IVec normal;
  std::optional<int> power;  // least k with (L^T)^k u parallel to u
};

struct EigenReport {
  std::vector<FacetEigen> facets;
  std::vector<Int> integer_eigenvalues;  // with multiplicity
  bool all_eigenvalues_integer = false;
};

EigenReport facet_normal_eigencheck(const IMat& L, const std::vector<IVec>& F1, int k_max);

std::vector<Int> integer_roots(const std::vector<Rational>& poly);

}  // namespace cshape
