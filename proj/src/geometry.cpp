#include "cshape/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "cshape/lattice.hpp"

namespace cshape {

namespace {

Rational cross(const QVec& o, const QVec& a, const QVec& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

int affine_rank(const std::vector<QVec>& pts, const std::vector<int>& idx) {
  if (idx.size() <= 1) return 0;
  const auto d = pts[static_cast<std::size_t>(idx[0])].size();
  QMat m(d, static_cast<Eigen::Index>(idx.size() - 1));
  for (std::size_t i = 1; i < idx.size(); ++i)
    m.col(static_cast<Eigen::Index>(i - 1)) = pts[static_cast<std::size_t>(idx[i])] - pts[static_cast<std::size_t>(idx[0])];
  return rank(m);
}

// Counter-clockwise hull without collinear points; input sorted and unique.
std::vector<int> monotone_chain(const std::vector<QVec>& p) {
  const int n = static_cast<int>(p.size());
  std::vector<int> h(static_cast<std::size_t>(2 * n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(p[h[k - 2]], p[h[k - 1]], p[i]) <= Rational(0)) --k;
    h[k++] = i;
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && cross(p[h[k - 2]], p[h[k - 1]], p[i]) <= Rational(0)) --k;
    h[k++] = i;
  }
  h.resize(static_cast<std::size_t>(k - 1));
  return h;
}

struct RawFacet {
  IVec normal;
  Rational offset;
  std::vector<int> points;
};

// Facets of a full-dimensional point set by exhaustive hyperplane search.
std::vector<RawFacet> brute_facets(const std::vector<QVec>& p) {
  const int n = static_cast<int>(p.size());
  const int d = static_cast<int>(p[0].size());
  std::vector<RawFacet> out;
  std::set<IVec, LexLess> seen;
  std::vector<int> sel(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) sel[static_cast<std::size_t>(i)] = i;
  while (true) {
    QMat m(d - 1, d);
    for (int i = 1; i < d; ++i)
      m.row(i - 1) = (p[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])] - p[static_cast<std::size_t>(sel[0])]).transpose();
    const auto ker = kernel(m);
    if (ker.size() == 1) {
      IVec nrm = primitive(ker[0]);
      const QVec qn = to_q(nrm);
      const Rational off = dot(qn, p[static_cast<std::size_t>(sel[0])]);
      bool pos = false, neg = false;
      std::vector<int> on;
      for (int j = 0; j < n; ++j) {
        const Rational s = dot(qn, p[static_cast<std::size_t>(j)]) - off;
        if (s > Rational(0)) pos = true;
        else if (s < Rational(0)) neg = true;
        else on.push_back(j);
      }
      if (!(pos && neg)) {
        Rational o = off;
        if (neg) {
          nrm = -nrm;
          o = -o;
        }
        if (seen.insert(nrm).second) out.push_back({nrm, o, on});
      }
    }
    int i = d - 1;
    while (i >= 0 && sel[static_cast<std::size_t>(i)] == n - d + i) --i;
    if (i < 0) break;
    ++sel[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j) sel[static_cast<std::size_t>(j)] = sel[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// All faces as intersections of facet vertex sets, plus the polytope itself.
void build_faces(Polytope& P, const std::vector<std::vector<int>>& facet_sets) {
  std::set<std::vector<int>> all;
  std::vector<int> whole(P.vertices.size());
  for (std::size_t i = 0; i < whole.size(); ++i) whole[i] = static_cast<int>(i);
  all.insert(whole);
  std::vector<std::vector<int>> frontier(facet_sets.begin(), facet_sets.end());
  for (auto& f : frontier) all.insert(f);
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& a : frontier)
      for (const auto& b : facet_sets) {
        std::vector<int> c;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
        if (!c.empty() && all.insert(c).second) next.push_back(c);
      }
    frontier = std::move(next);
  }
  std::vector<Face> faces;
  for (const auto& s : all) faces.push_back({affine_rank(P.vertices, s), s});
  std::stable_sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertices < b.vertices;
  });
  P.faces = std::move(faces);
}

Polytope full_hull(const std::vector<QVec>& pts) {
  Polytope P;
  const int d = static_cast<int>(pts[0].size());
  P.ambient_dim = d;
  P.dim = d;
  if (d == 1) {
    P.vertices = {pts.front(), pts.back()};
    P.facets = {{ivec({1}), pts.front()(0), -1}, {ivec({-1}), -pts.back()(0), -1}};
    build_faces(P, {{0}, {1}});
    P.facets[0].face = P.face_index({0});
    P.facets[1].face = P.face_index({1});
    return P;
  }
  if (d == 2) {
    const auto h = monotone_chain(pts);
    for (int i : h) P.vertices.push_back(pts[static_cast<std::size_t>(i)]);
    const int n = static_cast<int>(h.size());
    std::vector<std::vector<int>> sets;
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      const QVec e = P.vertices[static_cast<std::size_t>(j)] - P.vertices[static_cast<std::size_t>(i)];
      QVec nq(2);
      nq << -e(1), e(0);
      const IVec nrm = primitive(nq);
      P.facets.push_back({nrm, dot(to_q(nrm), P.vertices[static_cast<std::size_t>(i)]), -1});
      sets.push_back({std::min(i, j), std::max(i, j)});
    }
    build_faces(P, sets);
    for (int i = 0; i < n; ++i) P.facets[static_cast<std::size_t>(i)].face = P.face_index(sets[static_cast<std::size_t>(i)]);
    return P;
  }
  auto raw = brute_facets(pts);
  std::vector<std::vector<int>> sets;
  for (const auto& f : raw) sets.push_back(f.points);
  // Vertices are the zero-dimensional intersections.
  Polytope tmp;
  tmp.vertices = pts;
  build_faces(tmp, sets);
  std::vector<int> verts;
  for (const auto& f : tmp.faces)
    if (f.dim == 0) verts.push_back(f.vertices[0]);
  std::sort(verts.begin(), verts.end());
  std::map<int, int> remap;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    remap[verts[i]] = static_cast<int>(i);
    P.vertices.push_back(pts[static_cast<std::size_t>(verts[i])]);
  }
  std::vector<std::vector<int>> vsets;
  for (const auto& f : raw) {
    std::vector<int> s;
    for (int i : f.points)
      if (remap.count(i)) s.push_back(remap[i]);
    vsets.push_back(s);
  }
  build_faces(P, vsets);
  for (std::size_t i = 0; i < raw.size(); ++i)
    P.facets.push_back({raw[i].normal, raw[i].offset, P.face_index(vsets[i])});
  return P;
}

}  // namespace

std::vector<int> Polytope::minimizing_vertices(const QVec& v) const {
  std::vector<int> out;
  Rational best;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Rational s = dot(v, vertices[i]);
    if (out.empty() || s < best) {
      best = s;
      out = {static_cast<int>(i)};
    } else if (s == best) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

int Polytope::face_index(const std::vector<int>& verts) const {
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].vertices == verts) return static_cast<int>(i);
  return -1;
}

bool Polytope::contains(const QVec& x) const {
  if (!full_dimensional()) throw std::invalid_argument("containment requires a full-dimensional polytope");
  for (const auto& f : facets)
    if (dot(to_q(f.normal), x) < f.offset) return false;
  return true;
}

bool Polytope::on_boundary(const QVec& x) const {
  if (!contains(x)) return false;
  for (const auto& f : facets)
    if (dot(to_q(f.normal), x) == f.offset) return true;
  return false;
}

int Polytope::smallest_face(const QVec& x) const {
  if (!contains(x)) return -1;
  std::vector<int> cur(vertices.size());
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = static_cast<int>(i);
  for (const auto& f : facets) {
    if (dot(to_q(f.normal), x) != f.offset) continue;
    const auto& fv = faces[static_cast<std::size_t>(f.face)].vertices;
    std::vector<int> c;
    std::set_intersection(cur.begin(), cur.end(), fv.begin(), fv.end(), std::back_inserter(c));
    cur = std::move(c);
  }
  return face_index(cur);
}

Polytope convex_hull(const std::vector<QVec>& input) {
  if (input.empty()) throw std::invalid_argument("convex hull of empty set");
  std::vector<QVec> pts = input;
  std::sort(pts.begin(), pts.end(), LexLess{});
  pts.erase(std::unique(pts.begin(), pts.end(), [](const QVec& a, const QVec& b) { return a == b; }), pts.end());
  const int d = static_cast<int>(pts[0].size());
  std::vector<int> all(pts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  const int r = affine_rank(pts, all);
  if (r == d) return full_hull(pts);

  Polytope P;
  P.ambient_dim = d;
  P.dim = r;
  if (r == 0) {
    P.vertices = {pts[0]};
    P.faces = {{0, {0}}};
    return P;
  }
  // Project onto r coordinates that stay independent on the affine hull.
  QMat diff(static_cast<Eigen::Index>(pts.size() - 1), d);
  for (std::size_t i = 1; i < pts.size(); ++i) diff.row(static_cast<Eigen::Index>(i - 1)) = (pts[i] - pts[0]).transpose();
  std::vector<int> coords;
  for (int c = 0; c < d && static_cast<int>(coords.size()) < r; ++c) {
    QMat sub(diff.rows(), static_cast<Eigen::Index>(coords.size() + 1));
    for (std::size_t k = 0; k < coords.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = diff.col(coords[k]);
    sub.col(static_cast<Eigen::Index>(coords.size())) = diff.col(c);
    if (rank(sub) == static_cast<int>(coords.size() + 1)) coords.push_back(c);
  }
  std::vector<QVec> proj;
  for (const auto& p : pts) {
    QVec q(r);
    for (int k = 0; k < r; ++k) q(k) = p(coords[static_cast<std::size_t>(k)]);
    proj.push_back(q);
  }
  const Polytope low = convex_hull(proj);
  for (const auto& v : low.vertices) {
    for (std::size_t i = 0; i < proj.size(); ++i)
      if (proj[i] == v) {
        P.vertices.push_back(pts[i]);
        break;
      }
  }
  P.faces = low.faces;
  return P;
}

Polytope convex_hull(const std::vector<IVec>& points) {
  std::vector<QVec> q;
  q.reserve(points.size());
  for (const auto& p : points) q.push_back(to_q(p));
  return convex_hull(q);
}

std::vector<IVec> extreme_points(const std::vector<IVec>& points) {
  const Polytope P = convex_hull(points);
  std::vector<IVec> out;
  for (const auto& v : P.vertices) {
    IVec x(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) x(i) = v(i).to_int();
    out.push_back(x);
  }
  return sorted_unique(std::move(out));
}

bool Cone::contains(const QVec& v) const {
  for (const auto& a : nonneg)
    if (dot(to_q(a), v) < Rational(0)) return false;
  for (const auto& a : zero)
    if (dot(to_q(a), v) != Rational(0)) return false;
  return true;
}

IVec Cone::interior_sample() const {
  if (generators.empty()) return IVec();
  IVec s = IVec::Zero(generators[0].size());
  for (const auto& g : generators) s += g;
  return s;
}

Cone opposite_normal_cone(const Polytope& P, const Face& F) {
  Cone c;
  c.dim = P.ambient_dim - F.dim;
  const QVec& f0 = P.vertices[static_cast<std::size_t>(F.vertices[0])];
  for (std::size_t i = 0; i < P.vertices.size(); ++i) {
    const bool in_face = std::binary_search(F.vertices.begin(), F.vertices.end(), static_cast<int>(i));
    const QVec diff = P.vertices[i] - f0;
    if (diff.isZero()) continue;
    (in_face ? c.zero : c.nonneg).push_back(primitive(diff));
  }
  for (const auto& f : P.facets) {
    const auto& fv = P.faces[static_cast<std::size_t>(f.face)].vertices;
    if (std::includes(fv.begin(), fv.end(), F.vertices.begin(), F.vertices.end())) c.generators.push_back(f.normal);
  }
  std::sort(c.generators.begin(), c.generators.end(), LexLess{});
  return c;
}

std::vector<Cone> normal_fan(const Polytope& P) {
  if (!P.full_dimensional()) throw std::invalid_argument("normal fan requires a full-dimensional polytope");
  std::vector<Cone> out;
  for (const auto& f : P.faces)
    if (f.dim < P.dim) out.push_back(opposite_normal_cone(P, f));
  return out;
}

std::vector<IVec> iterated_extreme_points(const IMat& L, const std::vector<IVec>& F1, int n) {
  const auto e1 = extreme_points(F1);
  std::vector<IVec> cur{IVec::Zero(L.rows())};
  for (int i = 0; i < n; ++i) cur = extreme_points(minkowski_sum(e1, map_points(L, cur)));
  return cur;
}

PolytopeTest polytope_test(const IMat& L, const std::vector<IVec>& F1, int n_max) {
  if (n_max < 2) throw std::invalid_argument("polytope test needs n_max >= 2");
  PolytopeTest r;
  const bool scalar = L.isDiagonal() && (L.diagonal().array() == L(0, 0)).all();
  const auto e1 = extreme_points(F1);
  std::vector<IVec> cur = e1;
  r.counts.push_back(cur.size());
  if (scalar) {
    r.status = PolytopeTest::Status::yes;
    r.level = 1;
    return r;
  }
  for (int n = 2; n <= n_max; ++n) {
    cur = extreme_points(minkowski_sum(e1, map_points(L, cur)));
    r.counts.push_back(cur.size());
    if (r.counts[r.counts.size() - 1] == r.counts[r.counts.size() - 2]) {
      r.status = PolytopeTest::Status::yes;
      r.level = n - 1;
      return r;
    }
  }
  return r;
}

Polytope digit_tile_hull(const IMat& L, const std::vector<IVec>& F1, int level) {
  if (level < 1) throw std::logic_error("digit tile hull needs a stabilization level");
  const int m = level + 1;
  const IMat Lm = matpow(L, m);
  const IMat A = Lm - IMat::Identity(L.rows(), L.cols());
  const QMat inv = inverse(A);
  std::vector<QVec> pts;
  for (const auto& e : iterated_extreme_points(L, F1, m)) pts.push_back(inv * to_q(e));
  return convex_hull(pts);
}

QVec TileApproximation::point(std::size_t i) const {
  return to_q(numerators[i]) / Rational(denominator);
}

TileApproximation tile_approximation(const IMat& L, const std::vector<IVec>& F1, int n, std::size_t cap) {
  double cells = std::pow(static_cast<double>(F1.size()), n);
  if (cells > static_cast<double>(cap))
    throw BudgetExceeded("tile approximation exceeds cell cap " + std::to_string(cap));
  TileApproximation t;
  t.level = n;
  const IMat Ln = matpow(L, n);
  t.denominator = det(Ln);
  t.transform = adjugate(Ln);
  if (t.denominator < 0) {
    t.denominator = -t.denominator;
    t.transform = -t.transform;
  }
  for (const auto& f : iterated_support(L, F1, n)) t.numerators.push_back(t.transform * f);
  return t;
}

namespace {

struct Frame {
  double minx, miny, scale, cell;
  int width, height, margin;

  double px(double x) const { return margin + (x - minx) * scale; }
  double py(double y) const { return height - margin - (y - miny) * scale; }
};

Frame frame_of(const TileApproximation& t, const ImageParams& p) {
  double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
  const double den = static_cast<double>(t.denominator);
  for (const auto& v : t.numerators) {
    const double x = static_cast<double>(v(0)) / den;
    const double y = v.size() > 1 ? static_cast<double>(v(1)) / den : 0.0;
    minx = std::min(minx, x); maxx = std::max(maxx, x);
    miny = std::min(miny, y); maxy = std::max(maxy, y);
  }
  const int d = t.transform.rows() > 0 ? static_cast<int>(t.transform.rows()) : 1;
  const double cell = std::pow(den, -1.0 / d);
  const double bx = maxx - minx + cell, by = maxy - miny + cell;
  const double sx = (p.width - 2.0 * p.margin) / bx, sy = (p.height - 2.0 * p.margin) / by;
  return {minx, miny, std::min(sx, sy), cell, p.width, p.height, p.margin};
}

}  // namespace

void write_pgm(const TileApproximation& t, const std::string& path, const ImageParams& p) {
  const Frame f = frame_of(t, p);
  std::vector<unsigned char> img(static_cast<std::size_t>(p.width) * static_cast<std::size_t>(p.height), 255);
  const int side = std::max(1, static_cast<int>(std::ceil(f.cell * f.scale)));
  const double den = static_cast<double>(t.denominator);
  for (const auto& v : t.numerators) {
    const int x0 = static_cast<int>(std::floor(f.px(static_cast<double>(v(0)) / den)));
    const int y0 = static_cast<int>(std::floor(f.py((v.size() > 1 ? static_cast<double>(v(1)) / den : 0.0) + f.cell)));
    for (int dy = 0; dy < side; ++dy)
      for (int dx = 0; dx < side; ++dx) {
        const int x = x0 + dx, y = y0 + dy;
        if (x >= 0 && y >= 0 && x < p.width && y < p.height)
          img[static_cast<std::size_t>(y) * static_cast<std::size_t>(p.width) + static_cast<std::size_t>(x)] = 0;
      }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P5\n" << p.width << " " << p.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data()), static_cast<std::streamsize>(img.size()));
}

void write_svg(const TileApproximation& t, const std::string& path, const ImageParams& p) {
  const Frame f = frame_of(t, p);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << p.width << "\" height=\"" << p.height
      << "\" viewBox=\"0 0 " << p.width << " " << p.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g fill=\"black\">\n";
  const double den = static_cast<double>(t.denominator);
  const double side = f.cell * f.scale;
  char buf[160];
  for (const auto& v : t.numerators) {
    const double x = f.px(static_cast<double>(v(0)) / den);
    const double y = f.py((v.size() > 1 ? static_cast<double>(v(1)) / den : 0.0) + f.cell);
    std::snprintf(buf, sizeof buf, "<rect x=\"%.4f\" y=\"%.4f\" width=\"%.4f\" height=\"%.4f\"/>\n", x, y, side, side);
    out << buf;
  }
  out << "</g>\n</svg>\n";
}

std::vector<Int> integer_roots(const std::vector<Rational>& poly) {
  std::vector<Rational> p = poly;
  std::vector<Int> roots;
  while (p.size() > 1 && p[0] == Rational(0)) {
    roots.push_back(0);
    p.erase(p.begin());
  }
  if (p.size() <= 1) return roots;
  const Int a0 = p[0].to_int();
  const Int m = a0 < 0 ? -a0 : a0;
  std::vector<Int> cand;
  for (Int k = 1; k * k <= m; ++k)
    if (m % k == 0) {
      cand.push_back(k);
      cand.push_back(m / k);
    }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (Int c : cand)
    for (Int r : {c, -c}) {
      while (p.size() > 1) {
        // Synthetic division by (z - r).
        std::vector<Rational> q(p.size() - 1);
        Rational acc(0);
        for (std::size_t i = p.size(); i-- > 1;) {
          acc = acc * Rational(r) + p[i];
          q[i - 1] = acc;
        }
        if (acc * Rational(r) + p[0] != Rational(0)) break;
        roots.push_back(r);
        p = std::move(q);
      }
    }
  std::sort(roots.begin(), roots.end());
  return roots;
}

EigenReport facet_normal_eigencheck(const IMat& L, const std::vector<IVec>& F1, int k_max) {
  const Polytope P = convex_hull(F1);
  if (!P.full_dimensional()) throw std::invalid_argument("conv(F1) is not full-dimensional; use a power");
  EigenReport r;
  const IMat Lt = L.transpose();
  for (const auto& f : P.facets) {
    FacetEigen fe{f.normal, std::nullopt};
    IVec w = f.normal;
    for (int k = 1; k <= k_max && !fe.power; ++k) {
      w = Lt * w;
      bool parallel = true;
      for (Eigen::Index i = 0; i < w.size() && parallel; ++i)
        for (Eigen::Index j = i + 1; j < w.size(); ++j)
          if (w(i) * f.normal(j) != w(j) * f.normal(i)) {
            parallel = false;
            break;
          }
      if (parallel) fe.power = k;
    }
    r.facets.push_back(fe);
  }
  r.integer_eigenvalues = integer_roots(char_poly(L));
  r.all_eigenvalues_integer = static_cast<Eigen::Index>(r.integer_eigenvalues.size()) == L.rows();
  return r;
}

}  // namespace cshape
