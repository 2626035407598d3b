#include "cshape/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace cshape {

namespace {

using BigInt = Rational::BigInt;

Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int narrow(const BigInt& x) {
  if (x > BigInt(std::numeric_limits<Int>::max()) || x < BigInt(std::numeric_limits<Int>::min()))
    throw std::overflow_error("integer overflow in lattice arithmetic");
  return static_cast<Int>(x);
}

// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
void ext_gcd(Int a, Int b, Int& g, Int& s, Int& t) {
  Int old_r = a, r = b, old_s = 1, s0 = 0, old_t = 0, t0 = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r; old_r = r; r = tmp;
    tmp = old_s - q * s0; old_s = s0; s0 = tmp;
    tmp = old_t - q * t0; old_t = t0; t0 = tmp;
  }
  if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
  g = old_r; s = old_s; t = old_t;
}

// Incremental lower-triangular Hermite basis; columns may be missing until full rank.
struct HermiteBuilder {
  explicit HermiteBuilder(int d) : d(d), cols(static_cast<std::size_t>(d)), present(static_cast<std::size_t>(d), false) {}

  void add(IVec v) {
    for (int i = 0; i < d; ++i) {
      if (v(i) == 0) continue;
      auto& h = cols[static_cast<std::size_t>(i)];
      if (!present[static_cast<std::size_t>(i)]) {
        if (v(i) < 0) v = -v;
        h = v;
        present[static_cast<std::size_t>(i)] = true;
        return;
      }
      Int g, s, t;
      ext_gcd(h(i), v(i), g, s, t);
      const Int a = h(i) / g, b = v(i) / g;
      IVec nh(d), nv(d);
      for (int k = 0; k < d; ++k) {
        nh(k) = narrow(BigInt(s) * h(k) + BigInt(t) * v(k));
        nv(k) = narrow(BigInt(a) * v(k) - BigInt(b) * h(k));
      }
      h = nh;
      v = nv;
      reduce_tail(i);
    }
  }

  // Keeps entries below the diagonal bounded once later pivots exist.
  void reduce_tail(int from) {
    for (int j = from; j < d; ++j) {
      if (!present[static_cast<std::size_t>(j)]) continue;
      auto& hj = cols[static_cast<std::size_t>(j)];
      for (int i = j + 1; i < d; ++i) {
        if (!present[static_cast<std::size_t>(i)]) continue;
        const auto& hi = cols[static_cast<std::size_t>(i)];
        const Int q = floor_div(hj(i), hi(i));
        if (q != 0) hj -= q * hi;
      }
    }
  }

  bool full() const {
    return std::all_of(present.begin(), present.end(), [](bool b) { return b; });
  }

  IMat matrix() {
    for (int j = d - 1; j >= 0; --j) reduce_tail(j);
    IMat h = IMat::Zero(d, d);
    for (int j = 0; j < d; ++j) h.col(j) = cols[static_cast<std::size_t>(j)];
    return h;
  }

  int d;
  std::vector<IVec> cols;
  std::vector<bool> present;
};

}  // namespace

Int det(const IMat& m) {
  const auto n = m.rows();
  if (n == 0) return 1;
  Mat<BigInt> a = m.cast<BigInt>();
  BigInt prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.row(k).swap(a.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return narrow(a(n - 1, n - 1)) * sign;
}

IMat adjugate(const IMat& m) {
  const auto n = m.rows();
  IMat adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      IMat minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      adj(i, j) = ((i + j) % 2 ? -1 : 1) * det(minor);
    }
  return adj;
}

IMat matpow(const IMat& m, int n) {
  IMat r = IMat::Identity(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) r = m * r;
  return r;
}

QMat inverse(const IMat& m) {
  const Int dt = det(m);
  if (dt == 0) throw std::invalid_argument("singular matrix");
  return to_q(adjugate(m)) / Rational(dt);
}

std::vector<Rational> char_poly(const IMat& m) {
  const auto n = m.rows();
  const QMat a = to_q(m);
  std::vector<Rational> c(static_cast<std::size_t>(n + 1), Rational(0));
  c[static_cast<std::size_t>(n)] = 1;
  QMat mk = QMat::Zero(n, n);
  const QMat id = QMat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(n - k + 1)] * id;
    const QMat amk = a * mk;
    c[static_cast<std::size_t>(n - k)] = -amk.trace() / Rational(static_cast<Int>(k));
  }
  return c;
}

bool is_expansion(const IMat& L) {
  if (L.rows() != L.cols() || L.rows() == 0) throw std::invalid_argument("expansion must be square");
  if (det(L) == 0) throw std::invalid_argument("singular matrix");
  const auto p = char_poly(L);
  // Roots of the reversed polynomial are the inverse eigenvalues.
  std::vector<Rational> q(p.rbegin(), p.rend());
  while (q.size() > 1) {
    const std::size_t n = q.size() - 1;
    if (!(abs(q[0]) < abs(q[n]))) return false;
    std::vector<Rational> next(n);
    for (std::size_t k = 1; k <= n; ++k) next[k - 1] = q[n] * q[k] - q[0] * q[n - k];
    q = std::move(next);
  }
  return true;
}

double op_norm(const QMat& m) {
  Eigen::MatrixXd a(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a(i, j) = m(i, j).to_double();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())) * (1.0 + 1e-9);
}

double op_norm(const IMat& m) { return op_norm(to_q(m)); }

double inv_op_norm(const IMat& m) { return op_norm(inverse(m)); }

bool solve_integral(const IMat& L, const IVec& x, IVec& out) {
  const Int dt = det(L);
  const IVec y = adjugate(L) * x;
  out.resize(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) % dt != 0) return false;
    out(i) = y(i) / dt;
  }
  return true;
}

Lattice Lattice::integer(int d) { return Lattice(IMat::Identity(d, d)); }

Lattice Lattice::scaled(int d, Int k) {
  return Lattice(IMat::Identity(d, d) * (k < 0 ? -k : k));
}

Lattice Lattice::from_generators(const IMat& gens) {
  const int d = static_cast<int>(gens.rows());
  HermiteBuilder b(d);
  for (Eigen::Index j = 0; j < gens.cols(); ++j) b.add(gens.col(j));
  if (!b.full()) throw std::invalid_argument("generators do not span a full-rank lattice");
  return Lattice(b.matrix());
}

Lattice Lattice::from_generators(const std::vector<IVec>& gens, int d) {
  IMat g(d, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = gens[j];
  return from_generators(g);
}

Lattice Lattice::image(const IMat& M) { return from_generators(M); }

Int Lattice::index() const { return h_.diagonal().prod(); }

IVec Lattice::reduce(const IVec& x) const {
  IVec r = x;
  for (int i = 0; i < dim(); ++i) {
    const Int q = floor_div(r(i), h_(i, i));
    if (q != 0) r -= q * h_.col(i);
  }
  return r;
}

bool Lattice::contains(const IVec& x) const { return reduce(x).isZero(); }

bool Lattice::contains(const Lattice& other) const {
  for (int j = 0; j < other.dim(); ++j)
    if (!contains(IVec(other.h_.col(j)))) return false;
  return true;
}

std::vector<IVec> Lattice::residues() const {
  const IVec hi = IVec(h_.diagonal()) - IVec::Ones(dim());
  return box(IVec::Zero(dim()), hi);
}

Lattice join(const Lattice& a, const Lattice& b) {
  IMat g(a.dim(), 2 * a.dim());
  g << a.basis(), b.basis();
  return Lattice::from_generators(g);
}

Lattice intersect(const Lattice& a, const Lattice& b) {
  const auto r = dual(join(dual(a), dual(b)));
  if (!r.is_integral()) throw std::logic_error("intersection of integer lattices not integral");
  return r.numerators;
}

Lattice transform(const IMat& M, const Lattice& H) {
  return Lattice::from_generators(IMat(M * H.basis()));
}

Lattice preimage(const IMat& M, const Lattice& H) {
  // M x ∈ H  iff  x ∈ M^{-1} H ∩ Z^d.
  const Int dt = det(M);
  const Lattice scaled = Lattice::from_generators(IMat(adjugate(M) * H.basis()));
  const RationalLattice r = normalize(dt < 0 ? -dt : dt, scaled);
  const auto both = dual(join(dual(r), dual(Lattice::integer(H.dim()))));
  if (!both.is_integral()) throw std::logic_error("preimage not integral");
  return both.numerators;
}

bool RationalLattice::contains(const QVec& x) const {
  IVec n(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Rational y = x(i) * Rational(denominator);
    if (!y.is_integer()) return false;
    n(i) = y.to_int();
  }
  return numerators.contains(n);
}

RationalLattice normalize(Int denominator, const Lattice& numerators) {
  Int g = denominator < 0 ? -denominator : denominator;
  const IMat& h = numerators.basis();
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j) g = std::gcd(g, h(i, j) < 0 ? -h(i, j) : h(i, j));
  const Int den = (denominator < 0 ? -denominator : denominator) / g;
  return {den, Lattice::from_generators(IMat(h / g))};
}

RationalLattice dual(const Lattice& H) {
  const Int dt = det(H.basis());
  IMat adjT = adjugate(H.basis()).transpose();
  if (dt < 0) adjT = -adjT;
  return normalize(dt < 0 ? -dt : dt, Lattice::from_generators(adjT));
}

RationalLattice dual(const RationalLattice& H) {
  // dual((1/D) N) = D * dual(N).
  const RationalLattice n = dual(H.numerators);
  return normalize(n.denominator, Lattice::from_generators(IMat(n.numerators.basis() * H.denominator)));
}

RationalLattice join(const RationalLattice& a, const RationalLattice& b) {
  const Int l = std::lcm(a.denominator, b.denominator);
  IMat g(a.numerators.dim(), 2 * a.numerators.dim());
  g << a.numerators.basis() * (l / a.denominator), b.numerators.basis() * (l / b.denominator);
  return normalize(l, Lattice::from_generators(g));
}

std::vector<IVec> coset_representatives(const IMat& L) {
  if (det(L) == 0) throw std::invalid_argument("singular matrix");
  const Lattice image = Lattice::image(L);
  const IMat adj = adjugate(L);
  const Int dt = det(L);
  std::vector<IVec> out;
  for (const IVec& x : image.residues()) {
    IVec y = adj * x;
    IVec fl(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) fl(i) = floor_div(y(i), dt);
    out.push_back(x - L * fl);
  }
  return sorted_unique(std::move(out));
}

bool is_fundamental_domain(const std::vector<IVec>& F, const IMat& L) {
  if (F.empty()) throw std::invalid_argument("empty digit set");
  const Int dt = det(L);
  if (static_cast<Int>(F.size()) != (dt < 0 ? -dt : dt)) return false;
  const Lattice image = Lattice::image(L);
  std::vector<IVec> res;
  bool has_zero = false;
  for (const auto& f : F) {
    res.push_back(image.reduce(f));
    has_zero = has_zero || f.isZero();
  }
  return has_zero && sorted_unique(res).size() == F.size();
}

DigitSystem::DigitSystem(IMat L, std::vector<IVec> F)
    : L_(std::move(L)), adj_(adjugate(L_)), det_(det(L_)), F_(std::move(F)), image_(Lattice::image(L_)) {
  for (std::size_t i = 0; i < F_.size(); ++i) table_.emplace_back(image_.reduce(F_[i]), static_cast<int>(i));
  std::sort(table_.begin(), table_.end(), [](const auto& a, const auto& b) { return LexLess{}(a.first, b.first); });
  for (std::size_t i = 1; i < table_.size(); ++i)
    if (table_[i].first == table_[i - 1].first) throw std::invalid_argument("digits not distinct modulo L");
  if (static_cast<Int>(F_.size()) != (det_ < 0 ? -det_ : det_))
    throw std::invalid_argument("digit count differs from |det L|");
}

DigitDecomposition DigitSystem::decompose(const IVec& n) const {
  const IVec r = image_.reduce(n);
  auto it = std::lower_bound(table_.begin(), table_.end(), r,
                             [](const auto& e, const IVec& key) { return LexLess{}(e.first, key); });
  const int digit = it->second;
  const IVec y = adj_ * (n - F_[static_cast<std::size_t>(digit)]);
  return {IVec(y / det_), digit};
}

DigitDecomposition decompose(const IVec& n, const IMat& L, const std::vector<IVec>& F) {
  return DigitSystem(L, F).decompose(n);
}

std::vector<IVec> iterated_support(const IMat& L, const std::vector<IVec>& F1, int n) {
  std::vector<IVec> cur{IVec::Zero(L.rows())};
  for (int level = 0; level < n; ++level) {
    std::vector<IVec> next;
    next.reserve(cur.size() * F1.size());
    for (const auto& j : cur) {
      const IVec lj = L * j;
      for (const auto& k : F1) next.push_back(lj + k);
    }
    cur = std::move(next);
  }
  return cur;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<Eigen::Index> rref(QMat& a) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index p = row;
    while (p < a.rows() && a(p, col) == Rational(0)) ++p;
    if (p == a.rows()) continue;
    if (p != row) a.row(p).swap(a.row(row));
    const Rational inv = Rational(1) / a(row, col);
    a.row(row) *= inv;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == Rational(0)) continue;
      const Rational f = a(r, col);
      a.row(r) -= f * a.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank(const QMat& m) {
  QMat a = m;
  return static_cast<int>(rref(a).size());
}

QVec solve(const QMat& A, const QVec& b) {
  if (A.rows() != A.cols()) throw std::invalid_argument("solve needs a square system");
  QMat aug(A.rows(), A.cols() + 1);
  aug << A, b;
  const auto pivots = rref(aug);
  if (static_cast<Eigen::Index>(pivots.size()) != A.rows() || (!pivots.empty() && pivots.back() == A.cols()))
    throw std::invalid_argument("singular system");
  return aug.col(A.cols());
}

std::vector<QVec> kernel(const QMat& m) {
  QMat a = m;
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<QVec> out;
  for (Eigen::Index free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    QVec v = QVec::Constant(m.cols(), Rational(0));
    v(free) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v(pivots[r]) = -a(static_cast<Eigen::Index>(r), free);
    out.push_back(v);
  }
  return out;
}

Lattice saturate_height(const std::vector<IVec>& G, const IMat& L) {
  const int d = static_cast<int>(L.rows());
  Lattice H = Lattice::from_generators(G, d);
  const Lattice image = Lattice::image(L);
  bool changed = true;
  while (changed) {
    changed = false;
    const Lattice I = intersect(H, image);
    for (int j = 0; j < d; ++j) {
      IVec q;
      solve_integral(L, IVec(I.basis().col(j)), q);
      if (!H.contains(q)) {
        IMat g(d, d + 1);
        g << H.basis(), q;
        H = Lattice::from_generators(g);
        changed = true;
      }
    }
  }
  return H;
}

}  // namespace cshape
