#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cshape/rational.hpp"

namespace cshape {

using Int = long long;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using IVec = Vec<Int>;
using IMat = Mat<Int>;
using QVec = Vec<Rational>;
using QMat = Mat<Rational>;

// Letters of a pattern laid out along a fixed ordered support.
using Word = std::u32string;

struct LexLess {
  template <typename A, typename B>
  bool operator()(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) const {
    const auto n = std::min(a.size(), b.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      if (a(i) < b(i)) return true;
      if (b(i) < a(i)) return false;
    }
    return a.size() < b.size();
  }
};

struct VecHash {
  std::size_t operator()(const IVec& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      h ^= std::hash<Int>{}(v(i)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

struct VecEq {
  bool operator()(const IVec& a, const IVec& b) const {
    return a.size() == b.size() && a == b;
  }
};

using VecSet = std::set<IVec, LexLess>;

/// A configured size or search cap was hit.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

IVec ivec(std::initializer_list<Int> xs);
IMat imat(std::initializer_list<std::initializer_list<Int>> rows);
QVec qvec(std::initializer_list<Rational> xs);

template <typename Scalar>
Vec<Scalar> zeros(int d) {
  return Vec<Scalar>::Constant(d, Scalar(0));
}

inline QVec to_q(const IVec& v) { return v.cast<Rational>(); }
inline QMat to_q(const IMat& m) { return m.cast<Rational>(); }

template <typename Scalar>
Scalar dot(const Vec<Scalar>& a, const Vec<Scalar>& b) {
  Scalar s(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

double euclid(const IVec& v);
double max_norm(const std::vector<IVec>& pts);

std::string to_string(const IVec& v);
std::string to_string(const QVec& v);

std::vector<IVec> sorted_unique(std::vector<IVec> pts);
std::vector<IVec> minkowski_sum(const std::vector<IVec>& a, const std::vector<IVec>& b);
std::vector<IVec> map_points(const IMat& m, const std::vector<IVec>& pts);
std::vector<IVec> translate(const std::vector<IVec>& pts, const IVec& t);
std::vector<IVec> ball(int d, double radius);
std::vector<IVec> box(const IVec& lo, const IVec& hi);

Int gcd_of(const IVec& v);
IVec primitive(const IVec& v);
// Clears denominators and divides by the gcd; sign preserved.
IVec primitive(const QVec& v);

}  // namespace cshape
