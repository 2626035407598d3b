#include "cshape/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cshape {

IVec ivec(std::initializer_list<Int> xs) {
  IVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (Int x : xs) v(i++) = x;
  return v;
}

IMat imat(std::initializer_list<std::initializer_list<Int>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
  IMat m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (Int x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

QVec qvec(std::initializer_list<Rational> xs) {
  QVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

double euclid(const IVec& v) {
  double s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += static_cast<double>(v(i)) * static_cast<double>(v(i));
  return std::sqrt(s);
}

double max_norm(const std::vector<IVec>& pts) {
  double m = 0;
  for (const auto& p : pts) m = std::max(m, euclid(p));
  return m;
}

std::string to_string(const IVec& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v(i));
  }
  return s + ")";
}

std::string to_string(const QVec& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v(i).str();
  }
  return s + ")";
}

std::vector<IVec> sorted_unique(std::vector<IVec> pts) {
  std::sort(pts.begin(), pts.end(), LexLess{});
  pts.erase(std::unique(pts.begin(), pts.end(), VecEq{}), pts.end());
  return pts;
}

std::vector<IVec> minkowski_sum(const std::vector<IVec>& a, const std::vector<IVec>& b) {
  std::vector<IVec> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x + y);
  return sorted_unique(std::move(out));
}

std::vector<IVec> map_points(const IMat& m, const std::vector<IVec>& pts) {
  std::vector<IVec> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(m * p);
  return out;
}

std::vector<IVec> translate(const std::vector<IVec>& pts, const IVec& t) {
  std::vector<IVec> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p + t);
  return out;
}

std::vector<IVec> box(const IVec& lo, const IVec& hi) {
  std::vector<IVec> out;
  const auto d = lo.size();
  for (Eigen::Index i = 0; i < d; ++i)
    if (hi(i) < lo(i)) return out;
  IVec cur = lo;
  while (true) {
    out.push_back(cur);
    Eigen::Index i = d - 1;
    while (i >= 0) {
      if (cur(i) < hi(i)) {
        ++cur(i);
        break;
      }
      cur(i) = lo(i);
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<IVec> ball(int d, double radius) {
  const Int r = static_cast<Int>(std::floor(radius));
  std::vector<IVec> out;
  const double r2 = radius * radius + 1e-9;
  for (auto& p : box(IVec::Constant(d, -r), IVec::Constant(d, r))) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += static_cast<double>(p(i) * p(i));
    if (s <= r2) out.push_back(p);
  }
  return out;
}

Int gcd_of(const IVec& v) {
  Int g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, v(i) < 0 ? -v(i) : v(i));
  return g;
}

IVec primitive(const IVec& v) {
  const Int g = gcd_of(v);
  return g == 0 ? v : IVec(v / g);
}

IVec primitive(const QVec& v) {
  Rational::BigInt l = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Rational::BigInt den = v(i).denominator();
    l = l / boost::multiprecision::gcd(l, den) * den;
  }
  Rational::BigInt g = 0;
  std::vector<Rational::BigInt> num(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    num[static_cast<std::size_t>(i)] = v(i).numerator() * (l / v(i).denominator());
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(num[static_cast<std::size_t>(i)]));
  }
  IVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Rational::BigInt x = g == 0 ? num[static_cast<std::size_t>(i)] : num[static_cast<std::size_t>(i)] / g;
    out(i) = static_cast<Int>(x);
  }
  return out;
}

}  // namespace cshape
