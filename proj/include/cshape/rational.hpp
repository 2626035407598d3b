#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <concepts>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

namespace cshape {

// Exact rational scalar usable inside Eigen matrices.
class Rational {
 public:
  using Big = boost::multiprecision::cpp_rational;
  using BigInt = boost::multiprecision::cpp_int;

  Rational() = default;
  template <std::integral I>
  Rational(I v) : v_(static_cast<long long>(v)) {}
  Rational(long long num, long long den);
  explicit Rational(Big v) : v_(std::move(v)) {}

  const Big& big() const { return v_; }
  BigInt numerator() const;
  BigInt denominator() const;
  bool is_integer() const;
  long long to_int() const;  // throws unless integral and in range
  long long floor() const;
  double to_double() const;
  std::string str() const;  // "p/q" or "p"

  Rational operator-() const { return Rational(Big(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ == b.v_) return std::strong_ordering::equal;
    return std::strong_ordering::greater;
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  Big v_;
};

Rational abs(const Rational& r);
Rational sqrt(const Rational& r);  // exact squares only

}  // namespace cshape

namespace Eigen {
template <>
struct NumTraits<cshape::Rational> : GenericNumTraits<cshape::Rational> {
  using Real = cshape::Rational;
  using NonInteger = cshape::Rational;
  using Nested = cshape::Rational;
  using Literal = cshape::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static Real highest() { return Real(1000000000000LL); }
  static Real lowest() { return Real(-1000000000000LL); }
  static int digits10() { return 0; }
};
}  // namespace Eigen
