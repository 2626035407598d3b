#include "cshape/rational.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cshape {

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  v_ = Big(num) / Big(den);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.v_ == 0) throw std::domain_error("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational::BigInt Rational::numerator() const { return boost::multiprecision::numerator(v_); }
Rational::BigInt Rational::denominator() const { return boost::multiprecision::denominator(v_); }

bool Rational::is_integer() const { return denominator() == 1; }

long long Rational::to_int() const {
  if (!is_integer()) throw std::domain_error("rational is not an integer: " + str());
  BigInt n = numerator();
  if (n > std::numeric_limits<long long>::max() || n < std::numeric_limits<long long>::min())
    throw std::overflow_error("integer out of range: " + str());
  return static_cast<long long>(n);
}

long long Rational::floor() const {
  BigInt n = numerator(), d = denominator();
  BigInt q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return static_cast<long long>(q);
}

double Rational::to_double() const { return static_cast<double>(v_); }

std::string Rational::str() const {
  if (is_integer()) return numerator().str();
  return numerator().str() + "/" + denominator().str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

Rational sqrt(const Rational& r) {
  Rational::BigInt n = r.numerator(), d = r.denominator();
  Rational::BigInt sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) throw std::domain_error("sqrt of non-square rational");
  return Rational(Rational::Big(sn) / Rational::Big(sd));
}

}  // namespace cshape
