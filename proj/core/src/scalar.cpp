#include "qtele/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <utility>

namespace qtele {

namespace {

const double kSqrt2 = std::sqrt(2.0);

int sgn(const mpq_class& q) { return ::sgn(q); }

/// Rational square root, if q is the square of a rational.
bool rational_sqrt(const mpq_class& q, mpq_class& root) {
  if (sgn(q) < 0) return false;
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return false;
  }
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  root = mpq_class(rn, rd);
  root.canonicalize();
  return true;
}

std::string rational_str(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

}  // namespace

Scalar Scalar::rational(mpq_class value) {
  value.canonicalize();
  Scalar s;
  s.rational_ = std::move(value);
  return s;
}

Scalar Scalar::fraction(long numerator, long denominator) {
  if (denominator == 0) throw ScalarError("fraction with zero denominator");
  return rational(mpq_class(numerator, denominator));
}

Scalar Scalar::quadratic(mpq_class rational_part, mpq_class radical_part) {
  rational_part.canonicalize();
  radical_part.canonicalize();
  Scalar s;
  s.rational_ = std::move(rational_part);
  s.radical_ = std::move(radical_part);
  return s;
}

Scalar Scalar::floating(double value) {
  Scalar s;
  s.mode_ = ScalarMode::floating;
  s.value_ = value;
  return s;
}

Scalar Scalar::sqrt2_inject(const Scalar& q) {
  if (!q.is_exact()) return floating(q.value_ * kSqrt2);
  if (sgn(q.radical_) != 0) {
    // (a + b sqrt2) sqrt2 = 2b + a sqrt2
    return quadratic(2 * q.radical_, q.rational_);
  }
  return quadratic(0, q.rational_);
}

Scalar Scalar::inv_sqrt2(ScalarMode mode) {
  if (mode == ScalarMode::floating) return floating(1.0 / kSqrt2);
  return quadratic(0, mpq_class(1, 2));
}

Scalar Scalar::parse(std::string_view text) {
  std::string t(text);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
  if (t.empty()) throw ScalarError("empty numeric literal");
  if (t.find_first_of(".eE") != std::string::npos) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw ScalarError("invalid numeric literal '" + t + "'");
    }
    if (used != t.size()) throw ScalarError("invalid numeric literal '" + t + "'");
    return floating(v);
  }
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw ScalarError("invalid rational literal '" + t + "'");
  if (q.get_den() == 0) throw ScalarError("rational literal with zero denominator '" + t + "'");
  return rational(q);
}

bool Scalar::is_zero() const {
  if (!is_exact()) return value_ == 0.0;
  return sgn(rational_) == 0 && sgn(radical_) == 0;
}

bool Scalar::is_rational() const { return is_exact() && sgn(radical_) == 0; }

const mpq_class& Scalar::rational_part() const {
  if (!is_exact()) throw ScalarError("rational_part of a floating scalar");
  return rational_;
}

const mpq_class& Scalar::radical_part() const {
  if (!is_exact()) throw ScalarError("radical_part of a floating scalar");
  return radical_;
}

double Scalar::to_double() const {
  if (!is_exact()) return value_;
  return rational_.get_d() + radical_.get_d() * kSqrt2;
}

int Scalar::sign() const {
  if (!is_exact()) return (value_ > 0) - (value_ < 0);
  const int a = sgn(rational_);
  const int b = sgn(radical_);
  if (b == 0) return a;
  if (a == 0) return b;
  if (a == b) return a;
  // opposite signs: sign is that of the larger magnitude, compare a^2 with 2 b^2
  const mpq_class diff = rational_ * rational_ - 2 * radical_ * radical_;
  return a * sgn(diff);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ScalarError("inverse of zero");
  if (!is_exact()) return floating(1.0 / value_);
  // (a + b sqrt2)^-1 = (a - b sqrt2) / (a^2 - 2 b^2); the norm is nonzero since sqrt2 is irrational
  const mpq_class norm = rational_ * rational_ - 2 * radical_ * radical_;
  return quadratic(rational_ / norm, -radical_ / norm);
}

Scalar Scalar::pow(unsigned n) const {
  Scalar result = is_exact() ? Scalar(1) : floating(1.0);
  Scalar base = *this;
  while (n > 0) {
    if (n & 1u) result *= base;
    n >>= 1u;
    if (n > 0) base *= base;
  }
  return result;
}

Scalar Scalar::sqrt() const {
  if (!is_exact()) {
    if (value_ < 0) throw ScalarError("sqrt of a negative value");
    return floating(std::sqrt(value_));
  }
  if (!is_rational()) throw ScalarError("sqrt of an irrational element is not supported");
  if (sgn(rational_) < 0) throw ScalarError("sqrt of a negative value");
  mpq_class root;
  if (rational_sqrt(rational_, root)) return rational(root);
  // sqrt(q) = sqrt(q/2) * sqrt(2)
  if (rational_sqrt(rational_ / 2, root)) return quadratic(0, root);
  throw ScalarError("sqrt(" + rational_str(rational_) + ") is not in Q(sqrt 2)");
}

Scalar Scalar::operator-() const {
  if (!is_exact()) return floating(-value_);
  return quadratic(-rational_, -radical_);
}

void Scalar::promote_with(const Scalar& other) {
  if (is_exact() && !other.is_exact()) {
    value_ = to_double();
    mode_ = ScalarMode::floating;
    rational_ = 0;
    radical_ = 0;
  }
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  promote_with(rhs);
  if (!is_exact()) {
    value_ += rhs.to_double();
  } else {
    rational_ += rhs.rational_;
    radical_ += rhs.radical_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  promote_with(rhs);
  if (!is_exact()) {
    value_ -= rhs.to_double();
  } else {
    rational_ -= rhs.rational_;
    radical_ -= rhs.radical_;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  promote_with(rhs);
  if (!is_exact()) {
    value_ *= rhs.to_double();
    return *this;
  }
  if (sgn(radical_) == 0 && sgn(rhs.radical_) == 0) {
    rational_ *= rhs.rational_;
    return *this;
  }
  // (a + b r)(c + d r) = (ac + 2bd) + (ad + bc) r
  mpq_class a = rational_ * rhs.rational_ + 2 * radical_ * rhs.radical_;
  mpq_class b = rational_ * rhs.radical_ + radical_ * rhs.rational_;
  rational_ = std::move(a);
  radical_ = std::move(b);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) { return *this *= rhs.inverse(); }

bool operator==(const Scalar& lhs, const Scalar& rhs) {
  if (lhs.is_exact() && rhs.is_exact()) {
    return lhs.rational_ == rhs.rational_ && lhs.radical_ == rhs.radical_;
  }
  return lhs.to_double() == rhs.to_double();
}

std::strong_ordering operator<=>(const Scalar& lhs, const Scalar& rhs) {
  if (lhs.is_exact() && rhs.is_exact()) {
    const int s = (lhs - rhs).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  const double a = lhs.to_double();
  const double b = rhs.to_double();
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Scalar::str() const {
  if (!is_exact()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
  }
  const bool has_rat = sgn(rational_) != 0;
  const bool has_rad = sgn(radical_) != 0;
  if (!has_rad) return rational_str(rational_);
  std::string rad = rational_str(abs(radical_)) + "*sqrt2";
  if (!has_rat) return (sgn(radical_) < 0 ? "-" : "") + rad;
  return rational_str(rational_) + (sgn(radical_) < 0 ? " - " : " + ") + rad;
}

std::string Scalar::decimal(int significant_digits) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, to_double());
  return buf;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Scalar factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Scalar::rational(mpq_class(f));
}

bool approx_equal(const Scalar& a, const Scalar& b, double tolerance) {
  return std::fabs(a.to_double() - b.to_double()) <= tolerance;
}

}  // namespace qtele
