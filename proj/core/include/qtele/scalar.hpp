#pragma once

#include <compare>
#include <concepts>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qtele {

enum class ScalarMode { exact, floating };

class ScalarError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Element of Q(sqrt 2), value = rational_part + radical_part * sqrt(2).
///
/// Exact mode keeps both parts as GMP rationals and is closed under the
/// field operations. Floating mode carries a single double; any binary
/// operation with a floating operand produces a floating result.
class Scalar {
 public:
  Scalar() = default;
  template <std::integral T>
  Scalar(T value) : rational_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)

  static Scalar rational(mpq_class value);
  static Scalar fraction(long numerator, long denominator);
  static Scalar quadratic(mpq_class rational_part, mpq_class radical_part);
  static Scalar floating(double value);

  /// q -> q * sqrt(2). A floating operand stays floating.
  static Scalar sqrt2_inject(const Scalar& q);

  /// 1/sqrt(2) in the requested mode; the 50:50 splitting amplitude.
  static Scalar inv_sqrt2(ScalarMode mode = ScalarMode::exact);

  /// Parses "3/4", "-2", "7" (exact) or any decimal/scientific literal
  /// containing '.', 'e' or 'E' (floating).
  static Scalar parse(std::string_view text);

  ScalarMode mode() const { return mode_; }
  bool is_exact() const { return mode_ == ScalarMode::exact; }
  bool is_zero() const;
  bool is_rational() const;

  /// Exact parts; throws in floating mode.
  const mpq_class& rational_part() const;
  const mpq_class& radical_part() const;

  double to_double() const;
  Scalar to_floating() const { return floating(to_double()); }

  /// -1, 0 or +1. Exact for exact scalars.
  int sign() const;

  Scalar inverse() const;
  /// Integer power, n >= 0.
  Scalar pow(unsigned n) const;

  /// Square root when it exists in Q(sqrt 2) for a rational argument
  /// (q or q/2 a rational square); floating mode uses std::sqrt.
  Scalar sqrt() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }

  /// Exact comparison when both are exact, otherwise by value.
  friend bool operator==(const Scalar& lhs, const Scalar& rhs);
  friend std::strong_ordering operator<=>(const Scalar& lhs, const Scalar& rhs);

  /// "p/q", "p/q*sqrt2", "p/q + r/s*sqrt2", or a %.17g float.
  std::string str() const;
  /// Decimal rendering with the given significant digits.
  std::string decimal(int significant_digits = 15) const;

 private:
  void promote_with(const Scalar& other);

  ScalarMode mode_ = ScalarMode::exact;
  mpq_class rational_{0};
  mpq_class radical_{0};
  double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// n! as an exact integer scalar.
Scalar factorial(unsigned n);

/// Absolute closeness for floating checks.
bool approx_equal(const Scalar& a, const Scalar& b, double tolerance);

}  // namespace qtele
