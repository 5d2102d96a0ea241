#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace bulinc {

/// Exact signed rational with 64-bit numerator and denominator.
///
/// Always stored in lowest terms with a positive denominator, so equality is
/// structural. Intermediate products are formed in 128 bits; a result that
/// does not fit back into 64 bits throws std::overflow_error rather than
/// silently rounding.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  /// Accepts "12", "-3", "7.25", "0.000001" and "7/2".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  /// Largest integer not greater than the value.
  std::int64_t floor() const;
  /// Smallest integer not less than the value.
  std::int64_t ceil() const;
  double to_double() const;

  /// Shortest exact decimal when the denominator is of the form 2^a 5^b,
  /// otherwise "num/den". parse(to_string(x)) == x for every x.
  std::string to_string() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& value);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Dollar amounts. Budgets, costs and payments are exact so threshold
/// payments such as 7.5 / 2 = 3.75 never pick up binary rounding error.
using Money = Rational;

}  // namespace bulinc
