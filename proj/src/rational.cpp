#include "bulinc/rational.hpp"

#include <charconv>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace bulinc {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 abs_wide(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

u128 gcd_wide(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin = std::numeric_limits<std::int64_t>::min();

// Floor division for a positive divisor.
i128 floor_div(i128 num, i128 den) {
  i128 q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec == std::errc::result_out_of_range) {
    throw std::overflow_error("rational literal out of range: '" + std::string(whole) + "'");
  }
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  }
  return out;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  u128 g = gcd_wide(abs_wide(num), u128(den));
  if (g > 1) {
    num /= i128(g);
    den /= i128(g);
  }
  if (num > kMax || num < kMin || den > kMax) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  std::string_view whole = text;
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) throw std::invalid_argument("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash), whole), parse_int(text.substr(slash + 1), whole));
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto dot = text.find('.');
  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  if (frac_part.size() > 18) throw std::invalid_argument("too many fractional digits: '" + std::string(whole) + "'");
  for (char c : int_part) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  }
  for (char c : frac_part) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  }

  i128 ipart = int_part.empty() ? 0 : parse_int(int_part, whole);
  i128 scale = 1;
  i128 fpart = 0;
  for (char c : frac_part) {
    scale *= 10;
    fpart = fpart * 10 + (c - '0');
  }
  i128 num = ipart * scale + fpart;
  return from_wide(negative ? -num : num, scale);
}

std::int64_t Rational::floor() const { return static_cast<std::int64_t>(floor_div(num_, den_)); }

std::int64_t Rational::ceil() const { return static_cast<std::int64_t>(-floor_div(-i128(num_), den_)); }

double Rational::to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

std::string Rational::to_string() const {
  // Terminating decimal iff den = 2^a 5^b; digits needed = max(a, b).
  std::int64_t d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  int digits = std::max(twos, fives);
  // Beyond 19 digits the scaled magnitude could leave 128 bits.
  if (d != 1 || digits > 19) return std::to_string(num_) + "/" + std::to_string(den_);

  u128 mag = abs_wide(num_);
  if (digits == 0) return (num_ < 0 ? "-" : "") + std::to_string(static_cast<unsigned long long>(mag));

  u128 scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  u128 scaled = mag * (scale / u128(den_));
  u128 ip = scaled / scale;
  u128 fp = scaled % scale;

  std::string frac(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    frac[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(fp % 10));
    fp /= 10;
  }
  // ip fits in 64 bits because |num| does.
  return (num_ < 0 ? "-" : "") + std::to_string(static_cast<unsigned long long>(ip)) + "." + frac;
}

Rational Rational::operator-() const { return from_wide(-i128(num_), den_); }

Rational& Rational::operator+=(const Rational& rhs) {
  if (den_ == rhs.den_) {
    *this = from_wide(i128(num_) + rhs.num_, den_);
  } else {
    *this = from_wide(i128(num_) * rhs.den_ + i128(rhs.num_) * den_, i128(den_) * rhs.den_);
  }
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  *this = from_wide(i128(num_) * rhs.num_, i128(den_) * rhs.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_ == 0) throw std::domain_error("division by zero");
  *this = from_wide(i128(num_) * rhs.den_, i128(den_) * rhs.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
  if (lhs.den_ == rhs.den_) return lhs.num_ <=> rhs.num_;
  i128 a = i128(lhs.num_) * rhs.den_;
  i128 b = i128(rhs.num_) * lhs.den_;
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.to_string(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace bulinc
