#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace percept {

/// Exact fraction num/den with den > 0, always stored in lowest terms.
///
/// Perception means and slider endpoints are compared through this type so
/// that a mean of 4.5 sits exactly on a 4.5 slider handle; conversions to
/// double happen only at output boundaries.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Parses a plain decimal literal ("4", "4.5", "-0.25"). Exponents are not
  /// accepted. Throws std::invalid_argument on malformed input.
  static Rational parse_decimal(std::string_view text);

  /// Converts a double through its shortest round-trip decimal form, so a
  /// JSON value of 5.1 becomes exactly 51/10.
  static Rational from_double(double value);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Decimal rendering with `places` fractional digits, rounded half away
  /// from zero ("4.50" for 9/2 at 2 places).
  std::string to_fixed(int places) const;

  /// Value rounded half away from zero to `places` decimals, as a double.
  double rounded(int places) const;

  /// Largest multiple of 1/steps_per_unit that is <= *this.
  Rational floor_to(std::int64_t steps_per_unit) const;
  /// Smallest multiple of 1/steps_per_unit that is >= *this.
  Rational ceil_to(std::int64_t steps_per_unit) const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::string to_string(const Rational& r);

}  // namespace percept
