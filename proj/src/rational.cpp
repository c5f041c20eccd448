#include "percept/rational.hpp"

#include <charconv>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <system_error>

namespace percept {
namespace {

__extension__ typedef __int128 Wide;

Wide gcd_wide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make_reduced(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr Wide lo = std::numeric_limits<std::int64_t>::min();
  constexpr Wide hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw std::overflow_error("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

// floor(a / b) for b > 0.
Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Rational Rational::parse_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty decimal");
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  Wide num = 0;
  Wide den = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("malformed decimal: " + std::string(text));
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("malformed decimal: " + std::string(text));
    seen_digit = true;
    num = num * 10 + (c - '0');
    if (seen_point) den *= 10;
    if (num > Wide(std::numeric_limits<std::int64_t>::max()) ||
        den > Wide(std::numeric_limits<std::int64_t>::max())) {
      throw std::invalid_argument("decimal out of range: " + std::string(text));
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed decimal: " + std::string(text));
  return make_reduced(negative ? -num : num, den);
}

Rational Rational::from_double(double value) {
  if (!(value == value) || value == std::numeric_limits<double>::infinity() ||
      value == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("non-finite value");
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc()) throw std::invalid_argument("unrepresentable value");
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(end - buf)));
}

std::string Rational::to_fixed(int places) const {
  Wide scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  Wide scaled = Wide(num_) * scale;
  Wide mag = scaled < 0 ? -scaled : scaled;
  // Half away from zero.
  Wide q = (2 * mag + den_) / (2 * Wide(den_));
  std::string digits;
  if (q == 0) digits = "0";
  while (q > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(q % 10)));
    q /= 10;
  }
  if (places > 0) {
    while (static_cast<int>(digits.size()) <= places) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - places, '.');
  }
  bool is_zero = digits.find_first_not_of("0.") == std::string::npos;
  if (num_ < 0 && !is_zero) digits.insert(digits.begin(), '-');
  return digits;
}

double Rational::rounded(int places) const {
  return std::strtod(to_fixed(places).c_str(), nullptr);
}

Rational Rational::floor_to(std::int64_t steps_per_unit) const {
  Wide steps = floor_div(Wide(num_) * steps_per_unit, den_);
  return make_reduced(steps, steps_per_unit);
}

Rational Rational::ceil_to(std::int64_t steps_per_unit) const {
  Wide steps = -floor_div(-Wide(num_) * steps_per_unit, den_);
  return make_reduced(steps, steps_per_unit);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make_reduced(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("division by zero rational");
  return make_reduced(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide lhs = Wide(a.num_) * b.den_;
  Wide rhs = Wide(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string to_string(const Rational& r) {
  if (r.den() == 1) return std::to_string(r.num());
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

}  // namespace percept
