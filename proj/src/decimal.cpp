#include "xolap/decimal.hpp"

#include <algorithm>
#include <limits>

#include "xolap/error.hpp"

namespace xolap {
namespace {

constexpr __int128 pow10(int n) {
  __int128 r = 1;
  for (int i = 0; i < n; ++i) r *= 10;
  return r;
}

__int128 checked_mul(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Error(ErrorCode::ArithmeticOverflow, "decimal overflow in multiplication");
  }
  return r;
}

__int128 checked_add(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Error(ErrorCode::ArithmeticOverflow, "decimal overflow in addition");
  }
  return r;
}

// Brings both operands to the larger scale.
void align(__int128& a, int sa, __int128& b, int sb, int& scale) {
  scale = std::max(sa, sb);
  a = checked_mul(a, pow10(scale - sa));
  b = checked_mul(b, pow10(scale - sb));
}

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    ++i;
  }
  __int128 mantissa = 0;
  int scale = 0;
  bool seen_point = false;
  int digits = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    if (seen_point) {
      if (scale == kMaxScale) {
        // Excess fractional digits are accepted only if they are zeros.
        if (c != '0') return std::nullopt;
        ++digits;
        continue;
      }
      ++scale;
    }
    if (__builtin_mul_overflow(mantissa, __int128{10}, &mantissa) ||
        __builtin_add_overflow(mantissa, __int128{c - '0'}, &mantissa)) {
      return std::nullopt;
    }
    ++digits;
  }
  if (digits == 0) return std::nullopt;
  return from_parts(negative ? -mantissa : mantissa, scale);
}

Decimal Decimal::from_parts(__int128 mantissa, int scale) {
  Decimal d;
  d.mantissa_ = mantissa;
  d.scale_ = scale;
  while (d.scale_ > kMaxScale) {
    d.mantissa_ /= 10;
    --d.scale_;
  }
  d.normalize();
  return d;
}

void Decimal::normalize() noexcept {
  if (mantissa_ == 0) {
    scale_ = 0;
    return;
  }
  while (scale_ > 0 && mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    --scale_;
  }
}

std::string Decimal::str() const {
  const bool negative = mantissa_ < 0;
  unsigned __int128 magnitude =
      negative ? static_cast<unsigned __int128>(-(mantissa_ + 1)) + 1
               : static_cast<unsigned __int128>(mantissa_);
  std::string digits;
  do {
    digits.push_back(static_cast<char>('0' + static_cast<int>(magnitude % 10)));
    magnitude /= 10;
  } while (magnitude != 0);
  while (static_cast<int>(digits.size()) <= scale_) digits.push_back('0');
  std::reverse(digits.begin(), digits.end());
  if (scale_ > 0) digits.insert(digits.end() - scale_, '.');
  return negative ? "-" + digits : digits;
}

Decimal Decimal::operator-() const { return from_parts(-mantissa_, scale_); }

Decimal& Decimal::operator+=(const Decimal& rhs) {
  __int128 a = mantissa_, b = rhs.mantissa_;
  int scale = 0;
  align(a, scale_, b, rhs.scale_, scale);
  *this = from_parts(checked_add(a, b), scale);
  return *this;
}

Decimal& Decimal::operator-=(const Decimal& rhs) { return *this += -rhs; }

Decimal operator*(const Decimal& lhs, const Decimal& rhs) {
  __int128 product = checked_mul(lhs.mantissa_, rhs.mantissa_);
  int scale = lhs.scale_ + rhs.scale_;
  if (scale > Decimal::kMaxScale) {
    throw Error(ErrorCode::ArithmeticOverflow, "decimal product exceeds 18 fractional digits");
  }
  return Decimal::from_parts(product, scale);
}

Decimal Decimal::divided_by(std::int64_t divisor) const {
  if (divisor == 0) throw Error(ErrorCode::ArithmeticOverflow, "decimal division by zero");
  __int128 numerator = checked_mul(mantissa_, pow10(kMaxScale - scale_));
  __int128 den = divisor;
  if (den < 0) {
    den = -den;
    numerator = -numerator;
  }
  __int128 quotient = numerator / den;  // truncates toward zero
  __int128 remainder = numerator % den;
  __int128 twice = (remainder < 0 ? -remainder : remainder) * 2;
  if (twice > den) quotient += numerator < 0 ? -1 : 1;
  return from_parts(quotient, kMaxScale);
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  __int128 x = a.mantissa_, y = b.mantissa_;
  int scale = 0;
  align(x, a.scale_, y, b.scale_, scale);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace xolap
