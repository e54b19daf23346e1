#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace xolap {

// Exact base-10 number: value = mantissa / 10^scale, 0 <= scale <= kMaxScale.
// Kept normalized (no trailing zero digits in the fraction) so that equal
// values have equal representations and a single canonical text form.
class Decimal {
 public:
  static constexpr int kMaxScale = 18;

  constexpr Decimal() = default;
  Decimal(std::int64_t integer) : mantissa_(integer) {}  // NOLINT: implicit by intent

  // Accepts [+-]digits[.digits]; no exponent, no surrounding blanks.
  static std::optional<Decimal> parse(std::string_view text);
  static Decimal from_parts(__int128 mantissa, int scale);

  std::string str() const;
  bool is_integer() const noexcept { return scale_ == 0; }
  int scale() const noexcept { return scale_; }
  __int128 mantissa() const noexcept { return mantissa_; }

  Decimal operator-() const;
  Decimal& operator+=(const Decimal& rhs);
  Decimal& operator-=(const Decimal& rhs);
  friend Decimal operator+(Decimal lhs, const Decimal& rhs) { return lhs += rhs; }
  friend Decimal operator-(Decimal lhs, const Decimal& rhs) { return lhs -= rhs; }
  friend Decimal operator*(const Decimal& lhs, const Decimal& rhs);

  // Quotient rounded to kMaxScale fractional digits, ties toward zero.
  Decimal divided_by(std::int64_t divisor) const;

  friend bool operator==(const Decimal& a, const Decimal& b) noexcept {
    return a.mantissa_ == b.mantissa_ && a.scale_ == b.scale_;
  }
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

 private:
  void normalize() noexcept;

  __int128 mantissa_ = 0;
  int scale_ = 0;
};

}  // namespace xolap
