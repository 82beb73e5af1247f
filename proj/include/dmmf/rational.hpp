#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dmmf {

using int128 = __int128;

/// Non-negative rational number with 64-bit numerator and denominator,
/// always stored in lowest terms. Used wherever the mechanism compares
/// claims so that ties and invariant checks are exact.
class Ratio {
public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den);

  /// Parses "3", "0.25", "1/3" or "2.5e-1". Decimal literals are taken
  /// exactly (0.1 is 1/10, not the nearest double).
  static Ratio parse(std::string_view text);

  /// Best rational approximation with denominator <= max_den
  /// (continued fractions).
  static Ratio from_double(double x, std::int64_t max_den = 1'000'000);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Shortest text that parses back to the same value.
  std::string str() const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend bool operator<(const Ratio& a, const Ratio& b) {
    return int128{a.num_} * b.den_ < int128{b.num_} * a.den_;
  }
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Sign of a/b - c/d for a, c >= 0 and b, d > 0, by continued-fraction
/// expansion so no product can overflow.
int compare_fractions(int128 a, int128 b, int128 c, int128 d);

} // namespace dmmf
