#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace magneto {

/// Electric charge parameter q kept as an exact fraction num/den in [0, 1/2].
///
/// Exactness matters in two places: the degenerate charges 0, 1/4 and 1/2
/// must produce phases with exactly zero real or imaginary part, and cache
/// files key on the fraction rather than a rounded double.
struct Charge {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Charge() = default;
  Charge(std::int64_t numerator, std::int64_t denominator);

  static Charge reciprocal(std::int64_t m) { return {1, m}; }

  /// Accepts "0", "1/3", "0.25" (decimals are converted when they are an
  /// exact reciprocal or a simple fraction with denominator <= 1000).
  static Charge parse(std::string_view text);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }
  /// q in {0, 1/2}: every phase is +-1 and the pipeline is real-valued.
  bool is_real_degenerate() const { return num == 0 || 2 * num == den; }

  std::string to_string() const;

  friend bool operator==(const Charge& a, const Charge& b) { return a.num == b.num && a.den == b.den; }
  friend std::strong_ordering operator<=>(const Charge& a, const Charge& b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

}  // namespace magneto
