#include "magneto/charge.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace magneto {

Charge::Charge(std::int64_t numerator, std::int64_t denominator) : num(numerator), den(denominator) {
  if (den <= 0) throw std::invalid_argument("charge denominator must be positive");
  if (num < 0 || 2 * num > den) {
    throw std::invalid_argument("charge q must lie in [0, 1/2], got " + std::to_string(num) + "/" +
                                std::to_string(den));
  }
  const auto g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
}

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("cannot parse integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Charge Charge::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty charge");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return {parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
  }
  if (text.find('.') == std::string_view::npos && text.find('e') == std::string_view::npos) {
    return {parse_int(text), 1};
  }
  const double q = std::stod(std::string(text));
  for (std::int64_t d = 1; d <= 1000; ++d) {
    const double n = std::round(q * static_cast<double>(d));
    if (std::abs(n / static_cast<double>(d) - q) < 1e-12) return {static_cast<std::int64_t>(n), d};
  }
  throw std::invalid_argument("charge '" + std::string(text) + "' is not a simple fraction");
}

std::string Charge::to_string() const {
  if (num == 0) return "0";
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace magneto
