#include "hardylab/inequality.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

namespace hardylab {

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 15) throw std::invalid_argument("too many decimal digits");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::string joined(text.substr(0, dot));
    joined += frac;
    if (joined.empty() || joined == "-" || joined == "+") {
      throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    if (joined.front() == '+') joined.erase(0, 1);
    return Rational(parse_int(joined), scale);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  return Rational(parse_int(text));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

InequalityCoeffs::InequalityCoeffs(int k, int d, Rational x, Rational y, Rational z)
    : sc_(k, d), x_(x), y_(y), z_(z), m_(std::min({x, y, z})) {
  if (x_ <= Rational(0) || y_ <= Rational(0) || z_ <= Rational(0)) {
    throw std::invalid_argument("inequality coefficients x, y, z must be positive");
  }
}

}  // namespace hardylab
