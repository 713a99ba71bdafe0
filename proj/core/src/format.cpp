#include "textcoherence/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace textcoherence {

namespace {

std::string non_finite(double value) {
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return non_finite(value);
  if (value == 0.0) value = 0.0;  // drop negative zero
  std::array<char, 512> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, decimals);
  std::string out(buf.data(), res.ptr);
  // "-0.000000" after rounding a tiny negative value.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string format_scientific(double value, int decimals) {
  if (!std::isfinite(value)) return non_finite(value);
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::scientific, decimals);
  std::string out(buf.data(), res.ptr);
  // Uppercase exponent marker, matching the "6.29E-60" style.
  if (const auto e = out.find('e'); e != std::string::npos) out[e] = 'E';
  return out;
}

std::string format_roundtrip(double value) {
  if (!std::isfinite(value)) return non_finite(value);
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

}  // namespace textcoherence
