#pragma once

#include <string>

namespace textcoherence {

// Locale-independent number formatting for every file and report we emit.
std::string format_fixed(double value, int decimals);
std::string format_scientific(double value, int decimals);
// Shortest representation that parses back to the same double.
std::string format_roundtrip(double value);

}  // namespace textcoherence
