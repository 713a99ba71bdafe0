#pragma once

#include <span>

namespace textcoherence {

// Population SD divides by n, sample SD by n - 1.
enum class SdConvention { Population, Sample };

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

// Throws InvalidArgument on an empty input, or on a single value under the
// sample convention.
MeanSd mean_sd(std::span<const double> values, SdConvention convention = SdConvention::Population);

}  // namespace textcoherence
