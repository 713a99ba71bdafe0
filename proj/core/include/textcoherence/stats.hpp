#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "textcoherence/coherence.hpp"
#include "textcoherence/descriptive.hpp"
#include "textcoherence/student_t.hpp"

namespace textcoherence {

enum class TTestVariant { Welch, Pooled };

struct TTestResult {
  double t = 0.0;
  double dof = 0.0;
  double p_two_tailed = 1.0;
  double log10_p = 0.0;
  // Both samples have zero variance and different means: t is infinite, p is 0.
  bool degenerate = false;
};

// Two-sample t-test on sample variances (n - 1). Throws InvalidArgument when
// either sample has fewer than two values.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);
TTestResult pooled_t_test(std::span<const double> a, std::span<const double> b);
TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestVariant variant);

// (mean_legit - mean_fake) / mean_fake * 100. Throws InvalidArgument when
// mean_fake is zero.
double percent_difference(double mean_fake, double mean_legit);

struct HistogramSpec {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t bucket_count = 20;

  // Throws InvalidArgument unless lower < upper, both finite, bucket_count >= 1.
  void validate() const;
  double edge(std::size_t i) const;
};

struct HistogramColumn {
  Label label = Label::Unlabeled;
  std::size_t n = 0;
  std::vector<std::size_t> counts;
  std::vector<double> percentages;
  std::size_t clamped_below = 0;
  std::size_t clamped_above = 0;
};

// Equal-width buckets [edge_i, edge_{i+1}), the last one closed. Values
// outside the range are counted into the first or last bucket.
struct Histogram {
  HistogramSpec spec;
  std::vector<HistogramColumn> columns;  // labels with no scores are omitted

  const HistogramColumn* column(Label label) const;
};

std::size_t histogram_bucket(const HistogramSpec& spec, double value);

Histogram build_histogram(std::span<const std::pair<Label, std::vector<double>>> scores_by_label,
                          const HistogramSpec& spec);

struct GroupSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t excluded = 0;  // undefined scores left out of n
};

struct ComparisonSummary {
  GroupSummary fake;
  GroupSummary legitimate;
  std::optional<double> percent_difference;  // absent when the fake mean is 0
  TTestVariant variant = TTestVariant::Welch;
  TTestResult test;
};

struct CompareOptions {
  SdConvention sd = SdConvention::Population;
  TTestVariant variant = TTestVariant::Welch;
};

// Consumes ok scores only; undefined ones are counted as excluded. Throws
// InvalidArgument when a group has fewer than two ok scores.
ComparisonSummary compare(std::span<const CoherenceScore> fake_scores,
                          std::span<const CoherenceScore> legit_scores,
                          const CompareOptions& options = {});

// Splits a mixed score list by label before comparing.
ComparisonSummary compare(std::span<const CoherenceScore> scores, const CompareOptions& options = {});

}  // namespace textcoherence
