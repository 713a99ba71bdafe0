#include "textcoherence/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "textcoherence/error.hpp"

namespace textcoherence {

MeanSd mean_sd(std::span<const double> values, SdConvention convention) {
  if (values.empty()) throw InvalidArgument("mean_sd: empty list");
  if (convention == SdConvention::Sample && values.size() < 2) {
    throw InvalidArgument("mean_sd: sample SD needs at least two values");
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double divisor = convention == SdConvention::Population ? n : n - 1.0;
  return {mean, std::sqrt(ss / divisor)};
}

namespace {

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double var = 0.0;  // sample variance
};

Moments moments(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("t-test: each sample needs at least two values");
  const MeanSd ms = mean_sd(x, SdConvention::Sample);
  return {static_cast<double>(x.size()), ms.mean, ms.sd * ms.sd};
}

TTestResult finish(double diff, double se2, double dof) {
  TTestResult r;
  r.dof = dof;
  if (se2 == 0.0) {
    if (diff == 0.0) return r;
    r.t = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p_two_tailed = 0.0;
    r.log10_p = -std::numeric_limits<double>::infinity();
    r.degenerate = true;
    return r;
  }
  r.t = diff / std::sqrt(se2);
  const TailProbability tail = student_t_two_tailed(r.t, dof);
  r.p_two_tailed = tail.p;
  r.log10_p = tail.log10_p;
  return r;
}

}  // namespace

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double va = ma.var / ma.n;
  const double vb = mb.var / mb.n;
  const double se2 = va + vb;
  double dof = ma.n + mb.n - 2.0;
  if (se2 > 0.0) {
    dof = se2 * se2 / (va * va / (ma.n - 1.0) + vb * vb / (mb.n - 1.0));
  }
  return finish(ma.mean - mb.mean, se2, dof);
}

TTestResult pooled_t_test(std::span<const double> a, std::span<const double> b) {
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double dof = ma.n + mb.n - 2.0;
  const double sp2 = ((ma.n - 1.0) * ma.var + (mb.n - 1.0) * mb.var) / dof;
  const double se2 = sp2 * (1.0 / ma.n + 1.0 / mb.n);
  return finish(ma.mean - mb.mean, se2, dof);
}

TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestVariant variant) {
  return variant == TTestVariant::Welch ? welch_t_test(a, b) : pooled_t_test(a, b);
}

double percent_difference(double mean_fake, double mean_legit) {
  if (mean_fake == 0.0) throw InvalidArgument("percent_difference: fake mean is zero");
  return (mean_legit - mean_fake) / mean_fake * 100.0;
}

// ---------------------------------------------------------------------------
// Histogram

void HistogramSpec::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw InvalidArgument("histogram: need finite lower < upper");
  }
  if (bucket_count < 1) throw InvalidArgument("histogram: bucket_count must be at least 1");
}

double HistogramSpec::edge(std::size_t i) const {
  if (i >= bucket_count) return upper;
  return lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(bucket_count);
}

std::size_t histogram_bucket(const HistogramSpec& spec, double value) {
  const std::size_t last = spec.bucket_count - 1;
  if (!(value > spec.lower)) return 0;  // includes clamped-below values
  if (value >= spec.upper) return last;
  const double scaled = (value - spec.lower) / (spec.upper - spec.lower) * static_cast<double>(spec.bucket_count);
  auto idx = static_cast<std::size_t>(std::min(std::floor(scaled), static_cast<double>(last)));
  // Settle rounding at bucket edges against the edges we publish.
  while (idx < last && value >= spec.edge(idx + 1)) ++idx;
  while (idx > 0 && value < spec.edge(idx)) --idx;
  return idx;
}

const HistogramColumn* Histogram::column(Label label) const {
  for (const HistogramColumn& c : columns) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

Histogram build_histogram(std::span<const std::pair<Label, std::vector<double>>> scores_by_label,
                          const HistogramSpec& spec) {
  spec.validate();
  Histogram h;
  h.spec = spec;
  for (const auto& [label, values] : scores_by_label) {
    if (values.empty()) continue;
    HistogramColumn col;
    col.label = label;
    col.n = values.size();
    col.counts.assign(spec.bucket_count, 0);
    for (double v : values) {
      if (std::isnan(v)) throw InvalidArgument("histogram: NaN score");
      if (v < spec.lower) ++col.clamped_below;
      if (v > spec.upper) ++col.clamped_above;
      ++col.counts[histogram_bucket(spec, v)];
    }
    col.percentages.reserve(spec.bucket_count);
    for (std::size_t c : col.counts) {
      col.percentages.push_back(100.0 * static_cast<double>(c) / static_cast<double>(col.n));
    }
    h.columns.push_back(std::move(col));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Comparison

namespace {

std::vector<double> ok_values(std::span<const CoherenceScore> scores, std::size_t& excluded) {
  std::vector<double> values;
  excluded = 0;
  for (const CoherenceScore& s : scores) {
    if (s.ok()) {
      values.push_back(s.value);
    } else {
      ++excluded;
    }
  }
  return values;
}

}  // namespace

ComparisonSummary compare(std::span<const CoherenceScore> fake_scores,
                          std::span<const CoherenceScore> legit_scores,
                          const CompareOptions& options) {
  ComparisonSummary summary;
  summary.variant = options.variant;
  const std::vector<double> fake = ok_values(fake_scores, summary.fake.excluded);
  const std::vector<double> legit = ok_values(legit_scores, summary.legitimate.excluded);
  if (fake.size() < 2 || legit.size() < 2) {
    throw InvalidArgument("compare: insufficient scores (need at least two ok scores per label; fake=" +
                          std::to_string(fake.size()) + ", legitimate=" + std::to_string(legit.size()) + ")");
  }
  const MeanSd f = mean_sd(fake, options.sd);
  const MeanSd l = mean_sd(legit, options.sd);
  summary.fake = {fake.size(), f.mean, f.sd, summary.fake.excluded};
  summary.legitimate = {legit.size(), l.mean, l.sd, summary.legitimate.excluded};
  if (f.mean != 0.0) summary.percent_difference = percent_difference(f.mean, l.mean);
  summary.test = t_test(fake, legit, options.variant);
  return summary;
}

ComparisonSummary compare(std::span<const CoherenceScore> scores, const CompareOptions& options) {
  std::vector<CoherenceScore> fake;
  std::vector<CoherenceScore> legit;
  for (const CoherenceScore& s : scores) {
    if (s.label == Label::Fake) fake.push_back(s);
    if (s.label == Label::Legitimate) legit.push_back(s);
  }
  return compare(fake, legit, options);
}

}  // namespace textcoherence
