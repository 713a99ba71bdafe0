#pragma once

// Reference computations written independently of the library: plain loops,
// no shared helpers. Used to cross-check scores in unit and acceptance tests.

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace tc_test::oracle {

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  double uv = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

// Mean over ordered pairs i != j, as the coherence definition is written.
inline double ordered_pair_mean(const std::vector<std::vector<double>>& reps) {
  const std::size_t k = reps.size();
  if (k < 2) return std::nan("");
  double sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) sum += cosine(reps[i], reps[j]);
    }
  }
  return sum / static_cast<double>(k * (k - 1));
}

// Average of the vectors of the tokens found in the table; empty if none.
inline std::vector<double> average(const std::vector<std::string>& tokens,
                                   const std::map<std::string, std::vector<double>>& table) {
  std::vector<double> sum;
  std::size_t n = 0;
  for (const std::string& t : tokens) {
    auto it = table.find(t);
    if (it == table.end()) continue;
    if (sum.empty()) sum.assign(it->second.size(), 0.0);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += it->second[i];
    ++n;
  }
  for (double& x : sum) x /= static_cast<double>(n);
  return sum;
}

// Raw tf or tf*ln(N/df) weights computed by direct counting over
// whitespace-split articles.
inline std::map<std::string, std::vector<double>> esa_dense(const std::vector<std::string>& articles, bool tfidf) {
  std::map<std::string, std::vector<double>> counts;
  const std::size_t n = articles.size();
  for (std::size_t a = 0; a < n; ++a) {
    std::string word;
    auto flush = [&] {
      if (word.empty()) return;
      auto& row = counts[word];
      if (row.empty()) row.assign(n, 0.0);
      row[a] += 1.0;
      word.clear();
    };
    for (char c : articles[a]) {
      if (c == ' ') {
        flush();
      } else {
        word += c;
      }
    }
    flush();
  }
  if (tfidf) {
    for (auto& [w, row] : counts) {
      double df = 0;
      for (double x : row) df += x > 0 ? 1 : 0;
      const double idf = std::log(static_cast<double>(n) / df);
      for (double& x : row) x *= idf;
    }
  }
  return counts;
}

}  // namespace tc_test::oracle
