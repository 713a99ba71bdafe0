#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace textcoherence {

using ConceptId = std::uint32_t;

// Concept-space vector with sorted, strictly positive entries.
class SparseVector {
 public:
  using Entry = std::pair<ConceptId, double>;

  SparseVector() = default;
  // Zero weights are dropped; negative or non-finite weights throw InvalidArgument.
  explicit SparseVector(const std::map<ConceptId, double>& weights);
  SparseVector(std::initializer_list<Entry> entries);

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t nonzeros() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  double weight(ConceptId id) const;  // 0 when absent

  double squared_norm() const noexcept;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<Entry> entries_;
};

// Keywise sum divided by the list length. Throws InvalidArgument on an empty list.
SparseVector mean_sparse(std::span<const SparseVector* const> vectors);
SparseVector mean_sparse(std::span<const SparseVector> vectors);

double dot_sparse(const SparseVector& u, const SparseVector& v);

// Throws InvalidArgument on a zero-norm input.
double cosine_sparse(const SparseVector& u, const SparseVector& v);

enum class EsaWeighting { Tf, TfIdf };

std::string_view to_string(EsaWeighting weighting);
std::optional<EsaWeighting> parse_esa_weighting(std::string_view s);

struct KbArticle {
  std::string title;
  std::string text;
};

struct EsaBuildOptions {
  EsaWeighting weighting = EsaWeighting::TfIdf;
  bool remove_stopwords = true;
  // Entries below this weight are pruned after weighting (0 keeps everything).
  double min_weight = 0.0;
};

struct EsaBuildReport {
  std::size_t articles_in = 0;
  std::vector<std::string> skipped_articles;  // titles of articles with no tokens
};

const std::vector<std::string>& default_stopwords();

class EsaIndex {
 public:
  struct Concept {
    ConceptId id = 0;
    std::string title;
  };

  EsaIndex() = default;

  std::size_t doc_count() const noexcept { return concepts_.size(); }
  EsaWeighting weighting() const noexcept { return weighting_; }
  const std::vector<Concept>& concepts() const noexcept { return concepts_; }

  // Stored concept vector; absent for unknown or fully pruned tokens.
  const SparseVector* word_vector(std::string_view token) const;

  // Raw document frequency (articles containing the token before weighting).
  std::size_t df(std::string_view token) const;

  std::size_t vocabulary_size() const noexcept { return rows_.size(); }

  // Tokens in lexicographic order.
  std::vector<std::string> sorted_tokens() const;

  friend EsaIndex build_esa_index(std::span<const KbArticle> kb, const EsaBuildOptions& options,
                                  EsaBuildReport* report);
  friend EsaIndex read_esa_index(std::istream& in, const std::string& name);

 private:
  struct Row {
    std::size_t df = 0;
    SparseVector vector;
  };

  EsaWeighting weighting_ = EsaWeighting::TfIdf;
  std::vector<Concept> concepts_;
  std::unordered_map<std::string, Row> rows_;
};

// tf: weight = occurrences of the token in the article.
// tfidf: weight = tf * ln(doc_count / df); tokens present everywhere vanish.
// Articles that tokenize to nothing are skipped and get no concept id.
// Throws InvalidArgument when no usable article remains.
EsaIndex build_esa_index(std::span<const KbArticle> kb, const EsaBuildOptions& options = {},
                         EsaBuildReport* report = nullptr);

inline const SparseVector* esa_word_vector(const EsaIndex& index, std::string_view token) {
  return index.word_vector(token);
}

// Knowledge-base input: a directory of plain-text files (file name is the
// title, sorted by name) or a JSONL file of {title, text} objects.
std::vector<KbArticle> load_kb(const std::filesystem::path& path);

// Text sidecar: header (format tag, doc_count, weighting, concept table), then
// one row per token in lexicographic order. Output is byte-stable.
void write_esa_index(const EsaIndex& index, std::ostream& out);
void save_esa_index(const EsaIndex& index, const std::filesystem::path& path);
EsaIndex read_esa_index(std::istream& in, const std::string& name);
EsaIndex load_esa_index(const std::filesystem::path& path);

}  // namespace textcoherence
