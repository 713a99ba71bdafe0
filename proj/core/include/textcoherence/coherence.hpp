#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "textcoherence/corpus.hpp"
#include "textcoherence/embeddings.hpp"
#include "textcoherence/esa.hpp"

namespace textcoherence {

enum class Method { Embedding, Esa, Entity };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view s);

enum class ScoreStatus { Ok, Undefined };

std::string_view to_string(ScoreStatus status);

struct CoherenceScore {
  std::string doc_id;
  Label label = Label::Unlabeled;
  Method method = Method::Embedding;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::size_t element_count = 0;  // usable sentences, or entities
  std::size_t pair_count = 0;
  ScoreStatus status = ScoreStatus::Undefined;

  bool ok() const noexcept { return status == ScoreStatus::Ok; }
};

// Token occurrences (multiset) or distinct tokens (set) inside a sentence mean.
enum class TokenSemantics { Multiset, Set };

// Mean of in-vocabulary token vectors; nullopt when nothing is in vocabulary
// or the mean is the zero vector.
std::optional<DenseVector> sentence_rep_embedding(const Sentence& sentence,
                                                  const EmbeddingTable& table,
                                                  TokenSemantics semantics = TokenSemantics::Multiset);

// Mean of known ESA word vectors; nullopt when the mean is empty.
std::optional<SparseVector> sentence_rep_esa(const Sentence& sentence, const EsaIndex& index,
                                             TokenSemantics semantics = TokenSemantics::Multiset);

struct PairwiseMean {
  double value = std::numeric_limits<double>::quiet_NaN();
  std::size_t pairs = 0;
};

// Mean similarity over the k(k-1)/2 unordered pairs of `elements`. With fewer
// than two elements the value stays NaN and pairs is 0.
template <typename T, typename Similarity>
PairwiseMean mean_pairwise_similarity(std::span<const T> elements, Similarity&& similarity) {
  PairwiseMean result;
  const std::size_t k = elements.size();
  if (k < 2) return result;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) sum += similarity(elements[i], elements[j]);
  }
  result.pairs = k * (k - 1) / 2;
  result.value = sum / static_cast<double>(result.pairs);
  return result;
}

// Sentence-level coherence with a caller-supplied representation. `rep` maps a
// Sentence to std::optional<R>; sentences without a representation are dropped.
template <typename RepFn, typename Similarity>
CoherenceScore coherence_sentences(const Document& doc, Method method, RepFn&& rep,
                                   Similarity&& similarity) {
  using Rep = typename std::invoke_result_t<RepFn, const Sentence&>::value_type;
  std::vector<Rep> reps;
  reps.reserve(doc.sentences.size());
  for (const Sentence& s : doc.sentences) {
    if (auto r = rep(s)) reps.push_back(std::move(*r));
  }
  const PairwiseMean mean =
      mean_pairwise_similarity(std::span<const Rep>(reps), std::forward<Similarity>(similarity));
  CoherenceScore score;
  score.doc_id = doc.id;
  score.label = doc.label;
  score.method = method;
  score.element_count = reps.size();
  score.pair_count = mean.pairs;
  score.value = mean.value;
  score.status = mean.pairs >= 1 ? ScoreStatus::Ok : ScoreStatus::Undefined;
  return score;
}

struct ScoringOptions {
  TokenSemantics token_semantics = TokenSemantics::Multiset;
  // Score over every entity mention instead of distinct entities.
  bool entity_multiset = false;
};

CoherenceScore coherence_embedding(const Document& doc, const EmbeddingTable& table,
                                   const ScoringOptions& options = {});
CoherenceScore coherence_esa(const Document& doc, const EsaIndex& index,
                             const ScoringOptions& options = {});
// Requires entity linking to have run on `doc`; mentions whose id has no
// vector in the table are ignored.
CoherenceScore coherence_entities(const Document& doc, const EmbeddingTable& entity_table,
                                  const ScoringOptions& options = {});

// Borrowed resources; the one matching the scored method must be set.
struct Resources {
  const EmbeddingTable* embeddings = nullptr;
  const EsaIndex* esa = nullptr;
  const EmbeddingTable* entities = nullptr;
};

CoherenceScore score_document(const Document& doc, Method method, const Resources& resources,
                              const ScoringOptions& options = {});

// One score per document ordered by doc id. Documents are scored on up to
// `workers` threads; output does not depend on the worker count. Throws
// InvalidArgument when the method's resource is missing or an entity-method
// document has not been linked.
std::vector<CoherenceScore> score_corpus(const LabeledCorpus& corpus, Method method,
                                         const Resources& resources,
                                         const ScoringOptions& options = {},
                                         std::size_t workers = 1);

struct UndefinedCounts {
  std::size_t fake = 0;
  std::size_t legitimate = 0;
  std::size_t unlabeled = 0;
};

UndefinedCounts count_undefined(std::span<const CoherenceScore> scores);

// CSV "doc_id,label,method,value,element_count,pair_count,status"; value has
// six decimals and is empty for undefined scores.
void write_scores_csv(std::span<const CoherenceScore> scores, std::ostream& out);
std::vector<CoherenceScore> read_scores_csv(std::istream& in, const std::string& name);
std::vector<CoherenceScore> load_scores_csv(const std::filesystem::path& path);

}  // namespace textcoherence
