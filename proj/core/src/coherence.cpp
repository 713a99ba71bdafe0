#include "textcoherence/coherence.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "textcoherence/csv.hpp"
#include "textcoherence/entitylink.hpp"
#include "textcoherence/error.hpp"
#include "textcoherence/format.hpp"

namespace textcoherence {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Embedding:
      return "embedding";
    case Method::Esa:
      return "esa";
    case Method::Entity:
      return "entity";
  }
  return "embedding";
}

std::optional<Method> parse_method(std::string_view s) {
  if (s == "embedding") return Method::Embedding;
  if (s == "esa") return Method::Esa;
  if (s == "entity") return Method::Entity;
  return std::nullopt;
}

std::string_view to_string(ScoreStatus status) {
  return status == ScoreStatus::Ok ? "ok" : "undefined";
}

namespace {

// Token occurrences, or first occurrences only under set semantics.
std::vector<std::string_view> sentence_tokens(const Sentence& sentence, TokenSemantics semantics) {
  std::vector<std::string_view> out;
  out.reserve(sentence.tokens.size());
  std::set<std::string_view> seen;
  for (const std::string& t : sentence.tokens) {
    if (semantics == TokenSemantics::Set && !seen.insert(t).second) continue;
    out.push_back(t);
  }
  return out;
}

}  // namespace

std::optional<DenseVector> sentence_rep_embedding(const Sentence& sentence,
                                                  const EmbeddingTable& table,
                                                  TokenSemantics semantics) {
  std::vector<std::span<const double>> found;
  for (std::string_view token : sentence_tokens(sentence, semantics)) {
    if (auto v = table.lookup(token)) found.push_back(*v);
  }
  if (found.empty()) return std::nullopt;
  DenseVector mean = mean_vector(std::span<const std::span<const double>>(found));
  if (mean.is_zero()) return std::nullopt;
  return mean;
}

std::optional<SparseVector> sentence_rep_esa(const Sentence& sentence, const EsaIndex& index,
                                             TokenSemantics semantics) {
  std::vector<const SparseVector*> found;
  for (std::string_view token : sentence_tokens(sentence, semantics)) {
    if (const SparseVector* v = index.word_vector(token)) found.push_back(v);
  }
  if (found.empty()) return std::nullopt;
  SparseVector mean = mean_sparse(std::span<const SparseVector* const>(found));
  if (mean.empty()) return std::nullopt;
  return mean;
}

CoherenceScore coherence_embedding(const Document& doc, const EmbeddingTable& table,
                                   const ScoringOptions& options) {
  return coherence_sentences(
      doc, Method::Embedding,
      [&](const Sentence& s) { return sentence_rep_embedding(s, table, options.token_semantics); },
      [](const DenseVector& a, const DenseVector& b) { return cosine(a, b); });
}

CoherenceScore coherence_esa(const Document& doc, const EsaIndex& index,
                             const ScoringOptions& options) {
  return coherence_sentences(
      doc, Method::Esa,
      [&](const Sentence& s) { return sentence_rep_esa(s, index, options.token_semantics); },
      [](const SparseVector& a, const SparseVector& b) { return cosine_sparse(a, b); });
}

CoherenceScore coherence_entities(const Document& doc, const EmbeddingTable& entity_table,
                                  const ScoringOptions& options) {
  if (!doc.entities_linked) {
    throw InvalidArgument("coherence_entities: document '" + doc.id + "' has not been linked");
  }
  std::vector<std::string> ids;
  if (options.entity_multiset) {
    for (const EntityMention& m : doc.entity_mentions) ids.push_back(m.entity_id);
  } else {
    ids = entity_set(doc.entity_mentions);
  }
  std::vector<std::span<const double>> vectors;
  vectors.reserve(ids.size());
  for (const std::string& id : ids) {
    const auto v = entity_table.find(id);
    if (!v) continue;
    if (std::all_of(v->begin(), v->end(), [](double x) { return x == 0.0; })) continue;
    vectors.push_back(*v);
  }
  const PairwiseMean mean = mean_pairwise_similarity(
      std::span<const std::span<const double>>(vectors),
      [](std::span<const double> a, std::span<const double> b) { return cosine(a, b); });

  CoherenceScore score;
  score.doc_id = doc.id;
  score.label = doc.label;
  score.method = Method::Entity;
  score.element_count = vectors.size();
  score.pair_count = mean.pairs;
  score.value = mean.value;
  score.status = mean.pairs >= 1 ? ScoreStatus::Ok : ScoreStatus::Undefined;
  return score;
}

CoherenceScore score_document(const Document& doc, Method method, const Resources& resources,
                              const ScoringOptions& options) {
  switch (method) {
    case Method::Embedding:
      if (!resources.embeddings) throw InvalidArgument("embedding method needs an embedding table");
      return coherence_embedding(doc, *resources.embeddings, options);
    case Method::Esa:
      if (!resources.esa) throw InvalidArgument("esa method needs an ESA index");
      return coherence_esa(doc, *resources.esa, options);
    case Method::Entity:
      if (!resources.entities) throw InvalidArgument("entity method needs an entity table");
      return coherence_entities(doc, *resources.entities, options);
  }
  throw InvalidArgument("unknown method");
}

std::vector<CoherenceScore> score_corpus(const LabeledCorpus& corpus, Method method,
                                         const Resources& resources, const ScoringOptions& options,
                                         std::size_t workers) {
  // Fail before spawning anything.
  if (method == Method::Embedding && !resources.embeddings) {
    throw InvalidArgument("embedding method needs an embedding table");
  }
  if (method == Method::Esa && !resources.esa) throw InvalidArgument("esa method needs an ESA index");
  if (method == Method::Entity && !resources.entities) {
    throw InvalidArgument("entity method needs an entity table");
  }

  const std::size_t n = corpus.documents.size();
  std::vector<CoherenceScore> scores(n);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));

  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = score_document(corpus.documents[i], method, resources, options);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            scores[i] = score_document(corpus.documents[i], method, resources, options);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  std::stable_sort(scores.begin(), scores.end(),
                   [](const CoherenceScore& a, const CoherenceScore& b) { return a.doc_id < b.doc_id; });
  return scores;
}

UndefinedCounts count_undefined(std::span<const CoherenceScore> scores) {
  UndefinedCounts counts;
  for (const CoherenceScore& s : scores) {
    if (s.ok()) continue;
    switch (s.label) {
      case Label::Fake:
        ++counts.fake;
        break;
      case Label::Legitimate:
        ++counts.legitimate;
        break;
      case Label::Unlabeled:
        ++counts.unlabeled;
        break;
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Score CSV

namespace {

constexpr std::string_view kScoreHeader = "doc_id,label,method,value,element_count,pair_count,status";

template <typename T>
bool parse_number(std::string_view s, T& value) {
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

void write_scores_csv(std::span<const CoherenceScore> scores, std::ostream& out) {
  out << kScoreHeader << '\n';
  for (const CoherenceScore& s : scores) {
    out << csv::escape(s.doc_id) << ',' << to_string(s.label) << ',' << to_string(s.method) << ','
        << (s.ok() ? format_fixed(s.value, 6) : std::string()) << ',' << s.element_count << ','
        << s.pair_count << ',' << to_string(s.status) << '\n';
  }
}

std::vector<CoherenceScore> read_scores_csv(std::istream& in, const std::string& name) {
  csv::Reader reader(in);
  csv::Record record;
  if (!reader.next(record)) throw DataError(name + ": empty score file");
  std::string header;
  for (std::size_t i = 0; i < record.fields.size(); ++i) {
    if (i) header += ',';
    header += record.fields[i];
  }
  if (header != kScoreHeader) throw DataError(name + ": unexpected header '" + header + "'");

  std::vector<CoherenceScore> scores;
  while (reader.next(record)) {
    if (record.fields.size() == 1 && record.fields[0].empty()) continue;
    const std::string where = name + ": line " + std::to_string(record.line);
    if (record.error) throw DataError(where + ": " + *record.error);
    if (record.fields.size() != 7) throw DataError(where + ": expected 7 fields");
    CoherenceScore s;
    s.doc_id = record.fields[0];
    if (record.fields[1] == "unlabeled") {
      s.label = Label::Unlabeled;
    } else if (const auto label = parse_label(record.fields[1])) {
      s.label = *label;
    } else {
      throw DataError(where + ": unknown label '" + record.fields[1] + "'");
    }
    const auto method = parse_method(record.fields[2]);
    if (!method) throw DataError(where + ": unknown method '" + record.fields[2] + "'");
    s.method = *method;
    if (!parse_number(record.fields[4], s.element_count) ||
        !parse_number(record.fields[5], s.pair_count)) {
      throw DataError(where + ": malformed counts");
    }
    if (record.fields[6] == "ok") {
      s.status = ScoreStatus::Ok;
      if (!parse_number(record.fields[3], s.value) || !std::isfinite(s.value)) {
        throw DataError(where + ": malformed value '" + record.fields[3] + "'");
      }
    } else if (record.fields[6] == "undefined") {
      s.status = ScoreStatus::Undefined;
    } else {
      throw DataError(where + ": unknown status '" + record.fields[6] + "'");
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

std::vector<CoherenceScore> load_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open score file: " + path.string());
  return read_scores_csv(in, path.string());
}

}  // namespace textcoherence
