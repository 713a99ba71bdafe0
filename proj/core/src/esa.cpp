#include "textcoherence/esa.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "textcoherence/error.hpp"
#include "textcoherence/format.hpp"
#include "textcoherence/text.hpp"

namespace textcoherence {

// ---------------------------------------------------------------------------
// SparseVector

namespace {

void check_weight(double w) {
  if (!std::isfinite(w) || w < 0.0) {
    throw InvalidArgument("SparseVector: weights must be finite and non-negative");
  }
}

}  // namespace

SparseVector::SparseVector(const std::map<ConceptId, double>& weights) {
  entries_.reserve(weights.size());
  for (const auto& [id, w] : weights) {
    check_weight(w);
    if (w != 0.0) entries_.emplace_back(id, w);
  }
}

SparseVector::SparseVector(std::initializer_list<Entry> entries) {
  std::map<ConceptId, double> weights;
  for (const auto& [id, w] : entries) {
    if (!weights.emplace(id, w).second) throw InvalidArgument("SparseVector: duplicate concept id");
  }
  *this = SparseVector(weights);
}

double SparseVector::weight(ConceptId id) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                                   [](const Entry& e, ConceptId key) { return e.first < key; });
  return it != entries_.end() && it->first == id ? it->second : 0.0;
}

double SparseVector::squared_norm() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.second * e.second;
  return s;
}

SparseVector mean_sparse(std::span<const SparseVector* const> vectors) {
  if (vectors.empty()) throw InvalidArgument("mean_sparse: empty list");
  std::map<ConceptId, double> sum;
  for (const SparseVector* v : vectors) {
    for (const auto& [id, w] : v->entries()) sum[id] += w;
  }
  const double n = static_cast<double>(vectors.size());
  for (auto& [id, w] : sum) w /= n;
  return SparseVector(sum);
}

SparseVector mean_sparse(std::span<const SparseVector> vectors) {
  std::vector<const SparseVector*> ptrs;
  ptrs.reserve(vectors.size());
  for (const SparseVector& v : vectors) ptrs.push_back(&v);
  return mean_sparse(std::span<const SparseVector* const>(ptrs));
}

double dot_sparse(const SparseVector& u, const SparseVector& v) {
  const auto a = u.entries();
  const auto b = v.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  double s = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      s += a[i].second * b[j].second;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

double cosine_sparse(const SparseVector& u, const SparseVector& v) {
  const double uu = u.squared_norm();
  const double vv = v.squared_norm();
  if (uu == 0.0 || vv == 0.0) throw InvalidArgument("cosine_sparse: zero-norm vector");
  return std::clamp(dot_sparse(u, v) / std::sqrt(uu * vv), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Weighting

std::string_view to_string(EsaWeighting weighting) {
  return weighting == EsaWeighting::Tf ? "tf" : "tfidf";
}

std::optional<EsaWeighting> parse_esa_weighting(std::string_view s) {
  if (s == "tf") return EsaWeighting::Tf;
  if (s == "tfidf") return EsaWeighting::TfIdf;
  return std::nullopt;
}

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = {
      "a",     "about", "above",  "after", "again", "against", "all",   "am",    "an",
      "and",   "any",   "are",    "as",    "at",    "be",      "because", "been", "before",
      "being", "below", "between", "both", "but",   "by",      "can",   "could", "did",
      "do",    "does",  "doing",  "down",  "during", "each",   "few",   "for",   "from",
      "further", "had", "has",    "have",  "having", "he",     "her",   "here",  "hers",
      "herself", "him", "himself", "his",  "how",   "i",       "if",    "in",    "into",
      "is",    "it",    "its",    "itself", "just", "me",      "more",  "most",  "my",
      "myself", "no",   "nor",    "not",   "now",   "of",      "off",   "on",    "once",
      "only",  "or",    "other",  "our",   "ours",  "ourselves", "out", "over",  "own",
      "s",     "same",  "she",    "should", "so",   "some",    "such",  "t",     "than",
      "that",  "the",   "their",  "theirs", "them", "themselves", "then", "there", "these",
      "they",  "this",  "those",  "through", "to",  "too",     "under", "until", "up",
      "very",  "was",   "we",     "were",  "what",  "when",    "where", "which", "while",
      "who",   "whom",  "why",    "will",  "with",  "would",   "you",   "your",  "yours",
      "yourself", "yourselves"};
  return words;
}

// ---------------------------------------------------------------------------
// EsaIndex

const SparseVector* EsaIndex::word_vector(std::string_view token) const {
  const auto it = rows_.find(std::string(token));
  if (it == rows_.end() || it->second.vector.empty()) return nullptr;
  return &it->second.vector;
}

std::size_t EsaIndex::df(std::string_view token) const {
  const auto it = rows_.find(std::string(token));
  return it == rows_.end() ? 0 : it->second.df;
}

std::vector<std::string> EsaIndex::sorted_tokens() const {
  std::vector<std::string> out;
  out.reserve(rows_.size());
  for (const auto& [token, row] : rows_) out.push_back(token);
  std::sort(out.begin(), out.end());
  return out;
}

EsaIndex build_esa_index(std::span<const KbArticle> kb, const EsaBuildOptions& options,
                         EsaBuildReport* report) {
  if (kb.empty()) throw InvalidArgument("build_esa_index: empty knowledge base");
  if (!(options.min_weight >= 0.0)) throw InvalidArgument("build_esa_index: negative min_weight");

  EsaBuildReport local;
  EsaBuildReport& rep = report ? *report : local;
  rep = EsaBuildReport{};
  rep.articles_in = kb.size();

  std::unordered_set<std::string> stopwords;
  if (options.remove_stopwords) {
    stopwords.insert(default_stopwords().begin(), default_stopwords().end());
  }

  EsaIndex index;
  index.weighting_ = options.weighting;
  // token -> (concept -> raw count)
  std::unordered_map<std::string, std::map<ConceptId, double>> counts;
  for (const KbArticle& article : kb) {
    std::vector<std::string> tokens = tokenize(article.text);
    std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
    if (tokens.empty()) {
      rep.skipped_articles.push_back(article.title);
      continue;
    }
    const auto id = static_cast<ConceptId>(index.concepts_.size());
    index.concepts_.push_back({id, article.title});
    for (std::string& t : tokens) counts[std::move(t)][id] += 1.0;
  }
  if (index.concepts_.empty()) {
    throw InvalidArgument("build_esa_index: no article in the knowledge base has tokens");
  }

  const double n = static_cast<double>(index.concepts_.size());
  for (auto& [token, per_concept] : counts) {
    const std::size_t df = per_concept.size();
    const double idf = options.weighting == EsaWeighting::TfIdf
                           ? std::log(n / static_cast<double>(df))
                           : 1.0;
    for (auto& [id, w] : per_concept) {
      w *= idf;
      if (w < options.min_weight) w = 0.0;
    }
    index.rows_.emplace(token, EsaIndex::Row{df, SparseVector(per_concept)});
  }
  return index;
}

// ---------------------------------------------------------------------------
// Knowledge-base input

std::vector<KbArticle> load_kb(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<KbArticle> kb;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw DataError("cannot read knowledge-base file: " + file.string());
      std::ostringstream buf;
      buf << in.rdbuf();
      std::string text = buf.str();
      if (!is_valid_utf8(text)) throw DataError(file.string() + ": invalid UTF-8");
      const std::string title =
          file.extension() == ".txt" ? file.stem().string() : file.filename().string();
      kb.push_back({title, std::move(text)});
    }
    return kb;
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open knowledge base: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    if (!is_valid_utf8(line)) throw DataError(where + ": invalid UTF-8");
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object() || !obj.contains("title") || !obj.contains("text") ||
        !obj["title"].is_string() || !obj["text"].is_string()) {
      throw DataError(where + ": expected {\"title\": string, \"text\": string}");
    }
    kb.push_back({obj["title"].get<std::string>(), obj["text"].get<std::string>()});
  }
  return kb;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr std::string_view kFormatTag = "textcoherence-esa 1";

std::string escape_title(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::string unescape_title(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    const char n = s[++i];
    out.push_back(n == 't' ? '\t' : n == 'n' ? '\n' : n == 'r' ? '\r' : n);
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

void write_esa_index(const EsaIndex& index, std::ostream& out) {
  out << kFormatTag << '\n';
  out << "doc_count " << index.doc_count() << '\n';
  out << "weighting " << to_string(index.weighting()) << '\n';
  out << "concepts " << index.concepts().size() << '\n';
  for (const auto& c : index.concepts()) out << c.id << '\t' << escape_title(c.title) << '\n';
  const auto tokens = index.sorted_tokens();
  out << "tokens " << tokens.size() << '\n';
  for (const std::string& token : tokens) {
    out << token << '\t' << index.df(token) << '\t';
    const SparseVector* v = index.word_vector(token);
    bool first = true;
    if (v) {
      for (const auto& [id, w] : v->entries()) {
        if (!first) out << ' ';
        out << id << ':' << format_roundtrip(w);
        first = false;
      }
    }
    out << '\n';
  }
}

void save_esa_index(const EsaIndex& index, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write ESA index: " + path.string());
  write_esa_index(index, out);
  if (!out) throw DataError("failed writing ESA index: " + path.string());
}

EsaIndex read_esa_index(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) -> void {
    throw DataError(name + ": line " + std::to_string(line_no) + ": " + what);
  };
  const auto next_line = [&]() {
    if (!std::getline(in, line)) {
      ++line_no;
      fail("unexpected end of file");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  const auto keyed_count = [&](std::string_view key) {
    next_line();
    std::size_t value = 0;
    const std::string_view sv(line);
    if (sv.substr(0, key.size() + 1) != std::string(key) + " " ||
        !parse_number(sv.substr(key.size() + 1), value)) {
      fail("expected '" + std::string(key) + " <n>'");
    }
    return value;
  };

  next_line();
  if (line != kFormatTag) fail("not an ESA index file");
  const std::size_t doc_count = keyed_count("doc_count");

  EsaIndex index;
  next_line();
  if (line.rfind("weighting ", 0) != 0) fail("expected 'weighting <tf|tfidf>'");
  const auto weighting = parse_esa_weighting(std::string_view(line).substr(10));
  if (!weighting) fail("unknown weighting");
  index.weighting_ = *weighting;

  const std::size_t concept_count = keyed_count("concepts");
  if (concept_count != doc_count) fail("concept table size differs from doc_count");
  for (std::size_t i = 0; i < concept_count; ++i) {
    next_line();
    const auto tab = line.find('\t');
    ConceptId id = 0;
    if (tab == std::string::npos || !parse_number(std::string_view(line).substr(0, tab), id) ||
        id != i) {
      fail("malformed concept row");
    }
    index.concepts_.push_back({id, unescape_title(std::string_view(line).substr(tab + 1))});
  }

  const std::size_t token_count = keyed_count("tokens");
  for (std::size_t i = 0; i < token_count; ++i) {
    next_line();
    const std::string_view sv(line);
    const auto t1 = sv.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : sv.find('\t', t1 + 1);
    std::size_t df = 0;
    if (t2 == std::string_view::npos || !parse_number(sv.substr(t1 + 1, t2 - t1 - 1), df)) {
      fail("malformed token row");
    }
    std::map<ConceptId, double> weights;
    std::string_view rest = sv.substr(t2 + 1);
    while (!rest.empty()) {
      const auto sp = rest.find(' ');
      const std::string_view item = rest.substr(0, sp);
      const auto colon = item.find(':');
      ConceptId id = 0;
      double w = 0.0;
      if (colon == std::string_view::npos || !parse_number(item.substr(0, colon), id) ||
          !parse_number(item.substr(colon + 1), w) || id >= doc_count || !std::isfinite(w) ||
          w <= 0.0) {
        fail("malformed concept weight '" + std::string(item) + "'");
      }
      weights[id] = w;
      rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
    }
    index.rows_.emplace(std::string(sv.substr(0, t1)), EsaIndex::Row{df, SparseVector(weights)});
  }
  return index;
}

EsaIndex load_esa_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open ESA index: " + path.string());
  return read_esa_index(in, path.string());
}

}  // namespace textcoherence
