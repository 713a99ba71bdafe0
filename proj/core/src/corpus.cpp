#include "textcoherence/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "textcoherence/csv.hpp"
#include "textcoherence/error.hpp"
#include "textcoherence/text.hpp"

namespace textcoherence {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Fake:
      return "fake";
    case Label::Legitimate:
      return "legitimate";
    case Label::Unlabeled:
      return "unlabeled";
  }
  return "unlabeled";
}

std::optional<Label> parse_label(std::string_view s) {
  if (s == "fake") return Label::Fake;
  if (s == "legitimate") return Label::Legitimate;
  return std::nullopt;
}

bool Document::same_record(const Document& other) const {
  return id == other.id && label == other.label && title == other.title && text == other.text;
}

std::size_t LabeledCorpus::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(documents.begin(), documents.end(),
                                                [&](const Document& d) { return d.label == label; }));
}

std::vector<const Document*> LabeledCorpus::with_label(Label label) const {
  std::vector<const Document*> out;
  for (const Document& d : documents) {
    if (d.label == label) out.push_back(&d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

LabeledCorpus load_csv(const std::filesystem::path& path, const CsvMapping& mapping, Label label,
                       LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file: " + path.string());

  LoadReport local;
  LoadReport& rep = report ? *report : local;
  rep = LoadReport{};

  csv::Reader reader(in);
  csv::Record header;
  if (!reader.next(header) || header.error) {
    throw DataError(path.string() + ": missing or malformed header row");
  }
  if (!header.fields.empty() && header.fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    header.fields[0].erase(0, 3);
  }

  const auto column_index = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.fields.begin(), header.fields.end(), name);
    if (it == header.fields.end()) {
      throw DataError(path.string() + ": missing mapped column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.fields.begin());
  };

  const std::size_t text_col = column_index(mapping.text_column);
  std::optional<std::size_t> title_col;
  if (mapping.title_column) {
    // The default title column is optional; an explicitly renamed one is not.
    const auto it = std::find(header.fields.begin(), header.fields.end(), *mapping.title_column);
    if (it != header.fields.end()) {
      title_col = static_cast<std::size_t>(it - header.fields.begin());
    } else if (*mapping.title_column != "title") {
      column_index(*mapping.title_column);
    }
  }
  std::optional<std::size_t> subject_col;
  if (mapping.subject_column) subject_col = column_index(*mapping.subject_column);

  LabeledCorpus corpus;
  corpus.source = path.string();
  const std::string stem = path.stem().string();

  csv::Record record;
  std::size_t row = 0;
  while (reader.next(record)) {
    // Blank physical lines are not records.
    if (record.fields.size() == 1 && record.fields[0].empty() && !record.error) continue;
    ++row;
    ++rep.records;
    if (record.error) {
      rep.malformed.push_back({row, *record.error});
      continue;
    }
    if (record.fields.size() != header.fields.size()) {
      rep.malformed.push_back({row, "expected " + std::to_string(header.fields.size()) +
                                        " fields, found " + std::to_string(record.fields.size())});
      continue;
    }
    for (const std::string& field : record.fields) {
      if (!is_valid_utf8(field)) {
        throw DataError(path.string() + ": row " + std::to_string(row) + ": invalid UTF-8");
      }
    }
    if (subject_col && !mapping.subject_filter.empty()) {
      const std::string& subject = record.fields[*subject_col];
      if (std::find(mapping.subject_filter.begin(), mapping.subject_filter.end(), subject) ==
          mapping.subject_filter.end()) {
        ++rep.skipped_filtered;
        continue;
      }
    }
    std::string& text = record.fields[text_col];
    if (trim(text).empty()) {
      ++rep.skipped_empty;
      continue;
    }
    Document doc;
    doc.id = stem + "-" + std::to_string(row);
    doc.label = label;
    doc.text = std::move(text);
    if (title_col && !trim(record.fields[*title_col]).empty()) {
      doc.title = std::move(record.fields[*title_col]);
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// JSONL

LabeledCorpus read_jsonl(std::istream& in, std::string source) {
  LabeledCorpus corpus;
  corpus.source = std::move(source);
  std::unordered_set<std::string> seen;

  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) {
    throw DataError(corpus.source + ": line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!is_valid_utf8(line)) fail("invalid UTF-8");

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) fail("expected a JSON object");

    const auto string_field = [&](const char* key) -> std::string {
      const auto it = obj.find(key);
      if (it == obj.end()) fail(std::string("missing field '") + key + "'");
      if (!it->is_string()) fail(std::string("field '") + key + "' must be a string");
      return it->get<std::string>();
    };

    Document doc;
    doc.id = string_field("id");
    const std::string label = string_field("label");
    const auto parsed = parse_label(label);
    if (!parsed) fail("unknown label '" + label + "'");
    doc.label = *parsed;
    doc.text = string_field("text");
    if (const auto it = obj.find("title"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) fail("field 'title' must be a string");
      doc.title = it->get<std::string>();
    }
    if (!seen.insert(doc.id).second) fail("duplicate id '" + doc.id + "'");
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

LabeledCorpus load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open JSONL file: " + path.string());
  return read_jsonl(in, path.string());
}

void write_jsonl(const LabeledCorpus& corpus, std::ostream& out) {
  for (const Document& doc : corpus.documents) {
    if (doc.label == Label::Unlabeled) {
      throw InvalidArgument("write_jsonl: document '" + doc.id + "' has no label");
    }
    nlohmann::ordered_json obj;
    obj["id"] = doc.id;
    obj["label"] = std::string(to_string(doc.label));
    if (doc.title) obj["title"] = *doc.title;
    obj["text"] = doc.text;
    out << obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict) << '\n';
  }
}

void merge_corpus(LabeledCorpus& into, LabeledCorpus other) {
  std::unordered_set<std::string> ids;
  for (const Document& d : into.documents) ids.insert(d.id);
  for (Document& d : other.documents) {
    if (!ids.insert(d.id).second) {
      throw DataError("duplicate document id '" + d.id + "' while merging " + other.source);
    }
    into.documents.push_back(std::move(d));
  }
  if (into.source.empty()) {
    into.source = other.source;
  } else if (!other.source.empty()) {
    into.source += ";" + other.source;
  }
}

// ---------------------------------------------------------------------------
// Segmentation

std::vector<std::string> SplitOptions::default_abbreviations() {
  return {"Mr.", "Mrs.", "Dr.", "St.", "U.S.", "e.g.", "i.e."};
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool starts_with_at(std::string_view s, std::size_t pos, std::string_view prefix) {
  return s.substr(pos, prefix.size()) == prefix;
}

// Closing quote or bracket that may trail terminal punctuation. Returns byte length.
std::size_t closer_length(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (starts_with_at(s, pos, "\xE2\x80\x9D") || starts_with_at(s, pos, "\xE2\x80\x99")) return 3;
  return 0;
}

bool opens_sentence(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return true;
  if (c == '"' || c == '\'') return true;
  return starts_with_at(s, pos, "\xE2\x80\x9C") || starts_with_at(s, pos, "\xE2\x80\x98");
}

bool is_abbreviation(std::string_view text, std::size_t word_end,
                     const std::vector<std::string>& abbreviations) {
  std::size_t word_begin = word_end;
  while (word_begin > 0 && !is_space(text[word_begin - 1])) --word_begin;
  std::string_view word = text.substr(word_begin, word_end - word_begin);
  while (!word.empty() && (word.front() == '(' || word.front() == '"' || word.front() == '\'')) {
    word.remove_prefix(1);
  }
  return std::find(abbreviations.begin(), abbreviations.end(), word) != abbreviations.end();
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view text, const SplitOptions& options) {
  std::vector<Sentence> out;
  const auto emit = [&](std::size_t b, std::size_t e) {
    const std::string_view piece = trim(text.substr(b, e - b));
    if (piece.empty()) return;
    Sentence s;
    s.index = out.size();
    s.text = std::string(piece);
    s.begin = static_cast<std::size_t>(piece.data() - text.data());
    s.tokens = tokenize(piece);
    out.push_back(std::move(s));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    const std::size_t punct_end = j;
    while (j < text.size()) {
      const std::size_t n = closer_length(text, j);
      if (n == 0) break;
      j += n;
    }
    std::size_t k = j;
    while (k < text.size() && is_space(text[k])) ++k;
    const bool boundary = k > j && k < text.size() && opens_sentence(text, k) &&
                          !is_abbreviation(text, punct_end, options.abbreviations);
    if (boundary) {
      emit(start, j);
      start = k;
    }
    i = k > j ? k : j;
  }
  if (start < text.size()) emit(start, text.size());
  return out;
}

void segment_document(Document& doc, const SegmentOptions& options) {
  doc.sentences = split_sentences(doc.text, options.split);
  if (options.include_title && doc.title && !trim(*doc.title).empty()) {
    Sentence title;
    title.text = std::string(trim(*doc.title));
    title.tokens = tokenize(title.text);
    title.begin = std::string::npos;
    doc.sentences.insert(doc.sentences.begin(), std::move(title));
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) doc.sentences[i].index = i;
  }
}

void segment_corpus(LabeledCorpus& corpus, const SegmentOptions& options) {
  for (Document& doc : corpus.documents) segment_document(doc, options);
}

// ---------------------------------------------------------------------------
// Dataset statistics

std::vector<LabelStats> corpus_stats(const LabeledCorpus& corpus, SdConvention convention) {
  if (corpus.documents.empty()) throw InvalidArgument("corpus_stats: empty corpus");

  std::vector<LabelStats> rows;
  for (Label label : {Label::Fake, Label::Legitimate, Label::Unlabeled}) {
    std::vector<double> sentences;
    std::vector<double> entities;
    bool all_linked = true;
    for (const Document& doc : corpus.documents) {
      if (doc.label != label) continue;
      sentences.push_back(static_cast<double>(doc.sentences.size()));
      all_linked = all_linked && doc.entities_linked;
      std::set<std::string_view> distinct;
      for (const EntityMention& m : doc.entity_mentions) distinct.insert(m.entity_id);
      entities.push_back(static_cast<double>(distinct.size()));
    }
    if (sentences.empty()) continue;

    // A single article has SD 0 under either convention.
    const SdConvention conv = sentences.size() < 2 ? SdConvention::Population : convention;
    LabelStats row;
    row.label = label;
    row.article_count = sentences.size();
    row.sentences_per_article = mean_sd(sentences, conv);
    if (all_linked) row.entities_per_article = mean_sd(entities, conv);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace textcoherence
