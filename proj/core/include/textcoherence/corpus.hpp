#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "textcoherence/descriptive.hpp"

namespace textcoherence {

enum class Label { Fake, Legitimate, Unlabeled };

std::string_view to_string(Label label);
// Accepts "fake" and "legitimate" only; anything else is std::nullopt.
std::optional<Label> parse_label(std::string_view s);

struct Sentence {
  std::size_t index = 0;
  std::string text;
  std::vector<std::string> tokens;
  // Byte offset of `text` inside Document::text, or npos for a title sentence.
  std::size_t begin = std::string::npos;

  bool from_title() const noexcept { return begin == std::string::npos; }
};

// A gazetteer match. Offsets index Document::text, or Document::title when
// `in_title` is set.
struct EntityMention {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string entity_id;
  bool in_title = false;
};

struct Document {
  std::string id;
  Label label = Label::Unlabeled;
  std::optional<std::string> title;
  std::string text;
  std::vector<Sentence> sentences;
  std::vector<EntityMention> entity_mentions;
  bool entities_linked = false;

  // Raw text, title and label equality; derived fields are ignored.
  bool same_record(const Document& other) const;
};

struct LabeledCorpus {
  std::vector<Document> documents;
  std::string source;

  std::size_t count(Label label) const;
  std::vector<const Document*> with_label(Label label) const;
};

// Per-file ingestion diagnostics.
struct LoadIssue {
  std::size_t line = 0;  // row number for CSV, line number for JSONL
  std::string message;
};

struct LoadReport {
  std::size_t records = 0;        // data records seen (header excluded)
  std::size_t skipped_empty = 0;  // empty text field
  std::size_t skipped_filtered = 0;
  std::vector<LoadIssue> malformed;

  std::size_t skipped() const { return skipped_empty + skipped_filtered + malformed.size(); }
};

struct CsvMapping {
  std::string text_column = "text";
  std::optional<std::string> title_column = "title";
  std::optional<std::string> subject_column;
  // Rows are kept only if their subject matches one of these (when non-empty).
  std::vector<std::string> subject_filter;
};

// Rows become documents with id "<filestem>-<rownum>" (1-based data row).
// Throws DataError on a missing file, missing mapped column or invalid UTF-8.
LabeledCorpus load_csv(const std::filesystem::path& path, const CsvMapping& mapping,
                       Label label, LoadReport* report = nullptr);

// Throws DataError on duplicate ids, unknown labels and malformed lines; the
// message names the offending line.
LabeledCorpus load_jsonl(const std::filesystem::path& path);
LabeledCorpus read_jsonl(std::istream& in, std::string source);

// Keys are emitted in the fixed order id, label, title, text.
void write_jsonl(const LabeledCorpus& corpus, std::ostream& out);

// Appends `other` into `into`; throws DataError on an id collision.
void merge_corpus(LabeledCorpus& into, LabeledCorpus other);

struct SplitOptions {
  std::vector<std::string> abbreviations = default_abbreviations();

  static std::vector<std::string> default_abbreviations();
};

std::vector<Sentence> split_sentences(std::string_view text, const SplitOptions& options = {});

struct SegmentOptions {
  SplitOptions split;
  bool include_title = false;
};

void segment_document(Document& doc, const SegmentOptions& options = {});
void segment_corpus(LabeledCorpus& corpus, const SegmentOptions& options = {});

struct LabelStats {
  Label label = Label::Unlabeled;
  std::size_t article_count = 0;
  MeanSd sentences_per_article;
  std::optional<MeanSd> entities_per_article;  // absent unless every doc was linked
};

// One row per label present, ordered Fake, Legitimate, Unlabeled.
// Entities per article counts distinct linked entity ids.
std::vector<LabelStats> corpus_stats(const LabeledCorpus& corpus,
                                     SdConvention convention = SdConvention::Population);

}  // namespace textcoherence
