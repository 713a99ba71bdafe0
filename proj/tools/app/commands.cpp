#include "commands.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "textcoherence/corpus.hpp"
#include "textcoherence/error.hpp"
#include "textcoherence/format.hpp"

namespace textcoherence::app {

namespace fs = std::filesystem;

namespace {

fs::path write_output(const fs::path& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("failed writing " + path.string());
  return path;
}

std::string_view display_name(Label label) {
  switch (label) {
    case Label::Fake:
      return "Fake";
    case Label::Legitimate:
      return "Legitimate";
    case Label::Unlabeled:
      return "Unlabeled";
  }
  return "Unlabeled";
}

std::string_view column_title(Method method) {
  switch (method) {
    case Method::Embedding:
      return "Word Embedding Coherence Mean (SD)";
    case Method::Esa:
      return "ESA Coherence Mean (SD)";
    case Method::Entity:
      return "Entity Linking Coherence Mean (SD)";
  }
  return "";
}

// Scores grouped by method, from score files or by scoring the corpus.
std::map<Method, std::vector<CoherenceScore>> collect_scores(const RunConfig& config, Pipeline& pipeline,
                                                             std::ostream& log) {
  std::map<Method, std::vector<CoherenceScore>> by_method;
  if (!config.score_files.empty()) {
    for (const fs::path& p : config.score_files) {
      for (CoherenceScore& s : load_scores_csv(p)) {
        if (config.uses(s.method)) by_method[s.method].push_back(std::move(s));
      }
    }
    for (Method m : config.methods) {
      if (!by_method.contains(m)) log << "warning: no " << to_string(m) << " scores in the given files\n";
    }
    return by_method;
  }
  for (Method m : config.methods) by_method[m] = pipeline.scores(m);
  return by_method;
}

std::vector<MethodSummary> summarize(const std::map<Method, std::vector<CoherenceScore>>& by_method,
                                     const RunConfig& config) {
  std::vector<MethodSummary> rows;
  const CompareOptions options{config.sd, config.ttest};
  for (const auto& [method, scores] : by_method) {
    std::vector<CoherenceScore> fake;
    std::vector<CoherenceScore> legit;
    for (const CoherenceScore& s : scores) {
      if (s.label == Label::Fake) fake.push_back(s);
      if (s.label == Label::Legitimate) legit.push_back(s);
    }
    if (fake.empty() || legit.empty()) {
      throw InvalidArgument("compare: " + std::string(to_string(method)) +
                            " scores cover a single label; both fake and legitimate are required");
    }
    rows.push_back({method, compare(fake, legit, options)});
  }
  return rows;
}

Histogram histogram_for(Method method, const std::vector<CoherenceScore>& scores, const RunConfig& config) {
  std::vector<std::pair<Label, std::vector<double>>> groups = {
      {Label::Fake, {}}, {Label::Legitimate, {}}};
  for (const CoherenceScore& s : scores) {
    if (!s.ok()) continue;
    if (s.label == Label::Fake) groups[0].second.push_back(s.value);
    if (s.label == Label::Legitimate) groups[1].second.push_back(s.value);
  }
  return build_histogram(groups, config.histograms.at(method));
}

std::string render_scores(const std::vector<CoherenceScore>& scores) {
  std::ostringstream out;
  write_scores_csv(scores, out);
  return out.str();
}

void log_undefined(Method method, const std::vector<CoherenceScore>& scores, std::ostream& log) {
  const UndefinedCounts u = count_undefined(scores);
  if (u.fake + u.legitimate + u.unlabeled == 0) return;
  log << to_string(method) << ": undefined scores (fewer than two usable elements): fake=" << u.fake
      << " legitimate=" << u.legitimate;
  if (u.unlabeled) log << " unlabeled=" << u.unlabeled;
  log << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(const RunConfig& config, std::ostream& log) : config_(config), log_(log) {}

const LabeledCorpus& Pipeline::corpus() {
  if (corpus_) return *corpus_;
  LabeledCorpus corpus;
  for (const CorpusInput& input : config_.corpora) {
    LabeledCorpus part;
    if (input.format == CorpusFormat::Csv) {
      LoadReport report;
      part = load_csv(input.path, config_.csv, input.label, &report);
      for (const LoadIssue& issue : report.malformed) {
        log_ << "warning: " << input.path.string() << ": row " << issue.line << ": " << issue.message
             << " (skipped)\n";
      }
      if (report.skipped_empty) {
        log_ << input.path.string() << ": skipped " << report.skipped_empty << " rows with empty text\n";
      }
      if (report.skipped_filtered) {
        log_ << input.path.string() << ": " << report.skipped_filtered << " rows outside subject_filter\n";
      }
    } else {
      part = load_jsonl(input.path);
    }
    merge_corpus(corpus, std::move(part));
  }
  if (corpus.documents.empty()) throw DataError("empty corpus: no documents were loaded");

  segment_corpus(corpus, SegmentOptions{SplitOptions{}, config_.include_title});
  if (config_.entities) {
    Gazetteer gazetteer = build_gazetteer(entity_table());
    if (config_.aliases) load_aliases(gazetteer, *config_.aliases, entity_table());
    link_corpus(corpus, gazetteer, ExtractOptions{config_.entity_case_heuristic});
  }
  log_ << "loaded " << corpus.documents.size() << " documents (fake=" << corpus.count(Label::Fake)
       << ", legitimate=" << corpus.count(Label::Legitimate) << ")\n";
  corpus_ = std::move(corpus);
  return *corpus_;
}

bool Pipeline::entities_linked() { return config_.entities.has_value(); }

const EmbeddingTable& Pipeline::embeddings() {
  if (!embeddings_) {
    if (!config_.embeddings) throw ConfigError("embeddings", "required by method 'embedding'");
    VectorLoadReport report;
    embeddings_ = std::make_unique<EmbeddingTable>(load_vectors_text(*config_.embeddings, &report));
    if (report.duplicate_tokens) {
      log_ << "warning: " << config_.embeddings->string() << ": " << report.duplicate_tokens
           << " duplicate tokens overwritten\n";
    }
  }
  return *embeddings_;
}

const EsaIndex& Pipeline::esa_index() {
  if (!esa_) {
    if (config_.esa_index) {
      esa_ = std::make_unique<EsaIndex>(load_esa_index(*config_.esa_index));
    } else if (config_.esa_kb) {
      EsaBuildReport report;
      const auto kb = load_kb(*config_.esa_kb);
      esa_ = std::make_unique<EsaIndex>(build_esa_index(kb, config_.esa, &report));
      for (const std::string& title : report.skipped_articles) {
        log_ << "warning: knowledge-base article '" << title << "' has no tokens (skipped)\n";
      }
    } else {
      throw ConfigError("esa_index", "method 'esa' needs esa_index or esa_kb");
    }
  }
  return *esa_;
}

const EmbeddingTable& Pipeline::entity_table() {
  if (!entities_) {
    if (!config_.entities) throw ConfigError("entities", "required by method 'entity'");
    VectorLoadReport report;
    entities_ = std::make_unique<EmbeddingTable>(load_vectors_text(*config_.entities, &report));
    if (report.duplicate_tokens) {
      log_ << "warning: " << config_.entities->string() << ": " << report.duplicate_tokens
           << " duplicate ids overwritten\n";
    }
  }
  return *entities_;
}

Resources Pipeline::resources(Method method) {
  Resources r;
  switch (method) {
    case Method::Embedding:
      r.embeddings = &embeddings();
      break;
    case Method::Esa:
      r.esa = &esa_index();
      break;
    case Method::Entity:
      r.entities = &entity_table();
      break;
  }
  return r;
}

const std::vector<CoherenceScore>& Pipeline::scores(Method method) {
  if (const auto it = scores_.find(method); it != scores_.end()) return it->second;
  const Resources r = resources(method);
  const LabeledCorpus& docs = corpus();
  const ScoringOptions options{config_.token_semantics, config_.entity_multiset};
  auto scores = score_corpus(docs, method, r, options, config_.workers);
  log_undefined(method, scores, log_);
  return scores_.emplace(method, std::move(scores)).first->second;
}

// ---------------------------------------------------------------------------
// Rendering

std::string format_sd(double sd) {
  if (sd != 0.0 && sd < 1e-3) return format_scientific(sd, 2);
  return format_fixed(sd, 4);
}

std::string format_p(double p, bool degenerate) {
  if (degenerate) return "0 (degenerate)";
  if (p >= 1e-3) return format_fixed(p, 6);
  return format_scientific(p, 2);
}

std::string render_config_block(const RunConfig& config) {
  std::string out = "```\n";
  for (const auto& [key, value] : describe(config)) out += key + " = " + value + "\n";
  out += "```\n";
  return out;
}

std::string render_stats_csv(const std::vector<LabelStats>& rows) {
  std::string out = "label,articles,sentences_mean,sentences_sd,entities_mean,entities_sd\n";
  for (const LabelStats& r : rows) {
    out += std::string(to_string(r.label)) + "," + std::to_string(r.article_count) + "," +
           format_fixed(r.sentences_per_article.mean, 6) + "," + format_fixed(r.sentences_per_article.sd, 6) + ",";
    if (r.entities_per_article) {
      out += format_fixed(r.entities_per_article->mean, 6) + "," + format_fixed(r.entities_per_article->sd, 6);
    } else {
      out += ",";
    }
    out += "\n";
  }
  return out;
}

namespace {

std::string stats_table(const std::vector<LabelStats>& rows) {
  std::string out =
      "| Category | #Articles | #Sentences Per Article Mean (SD) | #Entities Per Article Mean (SD) |\n"
      "|---|---:|---|---|\n";
  for (const LabelStats& r : rows) {
    out += "| " + std::string(display_name(r.label)) + " | " + std::to_string(r.article_count) + " | " +
           format_fixed(r.sentences_per_article.mean, 2) + " (" + format_fixed(r.sentences_per_article.sd, 2) +
           ") | ";
    if (r.entities_per_article) {
      out += format_fixed(r.entities_per_article->mean, 2) + " (" +
             format_fixed(r.entities_per_article->sd, 2) + ")";
    } else {
      out += "n/a";
    }
    out += " |\n";
  }
  return out;
}

std::string summary_table(const std::vector<MethodSummary>& rows) {
  std::string header = "| Category |";
  std::string rule = "|---|";
  std::string fake = "| Fake |";
  std::string legit = "| Legitimate |";
  std::string diff = "| Difference in % |";
  std::string pval = "| p-value |";
  std::string log10 = "| log10(p) |";
  std::string excluded = "| Excluded (fake / legitimate) |";
  for (const MethodSummary& row : rows) {
    const ComparisonSummary& s = row.summary;
    header += " " + std::string(column_title(row.method)) + " |";
    rule += "---|";
    fake += " " + format_fixed(s.fake.mean, 6) + " (" + format_sd(s.fake.sd) + ") |";
    legit += " " + format_fixed(s.legitimate.mean, 6) + " (" + format_sd(s.legitimate.sd) + ") |";
    diff += " " + (s.percent_difference ? format_fixed(*s.percent_difference, 2) + "%" : std::string("n/a")) + " |";
    const bool significant = s.test.p_two_tailed < 0.05;
    const std::string p = format_p(s.test.p_two_tailed, s.test.degenerate);
    pval += " " + (significant ? "**" + p + "**" : p) + " |";
    log10 += " " + format_fixed(s.test.log10_p, 4) + " |";
    excluded += " " + std::to_string(s.fake.excluded) + " / " + std::to_string(s.legitimate.excluded) + " |";
  }
  return header + "\n" + rule + "\n" + fake + "\n" + legit + "\n" + diff + "\n" + pval + "\n" + log10 + "\n" +
         excluded + "\n";
}

std::string test_name(TTestVariant v) { return v == TTestVariant::Welch ? "welch" : "pooled"; }

}  // namespace

std::string render_stats_markdown(const std::vector<LabelStats>& rows, const RunConfig& config) {
  return "# Dataset statistics\n\n" + stats_table(rows) + "\nSD convention: " +
         (config.sd == SdConvention::Population ? "population" : "sample") + ".\n\n## Configuration\n\n" +
         render_config_block(config);
}

std::string render_summary_csv(const std::vector<MethodSummary>& rows) {
  std::string out =
      "method,fake_n,fake_mean,fake_sd,fake_excluded,legit_n,legit_mean,legit_sd,legit_excluded,"
      "percent_difference,t_statistic,dof,p_value,log10_p,test,degenerate\n";
  for (const MethodSummary& row : rows) {
    const ComparisonSummary& s = row.summary;
    out += std::string(to_string(row.method)) + "," + std::to_string(s.fake.n) + "," + format_fixed(s.fake.mean, 6) +
           "," + format_fixed(s.fake.sd, 6) + "," + std::to_string(s.fake.excluded) + "," +
           std::to_string(s.legitimate.n) + "," + format_fixed(s.legitimate.mean, 6) + "," +
           format_fixed(s.legitimate.sd, 6) + "," + std::to_string(s.legitimate.excluded) + "," +
           (s.percent_difference ? format_fixed(*s.percent_difference, 2) : std::string()) + "," +
           format_fixed(s.test.t, 6) + "," + format_fixed(s.test.dof, 6) + "," +
           format_scientific(s.test.p_two_tailed, 5) + "," + format_fixed(s.test.log10_p, 6) + "," +
           test_name(s.variant) + "," + (s.test.degenerate ? "true" : "false") + "\n";
  }
  return out;
}

std::string render_summary_markdown(const std::vector<MethodSummary>& rows, const RunConfig& config) {
  return "# Coherence results summary\n\n" + summary_table(rows) + "\nMeans and SDs over ok scores (" +
         (config.sd == SdConvention::Population ? "population" : "sample") + " SD); p-values from a two-tailed " +
         test_name(config.ttest) + " t-test; bold marks p < 0.05.\n\n## Configuration\n\n" +
         render_config_block(config);
}

std::string render_histogram_tsv(Method method, const Histogram& histogram, std::ostream& log) {
  const HistogramSpec& spec = histogram.spec;
  const HistogramColumn* fake = histogram.column(Label::Fake);
  const HistogramColumn* legit = histogram.column(Label::Legitimate);
  if (!fake) log << "warning: " << to_string(method) << ": no fake scores; fake_pct column omitted\n";
  if (!legit) log << "warning: " << to_string(method) << ": no legitimate scores; legit_pct column omitted\n";

  std::string out = "# method=" + std::string(to_string(method)) + "\n";
  out += "# lower=" + format_fixed(spec.lower, 6) + " upper=" + format_fixed(spec.upper, 6) +
         " buckets=" + std::to_string(spec.bucket_count) + "\n";
  for (const HistogramColumn* col : {fake, legit}) {
    if (!col) continue;
    out += "# " + std::string(to_string(col->label)) + " n=" + std::to_string(col->n) +
           " clamped_below=" + std::to_string(col->clamped_below) +
           " clamped_above=" + std::to_string(col->clamped_above) + "\n";
  }
  out += "bucket_low\tbucket_high";
  if (fake) out += "\tfake_pct";
  if (legit) out += "\tlegit_pct";
  out += "\n";
  for (std::size_t i = 0; i < spec.bucket_count; ++i) {
    out += format_fixed(spec.edge(i), 6) + "\t" + format_fixed(spec.edge(i + 1), 6);
    if (fake) out += "\t" + format_fixed(fake->percentages[i], 6);
    if (legit) out += "\t" + format_fixed(legit->percentages[i], 6);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

std::vector<fs::path> cmd_stats(const RunConfig& config, std::ostream& log) {
  validate(config, Requirement::None);
  if (config.corpora.empty()) throw ConfigError("fake_csv", "no corpus given (set fake_csv/legit_csv or jsonl)");
  Pipeline pipeline(config, log);
  const auto rows = corpus_stats(pipeline.corpus(), config.sd);
  return {write_output(config.output_dir, "dataset_stats.csv", render_stats_csv(rows)),
          write_output(config.output_dir, "dataset_stats.md", render_stats_markdown(rows, config))};
}

std::vector<fs::path> cmd_score(const RunConfig& config, std::ostream& log) {
  validate(config, Requirement::Corpus);
  Pipeline pipeline(config, log);
  std::vector<fs::path> written;
  for (Method m : config.methods) {
    written.push_back(write_output(config.output_dir, "scores_" + std::string(to_string(m)) + ".csv",
                                   render_scores(pipeline.scores(m))));
  }
  return written;
}

std::vector<fs::path> cmd_compare(const RunConfig& config, std::ostream& log) {
  validate(config, Requirement::CorpusOrScores);
  Pipeline pipeline(config, log);
  const auto rows = summarize(collect_scores(config, pipeline, log), config);
  return {write_output(config.output_dir, "summary.csv", render_summary_csv(rows)),
          write_output(config.output_dir, "summary.md", render_summary_markdown(rows, config))};
}

std::vector<fs::path> cmd_hist(const RunConfig& config, std::ostream& log) {
  validate(config, Requirement::CorpusOrScores);
  Pipeline pipeline(config, log);
  std::vector<fs::path> written;
  for (const auto& [method, scores] : collect_scores(config, pipeline, log)) {
    const Histogram h = histogram_for(method, scores, config);
    written.push_back(write_output(config.output_dir, "hist_" + std::string(to_string(method)) + ".tsv",
                                   render_histogram_tsv(method, h, log)));
  }
  return written;
}

std::vector<fs::path> cmd_build_esa_index(const fs::path& kb, const fs::path& out,
                                          const EsaBuildOptions& options, std::ostream& log) {
  if (kb.empty()) throw ConfigError("esa_kb", "knowledge base path required");
  if (!fs::exists(kb)) throw ConfigError("esa_kb", "no such file or directory: " + kb.string());
  if (out.empty()) throw ConfigError("output", "index output path required");
  EsaBuildReport report;
  const EsaIndex index = build_esa_index(load_kb(kb), options, &report);
  for (const std::string& title : report.skipped_articles) {
    log << "warning: knowledge-base article '" << title << "' has no tokens (skipped)\n";
  }
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_esa_index(index, out);
  log << "ESA index: " << index.doc_count() << " concepts, " << index.vocabulary_size() << " tokens, weighting "
      << to_string(index.weighting()) << '\n';
  return {out};
}

std::vector<fs::path> cmd_report(const RunConfig& config, std::ostream& log) {
  validate(config, Requirement::Corpus);
  Pipeline pipeline(config, log);
  std::vector<fs::path> written;

  const auto stats_rows = corpus_stats(pipeline.corpus(), config.sd);
  written.push_back(write_output(config.output_dir, "dataset_stats.csv", render_stats_csv(stats_rows)));
  written.push_back(
      write_output(config.output_dir, "dataset_stats.md", render_stats_markdown(stats_rows, config)));

  std::map<Method, std::vector<CoherenceScore>> by_method;
  for (Method m : config.methods) {
    by_method[m] = pipeline.scores(m);
    written.push_back(write_output(config.output_dir, "scores_" + std::string(to_string(m)) + ".csv",
                                   render_scores(by_method[m])));
  }
  const auto summary = summarize(by_method, config);
  written.push_back(write_output(config.output_dir, "summary.csv", render_summary_csv(summary)));
  written.push_back(write_output(config.output_dir, "summary.md", render_summary_markdown(summary, config)));

  std::string hist_md;
  for (const auto& [method, scores] : by_method) {
    const Histogram h = histogram_for(method, scores, config);
    const std::string name = "hist_" + std::string(to_string(method)) + ".tsv";
    written.push_back(write_output(config.output_dir, name, render_histogram_tsv(method, h, log)));

    hist_md += "### " + std::string(column_title(method)).substr(0, column_title(method).find(" Mean")) +
               " (`" + name + "`)\n\n| Range | Fake % | Legitimate % |\n|---|---:|---:|\n";
    const HistogramColumn* fake = h.column(Label::Fake);
    const HistogramColumn* legit = h.column(Label::Legitimate);
    for (std::size_t i = 0; i < h.spec.bucket_count; ++i) {
      hist_md += "| " + format_fixed(h.spec.edge(i), 3) + " - " + format_fixed(h.spec.edge(i + 1), 3) + " | " +
                 (fake ? format_fixed(fake->percentages[i], 2) : std::string("n/a")) + " | " +
                 (legit ? format_fixed(legit->percentages[i], 2) : std::string("n/a")) + " |\n";
    }
    hist_md += "\n";
  }

  std::string undefined;
  for (const auto& [method, scores] : by_method) {
    const UndefinedCounts u = count_undefined(scores);
    undefined += "| " + std::string(to_string(method)) + " | " + std::to_string(u.fake) + " | " +
                 std::to_string(u.legitimate) + " |\n";
  }

  const std::string report =
      "# Coherence report\n\n## Dataset statistics\n\n" + stats_table(stats_rows) +
      "\n## Coherence results\n\n" + summary_table(summary) +
      "\n## Undefined scores\n\nDocuments with fewer than two usable elements are excluded from the statistics.\n\n"
      "| Method | Fake | Legitimate |\n|---|---:|---:|\n" +
      undefined + "\n## Histograms\n\n" + hist_md + "## Configuration\n\n" + render_config_block(config);
  written.push_back(write_output(config.output_dir, "report.md", report));
  return written;
}

}  // namespace textcoherence::app
