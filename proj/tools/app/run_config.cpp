#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include "textcoherence/error.hpp"
#include "textcoherence/format.hpp"
#include "textcoherence/text.hpp"

namespace textcoherence::app {

namespace fs = std::filesystem;

std::map<Method, HistogramSpec> RunConfig::default_histograms() {
  return {{Method::Embedding, {0.0, 1.0, 20}},
          {Method::Esa, {0.0, 1.0, 20}},
          {Method::Entity, {0.0, 1.0, 20}}};
}

bool RunConfig::uses(Method m) const {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

const std::vector<SettingKey>& setting_keys() {
  static const std::vector<SettingKey> keys = {
      {"fake_csv", "CSV file(s) of fake articles (comma-separated)"},
      {"legit_csv", "CSV file(s) of legitimate articles (comma-separated)"},
      {"jsonl", "JSONL corpus file(s) with per-line labels (comma-separated)"},
      {"text_column", "CSV column holding article text"},
      {"title_column", "CSV column holding the title"},
      {"subject_column", "CSV column used by subject_filter"},
      {"subject_filter", "keep only rows whose subject is in this list"},
      {"methods", "coherence methods: embedding,esa,entity"},
      {"embeddings", "word vector table (word2vec text format)"},
      {"esa_index", "prebuilt ESA index file"},
      {"esa_kb", "knowledge base (directory of .txt files or JSONL) to build ESA from"},
      {"entities", "entity vector table (word2vec text format)"},
      {"aliases", "alias TSV (surface<TAB>entity_id)"},
      {"scores", "score CSV file(s) for compare/hist (comma-separated)"},
      {"hist_embedding", "histogram lower,upper,buckets for embedding scores"},
      {"hist_esa", "histogram lower,upper,buckets for ESA scores"},
      {"hist_entity", "histogram lower,upper,buckets for entity scores"},
      {"output_dir", "directory for all outputs"},
      {"include_title", "score the title as sentence 0", true},
      {"sd", "SD convention: population or sample"},
      {"esa_weighting", "ESA weighting: tf or tfidf"},
      {"esa_stopwords", "drop stopwords from the ESA knowledge base (true/false)"},
      {"esa_min_weight", "prune ESA weights below this value"},
      {"entity_multiset", "score entity mentions instead of distinct entities", true},
      {"entity_case_heuristic", "only link capitalized spans (true/false)"},
      {"token_semantics", "sentence means over token occurrences (multiset) or distinct tokens (set)"},
      {"ttest", "t-test variant: welch or pooled"},
      {"seed", "seed for any sampling"},
      {"workers", "scoring threads"},
  };
  return keys;
}

Settings read_config_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  Settings settings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config", path.string() + ": line " + std::to_string(line_no) +
                                      ": expected key = value");
    }
    settings.emplace_back(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
  }
  return settings;
}

Settings environment_settings() {
  static const std::pair<const char*, const char*> vars[] = {
      {"TEXTCOHERENCE_EMBEDDINGS", "embeddings"}, {"TEXTCOHERENCE_ESA_INDEX", "esa_index"},
      {"TEXTCOHERENCE_ESA_KB", "esa_kb"},         {"TEXTCOHERENCE_ENTITIES", "entities"},
      {"TEXTCOHERENCE_ALIASES", "aliases"}};
  Settings settings;
  for (const auto& [var, key] : vars) {
    if (const char* value = std::getenv(var); value && *value) settings.emplace_back(key, value);
  }
  return settings;
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const std::string_view item =
        trim(std::string_view(value).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = ascii_lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "not a number: '" + value + "'");
  return out;
}

HistogramSpec parse_histogram(const std::string& key, const std::string& value) {
  const auto parts = split_list(value);
  if (parts.size() != 3) throw ConfigError(key, "expected lower,upper,buckets");
  HistogramSpec spec;
  spec.lower = parse_number<double>(key, parts[0]);
  spec.upper = parse_number<double>(key, parts[1]);
  spec.bucket_count = parse_number<std::size_t>(key, parts[2]);
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(key, e.what());
  }
  return spec;
}

void set_corpora(RunConfig& config, CorpusFormat format, Label label, const std::string& value) {
  std::erase_if(config.corpora, [&](const CorpusInput& c) {
    return c.format == format && (format == CorpusFormat::Jsonl || c.label == label);
  });
  for (const std::string& p : split_list(value)) config.corpora.push_back({p, format, label});
}

std::optional<fs::path> optional_path(const std::string& value) {
  if (value.empty()) return std::nullopt;
  return fs::path(value);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

}  // namespace

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "fake_csv") {
    set_corpora(config, CorpusFormat::Csv, Label::Fake, value);
  } else if (key == "legit_csv") {
    set_corpora(config, CorpusFormat::Csv, Label::Legitimate, value);
  } else if (key == "jsonl") {
    set_corpora(config, CorpusFormat::Jsonl, Label::Unlabeled, value);
  } else if (key == "text_column") {
    if (value.empty()) throw ConfigError(key, "must not be empty");
    config.csv.text_column = value;
  } else if (key == "title_column") {
    config.csv.title_column = value.empty() ? std::nullopt : std::optional<std::string>(value);
  } else if (key == "subject_column") {
    config.csv.subject_column = value.empty() ? std::nullopt : std::optional<std::string>(value);
  } else if (key == "subject_filter") {
    config.csv.subject_filter = split_list(value);
  } else if (key == "methods") {
    config.methods.clear();
    for (const std::string& name : split_list(value)) {
      const auto m = parse_method(name);
      if (!m) throw ConfigError(key, "unknown method '" + name + "'");
      if (!config.uses(*m)) config.methods.push_back(*m);
    }
    if (config.methods.empty()) throw ConfigError(key, "select at least one method");
    std::sort(config.methods.begin(), config.methods.end());
  } else if (key == "embeddings") {
    config.embeddings = optional_path(value);
  } else if (key == "esa_index") {
    config.esa_index = optional_path(value);
  } else if (key == "esa_kb") {
    config.esa_kb = optional_path(value);
  } else if (key == "entities") {
    config.entities = optional_path(value);
  } else if (key == "aliases") {
    config.aliases = optional_path(value);
  } else if (key == "scores") {
    config.score_files.clear();
    for (const std::string& p : split_list(value)) config.score_files.emplace_back(p);
  } else if (key == "hist_embedding") {
    config.histograms[Method::Embedding] = parse_histogram(key, value);
  } else if (key == "hist_esa") {
    config.histograms[Method::Esa] = parse_histogram(key, value);
  } else if (key == "hist_entity") {
    config.histograms[Method::Entity] = parse_histogram(key, value);
  } else if (key == "output_dir") {
    if (value.empty()) throw ConfigError(key, "must not be empty");
    config.output_dir = value;
  } else if (key == "include_title") {
    config.include_title = parse_bool(key, value);
  } else if (key == "sd") {
    if (value == "population") {
      config.sd = SdConvention::Population;
    } else if (value == "sample") {
      config.sd = SdConvention::Sample;
    } else {
      throw ConfigError(key, "expected population or sample");
    }
  } else if (key == "esa_weighting") {
    const auto w = parse_esa_weighting(value);
    if (!w) throw ConfigError(key, "expected tf or tfidf");
    config.esa.weighting = *w;
  } else if (key == "esa_stopwords") {
    config.esa.remove_stopwords = parse_bool(key, value);
  } else if (key == "esa_min_weight") {
    const double w = parse_number<double>(key, value);
    if (!(w >= 0.0)) throw ConfigError(key, "must be non-negative");
    config.esa.min_weight = w;
  } else if (key == "entity_multiset") {
    config.entity_multiset = parse_bool(key, value);
  } else if (key == "entity_case_heuristic") {
    config.entity_case_heuristic = parse_bool(key, value);
  } else if (key == "token_semantics") {
    if (value == "multiset") {
      config.token_semantics = TokenSemantics::Multiset;
    } else if (value == "set") {
      config.token_semantics = TokenSemantics::Set;
    } else {
      throw ConfigError(key, "expected multiset or set");
    }
  } else if (key == "ttest") {
    if (value == "welch") {
      config.ttest = TTestVariant::Welch;
    } else if (value == "pooled") {
      config.ttest = TTestVariant::Pooled;
    } else {
      throw ConfigError(key, "expected welch or pooled");
    }
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "workers") {
    const auto w = parse_number<std::size_t>(key, value);
    if (w == 0) throw ConfigError(key, "must be at least 1");
    config.workers = w;
  } else {
    throw ConfigError(key, "unknown setting");
  }
}

void apply_settings(RunConfig& config, const Settings& settings) {
  for (const auto& [key, value] : settings) apply_setting(config, key, value);
}

void validate(const RunConfig& config, Requirement requirement) {
  const auto require_file = [](const char* field, const std::optional<fs::path>& p) {
    if (p && !fs::exists(*p)) throw ConfigError(field, "no such file: " + p->string());
  };
  for (const CorpusInput& c : config.corpora) {
    const char* field = c.format == CorpusFormat::Jsonl ? "jsonl"
                        : c.label == Label::Fake       ? "fake_csv"
                                                       : "legit_csv";
    if (!fs::is_regular_file(c.path)) throw ConfigError(field, "no such file: " + c.path.string());
  }
  for (const fs::path& p : config.score_files) {
    if (!fs::is_regular_file(p)) throw ConfigError("scores", "no such file: " + p.string());
  }
  require_file("embeddings", config.embeddings);
  require_file("esa_index", config.esa_index);
  require_file("esa_kb", config.esa_kb);
  require_file("entities", config.entities);
  require_file("aliases", config.aliases);

  if (requirement == Requirement::Corpus && config.corpora.empty()) {
    throw ConfigError("fake_csv", "no corpus given (set fake_csv/legit_csv or jsonl)");
  }
  if (requirement == Requirement::CorpusOrScores && config.corpora.empty() &&
      config.score_files.empty()) {
    throw ConfigError("scores", "give score files or a corpus to score");
  }
  if (config.methods.empty()) throw ConfigError("methods", "select at least one method");

  // Resources are only needed when scoring from a corpus.
  const bool scoring = requirement == Requirement::Corpus ||
                       (requirement == Requirement::CorpusOrScores && config.score_files.empty());
  if (scoring) {
    if (config.uses(Method::Embedding) && !config.embeddings) {
      throw ConfigError("embeddings", "required by method 'embedding'");
    }
    if (config.uses(Method::Esa) && !config.esa_index && !config.esa_kb) {
      throw ConfigError("esa_index", "method 'esa' needs esa_index or esa_kb");
    }
    if (config.uses(Method::Entity) && !config.entities) {
      throw ConfigError("entities", "required by method 'entity'");
    }
  }
  if (config.aliases && !config.entities) throw ConfigError("aliases", "needs an entity table");
  for (const auto& [method, spec] : config.histograms) {
    try {
      spec.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError("hist_" + std::string(to_string(method)), e.what());
    }
  }
  if (config.workers == 0) throw ConfigError("workers", "must be at least 1");
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto paths_for = [&](CorpusFormat format, Label label) {
    std::vector<std::string> items;
    for (const CorpusInput& c : config.corpora) {
      if (c.format == format && (format == CorpusFormat::Jsonl || c.label == label)) {
        items.push_back(c.path.generic_string());
      }
    }
    return join(items);
  };
  const auto opt = [](const std::optional<fs::path>& p) { return p ? p->generic_string() : std::string(); };
  const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };

  std::vector<std::string> methods;
  for (Method m : config.methods) methods.emplace_back(to_string(m));
  std::vector<std::string> scores;
  for (const fs::path& p : config.score_files) scores.push_back(p.generic_string());

  out.emplace_back("fake_csv", paths_for(CorpusFormat::Csv, Label::Fake));
  out.emplace_back("legit_csv", paths_for(CorpusFormat::Csv, Label::Legitimate));
  out.emplace_back("jsonl", paths_for(CorpusFormat::Jsonl, Label::Unlabeled));
  out.emplace_back("text_column", config.csv.text_column);
  out.emplace_back("title_column", config.csv.title_column.value_or(""));
  out.emplace_back("subject_column", config.csv.subject_column.value_or(""));
  out.emplace_back("subject_filter", join(config.csv.subject_filter));
  out.emplace_back("methods", join(methods));
  out.emplace_back("embeddings", opt(config.embeddings));
  out.emplace_back("esa_index", opt(config.esa_index));
  out.emplace_back("esa_kb", opt(config.esa_kb));
  out.emplace_back("entities", opt(config.entities));
  out.emplace_back("aliases", opt(config.aliases));
  out.emplace_back("scores", join(scores));
  for (const auto& [method, spec] : config.histograms) {
    out.emplace_back("hist_" + std::string(to_string(method)),
                     format_roundtrip(spec.lower) + "," + format_roundtrip(spec.upper) + "," +
                         std::to_string(spec.bucket_count));
  }
  out.emplace_back("include_title", flag(config.include_title));
  out.emplace_back("sd", config.sd == SdConvention::Population ? "population" : "sample");
  out.emplace_back("esa_weighting", std::string(to_string(config.esa.weighting)));
  out.emplace_back("esa_stopwords", flag(config.esa.remove_stopwords));
  out.emplace_back("esa_min_weight", format_roundtrip(config.esa.min_weight));
  out.emplace_back("entity_multiset", flag(config.entity_multiset));
  out.emplace_back("entity_case_heuristic", flag(config.entity_case_heuristic));
  out.emplace_back("token_semantics",
                   config.token_semantics == TokenSemantics::Multiset ? "multiset" : "set");
  out.emplace_back("ttest", config.ttest == TTestVariant::Welch ? "welch" : "pooled");
  out.emplace_back("seed", std::to_string(config.seed));
  return out;
}

}  // namespace textcoherence::app
