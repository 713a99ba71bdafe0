#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textcoherence/coherence.hpp"
#include "textcoherence/corpus.hpp"
#include "textcoherence/esa.hpp"
#include "textcoherence/stats.hpp"

namespace textcoherence::app {

enum class CorpusFormat { Csv, Jsonl };

struct CorpusInput {
  std::filesystem::path path;
  CorpusFormat format = CorpusFormat::Csv;
  Label label = Label::Unlabeled;  // CSV only; JSONL carries labels per line
};

struct RunConfig {
  std::vector<CorpusInput> corpora;
  CsvMapping csv;

  std::vector<Method> methods = {Method::Embedding, Method::Esa, Method::Entity};
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> esa_index;
  std::optional<std::filesystem::path> esa_kb;
  std::optional<std::filesystem::path> entities;
  std::optional<std::filesystem::path> aliases;
  std::vector<std::filesystem::path> score_files;

  std::map<Method, HistogramSpec> histograms = default_histograms();
  std::filesystem::path output_dir = "out";

  bool include_title = false;
  SdConvention sd = SdConvention::Population;
  EsaBuildOptions esa;
  bool entity_multiset = false;
  bool entity_case_heuristic = true;
  TokenSemantics token_semantics = TokenSemantics::Multiset;
  TTestVariant ttest = TTestVariant::Welch;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  static std::map<Method, HistogramSpec> default_histograms();

  bool uses(Method m) const;
};

// Flat "key = value" settings, in the order they were applied.
using Settings = std::vector<std::pair<std::string, std::string>>;

// Reads a key-value config file ('#' starts a comment). Throws ConfigError
// naming the line on syntax errors.
Settings read_config_file(const std::filesystem::path& path);

// Environment overrides for resource paths: TEXTCOHERENCE_EMBEDDINGS,
// TEXTCOHERENCE_ESA_INDEX, TEXTCOHERENCE_ESA_KB, TEXTCOHERENCE_ENTITIES,
// TEXTCOHERENCE_ALIASES.
Settings environment_settings();

// Applies one setting. Throws ConfigError naming the key on unknown keys and
// unparsable values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
void apply_settings(RunConfig& config, const Settings& settings);

enum class Requirement { Corpus, CorpusOrScores, None };

// Cross-field checks and file existence; runs before any input is read.
void validate(const RunConfig& config, Requirement requirement);

// Canonical key = value listing of everything that can change outputs.
// Worker count and output directory are left out.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

// Every recognized key, for CLI flag generation.
struct SettingKey {
  std::string key;
  std::string help;
  bool is_flag = false;  // boolean switch on the command line
};
const std::vector<SettingKey>& setting_keys();

}  // namespace textcoherence::app
