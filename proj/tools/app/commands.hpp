#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "run_config.hpp"
#include "textcoherence/coherence.hpp"
#include "textcoherence/embeddings.hpp"
#include "textcoherence/entitylink.hpp"
#include "textcoherence/esa.hpp"
#include "textcoherence/stats.hpp"

namespace textcoherence::app {

// Loads inputs on first use and caches them for the lifetime of one command.
class Pipeline {
 public:
  Pipeline(const RunConfig& config, std::ostream& log);

  const RunConfig& config() const noexcept { return config_; }

  // Loaded, segmented and (when an entity table is configured) linked.
  const LabeledCorpus& corpus();
  bool entities_linked();

  Resources resources(Method method);
  const std::vector<CoherenceScore>& scores(Method method);

 private:
  const EmbeddingTable& embeddings();
  const EsaIndex& esa_index();
  const EmbeddingTable& entity_table();

  const RunConfig& config_;
  std::ostream& log_;
  std::optional<LabeledCorpus> corpus_;
  std::unique_ptr<EmbeddingTable> embeddings_;
  std::unique_ptr<EsaIndex> esa_;
  std::unique_ptr<EmbeddingTable> entities_;
  std::map<Method, std::vector<CoherenceScore>> scores_;
};

struct MethodSummary {
  Method method;
  ComparisonSummary summary;
};

// Subcommands. Each validates the configuration before touching any input and
// returns the files it wrote.
std::vector<std::filesystem::path> cmd_stats(const RunConfig& config, std::ostream& log);
std::vector<std::filesystem::path> cmd_score(const RunConfig& config, std::ostream& log);
std::vector<std::filesystem::path> cmd_compare(const RunConfig& config, std::ostream& log);
std::vector<std::filesystem::path> cmd_hist(const RunConfig& config, std::ostream& log);
std::vector<std::filesystem::path> cmd_report(const RunConfig& config, std::ostream& log);
std::vector<std::filesystem::path> cmd_build_esa_index(const std::filesystem::path& kb,
                                                       const std::filesystem::path& out,
                                                       const EsaBuildOptions& options,
                                                       std::ostream& log);

// Renderers, exposed for tests.
std::string render_stats_csv(const std::vector<LabelStats>& rows);
std::string render_stats_markdown(const std::vector<LabelStats>& rows, const RunConfig& config);
std::string render_summary_csv(const std::vector<MethodSummary>& rows);
std::string render_summary_markdown(const std::vector<MethodSummary>& rows, const RunConfig& config);
std::string render_histogram_tsv(Method method, const Histogram& histogram, std::ostream& log);
std::string render_config_block(const RunConfig& config);

std::string format_sd(double sd);
std::string format_p(double p, bool degenerate);

}  // namespace textcoherence::app
