#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "app/commands.hpp"
#include "app/run_config.hpp"
#include "textcoherence/error.hpp"

namespace fs = std::filesystem;
using namespace textcoherence;
using namespace textcoherence::app;

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kData = 2, kInternal = 3 };

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

// Options shared by the pipeline subcommands. Values land here and are turned
// into settings after parsing so that the command line wins over the config
// file and the environment.
struct CommonOptions {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
};

void add_common_options(CLI::App& cmd, CommonOptions& opts) {
  cmd.add_option("--config", opts.config_file, "key = value configuration file");
  for (const SettingKey& k : setting_keys()) {
    if (k.is_flag) {
      cmd.add_flag(flag_name(k.key), opts.flags[k.key], k.help);
    } else {
      cmd.add_option(flag_name(k.key), opts.values[k.key], k.help);
    }
  }
}

RunConfig resolve(CLI::App& cmd, const CommonOptions& opts) {
  RunConfig config;
  if (!opts.config_file.empty()) apply_settings(config, read_config_file(opts.config_file));
  apply_settings(config, environment_settings());
  Settings cli;
  for (const SettingKey& k : setting_keys()) {
    if (cmd.count(flag_name(k.key)) == 0) continue;
    if (k.is_flag) {
      cli.emplace_back(k.key, opts.flags.at(k.key) ? "true" : "false");
    } else {
      cli.emplace_back(k.key, opts.values.at(k.key));
    }
  }
  apply_settings(config, cli);
  return config;
}

void print_written(const std::vector<fs::path>& paths) {
  for (const fs::path& p : paths) std::cout << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text coherence scoring for fake and legitimate news corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "textcoherence 0.1.0");

  using Command = std::vector<fs::path> (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> pipeline_commands = {
      {"stats", "per-label article, sentence and entity counts", cmd_stats},
      {"score", "per-document coherence scores for each method", cmd_score},
      {"compare", "fake vs legitimate means, percent difference and t-test", cmd_compare},
      {"hist", "per-label score histograms", cmd_hist},
      {"report", "stats, scores, comparison and histograms in one run", cmd_report},
  };

  std::vector<CommonOptions> options(pipeline_commands.size());
  std::vector<CLI::App*> subcommands;
  for (std::size_t i = 0; i < pipeline_commands.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(std::get<0>(pipeline_commands[i]), std::get<1>(pipeline_commands[i]));
    add_common_options(*cmd, options[i]);
    subcommands.push_back(cmd);
  }

  std::string kb;
  std::string out;
  std::map<std::string, std::string> esa_values;
  CLI::App* build = app.add_subcommand("build-esa-index", "build an ESA index from a knowledge base");
  build->add_option("--kb", kb, "directory of .txt articles or JSONL {title,text}")->required();
  build->add_option("--out", out, "index file to write")->required();
  for (const char* key : {"esa_weighting", "esa_stopwords", "esa_min_weight"}) {
    build->add_option(flag_name(key), esa_values[key]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*build) {
      RunConfig config;
      for (const auto& [key, value] : esa_values) {
        if (build->count(flag_name(key))) apply_setting(config, key, value);
      }
      print_written(cmd_build_esa_index(kb, out, config.esa, std::cerr));
      return kOk;
    }
    for (std::size_t i = 0; i < subcommands.size(); ++i) {
      if (!*subcommands[i]) continue;
      const RunConfig config = resolve(*subcommands[i], options[i]);
      print_written(std::get<2>(pipeline_commands[i])(config, std::cerr));
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error (" << e.field() << "): " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
