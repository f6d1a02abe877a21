#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ugs/hpo.hpp"
#include "ugs/synthgen.hpp"
#include "ugs/trainer.hpp"

namespace ugs {

/// Invalid or unreadable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { default_hp, hpo, reduced_data, synthetic, analyze };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view text);

/// Flat `key = value` document. Values are scalars or `[a, b, c]` arrays;
/// `#` starts a comment. Strings may be quoted.
using ConfigTable = std::map<std::string, std::vector<std::string>>;

ConfigTable parse_config_text(const std::string& text);

struct ExperimentConfig {
  Experiment experiment = Experiment::default_hp;
  std::vector<std::filesystem::path> datasets;
  /// Synthetic regimes as "adj/feat", or "grid" for all nine.
  std::vector<SynthSpec> synthetic;
  std::vector<ModelKind> models{ModelKind::dmon, ModelKind::dgi};
  std::vector<std::uint64_t> seeds = kDefaultSeeds;
  std::vector<MetricName> selection_metrics{MetricName::modularity, MetricName::conductance};
  std::vector<double> edge_fractions{1.0};
  std::filesystem::path output_dir = "results";
  int workers = 0;  ///< 0 = available parallelism minus one
  RunConfig base;   ///< hyperparameters and model shape shared by all runs
  SearchSpace space;
  TpeSettings tpe;
  bool record_wall_time = false;
  bool save_checkpoints = false;

  /// Applies `key = value` entries; unknown keys throw ConfigError.
  void apply(const ConfigTable& table);
  /// Checks ranges, non-empty seeds and that dataset paths exist.
  void validate() const;
  /// Canonical `key = value` text covering every field.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;
  /// <output_dir>/<experiment>-<hash>
  std::filesystem::path results_dir() const;
  int effective_workers() const;
};

/// Defaults for `experiment`, then the file's entries, then UGS_SEED.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_text(const std::string& text);

/// Synthetic spec list for the nine adjacency x feature regimes.
std::vector<SynthSpec> synthetic_grid(const SynthSpec& base);

std::vector<std::uint64_t> parse_seed_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace ugs
