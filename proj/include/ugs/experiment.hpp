#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ugs/config.hpp"

namespace ugs {

/// Results directory written by an incompatible version.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentResult {
  std::filesystem::path dir;
  std::vector<RunSummary> rows;
  std::size_t failed = 0;
};

/// Loads every dataset the config names, keyed by dataset name.
std::map<std::string, Graph> load_experiment_datasets(const ExperimentConfig& cfg);

/// Runs the configured grid and writes manifest.json, aggregate.csv, one
/// JSON per run and, for hpo, the trial logs. `log` gets one line per run.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Reads aggregate.csv after checking manifest.json's schema version.
std::vector<RunSummary> read_results_dir(const std::filesystem::path& dir);

/// Report over one or more results directories; each is one framework.
void analyze_results(const std::vector<std::filesystem::path>& dirs, const std::filesystem::path& out_dir);

}  // namespace ugs
