#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ugs/gnn.hpp"
#include "ugs/graph.hpp"
#include "ugs/metrics.hpp"

namespace ugs {

/// Seeds used for every reproduction run.
inline const std::vector<std::uint64_t> kDefaultSeeds = {42, 24, 976, 12345, 98765, 7, 856, 90, 672, 785};

inline constexpr std::string_view kResultsSchema = "ugs-results/1";

enum class StoppingRule { metric, loss };

std::string_view to_string(StoppingRule r);
StoppingRule parse_stopping(std::string_view text);

struct Hyperparameters {
  double learning_rate = 0.001;
  double weight_decay = 0.0;
  int patience = 100;  ///< in epochs
  int max_epochs = 5000;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

struct RunConfig {
  ModelKind model = ModelKind::dmon;
  std::string dataset;
  Hyperparameters hp;
  MetricName selection_metric = MetricName::modularity;
  std::uint64_t seed = 42;
  double edge_fraction = 1.0;
  int evaluation_interval = 5;
  StoppingRule stopping = StoppingRule::metric;
  Index hidden_dim = 64;
  int n_layers = 1;
  double collapse_weight = 1.0;
  int k = 0;  ///< clusters; 0 takes the graph's class count

  /// Stable file-name-safe id, e.g. "dmon__cora__s42__modularity__f1".
  std::string run_id() const;
  /// Number of evaluations without improvement before stopping.
  int patience_evaluations() const;
  void validate() const;
};

struct Snapshot {
  int epoch = 0;
  double loss = 0.0;
  double modularity = 0.0;
  double conductance = 0.0;
};

struct Evaluation {
  double modularity = 0.0;
  double conductance = 0.0;
  double nmi = 0.0;
  double f1 = 0.0;
};

enum class RunStatus { ok, failed };

struct RunRecord {
  RunConfig config;
  RunStatus status = RunStatus::ok;
  std::string diagnostic;
  std::vector<Snapshot> snapshots;
  std::size_t selected_index = 0;
  int selected_epoch = 0;
  Partition selected_partition;
  Model selected_model;
  /// Full-graph metrics of the selected partition. Supervised fields are
  /// filled after training ends and only when labels exist.
  Evaluation evaluation;
  bool has_supervised = false;
  /// Label-based selection over the same snapshots, computed after training
  /// ends: the best NMI and F1 reachable had the labels picked the epoch.
  double reference_nmi = 0.0;
  double reference_f1 = 0.0;
  double wall_secs = 0.0;
};

/// Index of the best entry (argmax, or argmin for conductance); the earliest
/// wins ties. Throws on an empty history.
std::size_t select_model(std::span<const double> history, MetricName criterion);

/// Early stopping on a metric series measured in evaluations.
class PatienceTracker {
 public:
  PatienceTracker(MetricName criterion, int patience);
  PatienceTracker(Direction direction, int patience);

  /// Records one evaluation; true when it strictly improved on the best.
  bool update(double value);
  bool exhausted() const { return since_best_ >= patience_; }
  std::size_t best_index() const { return best_index_; }
  std::size_t count() const { return count_; }

 private:
  Direction direction_;
  int patience_;
  double best_ = 0.0;
  std::size_t best_index_ = 0;
  std::size_t count_ = 0;
  int since_best_ = 0;
};

/// Trains one model. Training, stopping and selection see only an unlabeled
/// copy of the graph; labels are read after training ends.
RunRecord train_run(const RunConfig& cfg, const Graph& g);

/// One row of the aggregate CSV.
struct RunSummary {
  std::string model;
  std::string dataset;
  std::uint64_t seed = 0;
  std::string selection_metric;
  double edge_fraction = 1.0;
  double modularity = 0.0;
  double conductance = 0.0;
  double nmi = 0.0;
  double f1 = 0.0;
  int selected_epoch = 0;
  double wall_secs = 0.0;
  double reference_nmi = 0.0;
  double reference_f1 = 0.0;
  std::string status = "ok";

  double value(MetricName m) const;
  double reference(MetricName m) const;
};

RunSummary summarize(const RunRecord& r, bool include_wall_time);

struct GridAxes {
  std::vector<ModelKind> models;
  std::vector<std::string> datasets;
  std::vector<std::uint64_t> seeds;
  std::vector<MetricName> selection_metrics;
  std::vector<double> edge_fractions{1.0};
};

/// Cartesian product in model, dataset, seed, metric, fraction order, each
/// cell a copy of `base` with the axis values filled in.
std::vector<RunConfig> plan_grid(const GridAxes& axes, const RunConfig& base);

/// Executes every config on up to `workers` threads. Results come back in
/// plan order; a run that throws is returned as a failed record.
std::vector<RunRecord> run_grid(const std::vector<RunConfig>& plan,
                                const std::map<std::string, Graph>& datasets, int workers,
                                const std::function<void(const RunRecord&)>& on_done = {});

/// Runs a caller-supplied job per config index on a small thread pool.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& job);

int default_worker_count();

// Serialization.
std::string format_number(double v);
std::string to_json(const RunRecord& r);
void write_run_json(const RunRecord& r, const std::filesystem::path& path);

inline constexpr std::string_view kAggregateHeader =
    "model,dataset,seed,selection_metric,edge_fraction,modularity,conductance,nmi,f1,"
    "selected_epoch,wall_secs,reference_nmi,reference_f1,status";

std::string aggregate_csv(std::span<const RunSummary> rows);
std::vector<RunSummary> parse_aggregate_csv(const std::string& text);
std::vector<RunSummary> read_aggregate_csv(const std::filesystem::path& path);

}  // namespace ugs
