#include "ugs/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ugs/analysis.hpp"

namespace ugs {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string summary_line(const RunRecord& r) {
  char buf[256];
  if (r.status != RunStatus::ok) {
    return r.config.run_id() + "  FAILED  " + r.diagnostic;
  }
  std::snprintf(buf, sizeof buf, "  epoch=%d  Q=%.4f  C=%.4f", r.selected_epoch, r.evaluation.modularity,
                r.evaluation.conductance);
  std::string line = r.config.run_id() + buf;
  if (r.has_supervised) {
    std::snprintf(buf, sizeof buf, "  NMI=%.4f  F1=%.4f", r.evaluation.nmi, r.evaluation.f1);
    line += buf;
  }
  std::snprintf(buf, sizeof buf, "  (%.1fs)", r.wall_secs);
  return line + buf;
}

}  // namespace

std::map<std::string, Graph> load_experiment_datasets(const ExperimentConfig& cfg) {
  std::map<std::string, Graph> out;
  auto add = [&](Graph g) {
    const std::string name = g.name();
    if (!out.emplace(name, std::move(g)).second) throw ConfigError("two datasets share the name '" + name + "'");
  };
  for (const auto& dir : cfg.datasets) add(load_dataset(dir));
  for (const auto& spec : cfg.synthetic) add(generate(spec));
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto datasets = load_experiment_datasets(cfg);
  ExperimentResult result;
  result.dir = cfg.results_dir();
  std::filesystem::create_directories(result.dir);

  std::vector<std::string> names;
  for (const auto& [name, g] : datasets) names.push_back(name);

  std::mutex log_mutex;
  auto on_done = [&](const RunRecord& r) {
    std::lock_guard lock(log_mutex);
    log << summary_line(r) << '\n' << std::flush;
  };

  GridAxes axes{cfg.models, names, cfg.seeds, cfg.selection_metrics, cfg.edge_fractions};
  std::vector<RunConfig> plan;
  std::vector<std::string> trial_logs;

  if (cfg.experiment == Experiment::hpo) {
    // One search per (model, dataset, seed); the seed's winner is then
    // trained under every selection metric and edge fraction.
    for (auto model : cfg.models)
      for (const auto& name : names) {
        RunConfig base = cfg.base;
        base.dataset = name;
        const auto searches = run_hpo(model, datasets.at(name), cfg.space, cfg.seeds, base, cfg.tpe,
                                      cfg.effective_workers());
        const std::string log_name = "hpo__" + std::string(to_string(model)) + "__" + name + ".csv";
        write_text(result.dir / log_name, trial_log_csv(cfg.space, searches));
        trial_logs.push_back(log_name);
        for (const auto& s : searches) {
          {
            const auto hp = s.best.point.apply(cfg.space, cfg.base.hp);
            std::lock_guard lock(log_mutex);
            log << "hpo " << to_string(model) << ' ' << name << " seed " << s.seed << ": lr=" << hp.learning_rate
                << " wd=" << hp.weight_decay << " patience=" << hp.patience << '\n';
          }
          RunConfig tuned = cfg.base;
          tuned.hp = s.best.point.apply(cfg.space, cfg.base.hp);
          GridAxes one{{model}, {name}, {s.seed}, cfg.selection_metrics, cfg.edge_fractions};
          for (auto& rc : plan_grid(one, tuned)) plan.push_back(std::move(rc));
        }
      }
  } else {
    plan = plan_grid(axes, cfg.base);
  }

  nlohmann::ordered_json manifest;
  manifest["schema_version"] = kResultsSchema;
  manifest["experiment"] = to_string(cfg.experiment);
  manifest["config_hash"] = cfg.hash();
  manifest["config"] = cfg.canonical();
  manifest["datasets"] = names;
  manifest["n_runs"] = plan.size();
  if (!trial_logs.empty()) manifest["hpo_trial_logs"] = trial_logs;
  write_text(result.dir / "manifest.json", manifest.dump(2) + "\n");

  const auto records = run_grid(plan, datasets, cfg.effective_workers(), on_done);
  for (const auto& r : records) {
    const std::string id = r.config.run_id();
    write_run_json(r, result.dir / (id + ".json"));
    if (cfg.save_checkpoints && r.status == RunStatus::ok) save_checkpoint(r.selected_model, result.dir / (id + ".ckpt"));
    result.rows.push_back(summarize(r, cfg.record_wall_time));
    if (r.status != RunStatus::ok) ++result.failed;
  }
  write_text(result.dir / "aggregate.csv", aggregate_csv(result.rows));
  return result;
}

std::vector<RunSummary> read_results_dir(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw SchemaError(dir.string() + ": no manifest.json");
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    throw SchemaError(manifest_path.string() + ": " + e.what());
  }
  const std::string version = manifest.value("schema_version", std::string{});
  if (version != kResultsSchema)
    throw SchemaError(dir.string() + ": schema version '" + version + "', expected '" + std::string(kResultsSchema) + "'");
  try {
    return read_aggregate_csv(dir / "aggregate.csv");
  } catch (const std::exception& e) {
    throw SchemaError(dir.string() + ": " + e.what());
  }
}

void analyze_results(const std::vector<std::filesystem::path>& dirs, const std::filesystem::path& out_dir) {
  if (dirs.empty()) throw std::invalid_argument("analyze: no results directories given");
  std::vector<ReportInput> inputs;
  std::set<std::string> used;
  for (const auto& dir : dirs) {
    std::string name = std::filesystem::path(dir).lexically_normal().filename().string();
    if (name.empty()) name = std::filesystem::path(dir).lexically_normal().parent_path().filename().string();
    std::string unique = name;
    for (int i = 2; !used.insert(unique).second; ++i) unique = name + "-" + std::to_string(i);
    inputs.push_back({unique, read_results_dir(dir)});
  }
  write_report(inputs, out_dir);
}

}  // namespace ugs
