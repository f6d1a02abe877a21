#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ugs/analysis.hpp"
#include "ugs/config.hpp"
#include "ugs/experiment.hpp"
#include "ugs/synthgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailed = 1;
constexpr int kExitInvalid = 2;

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) out += (i ? "," : "") + std::to_string(seeds[i]);
  return out;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised model selection experiments for graph clustering networks"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write synthetic attributed graphs in dataset format");
  ugs::SynthSpec spec;
  bool grid = false;
  std::string adj = "distinct", feat = "distinct";
  std::filesystem::path gen_out = "data";
  gen->add_flag("--grid", grid, "Write all nine adjacency x feature combinations");
  gen->add_option("--adj", adj, "Adjacency signal: distinct, random or null")->capture_default_str();
  gen->add_option("--feat", feat, "Feature signal: distinct, random or null")->capture_default_str();
  gen->add_option("--n", spec.n_nodes, "Number of nodes")->capture_default_str();
  gen->add_option("--d", spec.n_features, "Number of features")->capture_default_str();
  gen->add_option("--k", spec.k, "Number of planted clusters")->capture_default_str();
  gen->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  gen->add_option("--p-edge", spec.p_edge_random, "Edge probability in the random regime")->capture_default_str();
  gen->add_option("--p-feat", spec.p_feat_random, "Feature probability in the random regime")->capture_default_str();
  gen->add_option("--out", gen_out, "Parent directory for dataset directories")->capture_default_str();

  // run
  auto* run = app.add_subcommand("run", "Run the experiment grid declared in a config file");
  std::filesystem::path config_path;
  const ugs::Hyperparameters hp_defaults;
  const ugs::SearchSpace space_defaults;
  const ugs::RunConfig run_defaults;
  std::string seeds = join_seeds(ugs::kDefaultSeeds), models = "dmon,dgi", metrics = "modularity,conductance",
              fractions = "1", output = "results", stopping = "metric";
  int workers = 0, max_trials = space_defaults.max_trials, patience = hp_defaults.patience,
      max_epochs = hp_defaults.max_epochs, interval = run_defaults.evaluation_interval, n_layers = run_defaults.n_layers;
  double lr = hp_defaults.learning_rate, wd = hp_defaults.weight_decay, collapse = run_defaults.collapse_weight;
  long long hidden = run_defaults.hidden_dim;
  bool wall_time = false, checkpoints = false;
  run->add_option("config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  auto* o_seeds = run->add_option("--seeds", seeds, "Comma-separated seeds")->capture_default_str();
  auto* o_models = run->add_option("--models", models, "Comma-separated models: dmon, dgi")->capture_default_str();
  auto* o_metrics =
      run->add_option("--selection-metrics", metrics, "Comma-separated selection metrics")->capture_default_str();
  auto* o_fractions = run->add_option("--edge-fractions", fractions,
                                      "Comma-separated training edge fractions (reduced-data default 0.33,0.66)")
                          ->capture_default_str();
  auto* o_output = run->add_option("--output", output, "Parent directory for results")->capture_default_str();
  auto* o_workers =
      run->add_option("--workers", workers, "Worker threads (0 = available parallelism minus one)")->capture_default_str();
  auto* o_trials = run->add_option("--max-trials", max_trials, "HPO trials per seed")->capture_default_str();
  auto* o_lr = run->add_option("--learning-rate", lr, "Learning rate")->capture_default_str();
  auto* o_wd = run->add_option("--weight-decay", wd, "Weight decay")->capture_default_str();
  auto* o_patience = run->add_option("--patience", patience, "Early-stopping patience in epochs")->capture_default_str();
  auto* o_epochs = run->add_option("--max-epochs", max_epochs, "Maximum training epochs")->capture_default_str();
  auto* o_interval =
      run->add_option("--evaluation-interval", interval, "Epochs between evaluations")->capture_default_str();
  auto* o_hidden = run->add_option("--hidden-dim", hidden, "Encoder width")->capture_default_str();
  auto* o_layers = run->add_option("--n-layers", n_layers, "Encoder depth")->capture_default_str();
  auto* o_collapse =
      run->add_option("--collapse-weight", collapse, "DMON collapse regularization weight")->capture_default_str();
  auto* o_stopping =
      run->add_option("--stopping", stopping, "Early stopping on the selection metric or the loss")->capture_default_str();
  auto* o_wall = run->add_flag("--record-wall-time", wall_time, "Write measured wall time into aggregate.csv");
  auto* o_ckpt = run->add_flag("--save-checkpoints", checkpoints, "Save the selected model of every run");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Build correlation tables and plots from results directories");
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path report_out = "report";
  analyze->add_option("results", inputs, "Results directories (two or more adds FCR)")->required();
  analyze->add_option("--out", report_out, "Report directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*gen) {
      std::vector<ugs::SynthSpec> specs;
      if (grid) {
        specs = ugs::synthetic_grid(spec);
      } else {
        spec.adj_mode = ugs::parse_signal(adj);
        spec.feat_mode = ugs::parse_signal(feat);
        specs = {spec};
      }
      for (const auto& s : specs) {
        s.validate();
        const auto dir = gen_out / s.dataset_name();
        ugs::write_dataset(ugs::generate(s), dir);
        std::cout << dir.string() << '\n';
      }
      return kExitOk;
    }

    if (*run) {
      ugs::ExperimentConfig cfg;
      ugs::ConfigTable overrides;
      try {
        cfg = ugs::load_config(config_path);
        auto put = [&](CLI::Option* opt, const std::string& key, std::vector<std::string> values) {
          if (opt->count()) overrides[key] = std::move(values);
        };
        put(o_seeds, "seeds", split_csv(seeds));
        put(o_models, "models", split_csv(models));
        put(o_metrics, "selection_metrics", split_csv(metrics));
        put(o_fractions, "edge_fractions", split_csv(fractions));
        put(o_output, "output_dir", {output});
        put(o_workers, "workers", {std::to_string(workers)});
        put(o_trials, "max_trials", {std::to_string(max_trials)});
        put(o_lr, "learning_rate", {ugs::format_number(lr)});
        put(o_wd, "weight_decay", {ugs::format_number(wd)});
        put(o_patience, "patience", {std::to_string(patience)});
        put(o_epochs, "max_epochs", {std::to_string(max_epochs)});
        put(o_interval, "evaluation_interval", {std::to_string(interval)});
        put(o_hidden, "hidden_dim", {std::to_string(hidden)});
        put(o_layers, "n_layers", {std::to_string(n_layers)});
        put(o_collapse, "collapse_weight", {ugs::format_number(collapse)});
        put(o_stopping, "stopping", {stopping});
        put(o_wall, "record_wall_time", {"true"});
        put(o_ckpt, "save_checkpoints", {"true"});
        cfg.apply(overrides);
        cfg.validate();
      } catch (const std::exception& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitInvalid;
      }
      const auto result = ugs::run_experiment(cfg, std::cout);
      std::cout << result.rows.size() << " runs, " << result.failed << " failed -> " << result.dir.string() << '\n';
      return result.failed ? kExitRunFailed : kExitOk;
    }

    if (*analyze) {
      try {
        ugs::analyze_results(inputs, report_out);
      } catch (const ugs::SchemaError& e) {
        std::cerr << "incompatible results: " << e.what() << '\n';
        return kExitInvalid;
      }
      std::cout << "report written to " << report_out.string() << '\n';
      return kExitOk;
    }
  } catch (const ugs::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ugs::DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunFailed;
  }
  return kExitOk;
}
