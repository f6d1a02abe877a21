#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ugs/synthgen.hpp"
#include "ugs/trainer.hpp"

using namespace ugs;

namespace {

Graph small_graph(PartitionSignal adj = PartitionSignal::distinct, PartitionSignal feat = PartitionSignal::random) {
  SynthSpec s;
  s.n_nodes = 40;
  s.n_features = 10;
  s.adj_mode = adj;
  s.feat_mode = feat;
  return generate(s);
}

RunConfig quick_config(ModelKind model = ModelKind::dmon) {
  RunConfig c;
  c.model = model;
  c.dataset = "small";
  c.hidden_dim = 8;
  c.hp.max_epochs = 60;
  c.hp.patience = 25;
  c.hp.learning_rate = 0.01;
  return c;
}

void check_same_training(const RunRecord& a, const RunRecord& b) {
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    CHECK(a.snapshots[i].epoch == b.snapshots[i].epoch);
    CHECK(a.snapshots[i].loss == b.snapshots[i].loss);
    CHECK(a.snapshots[i].modularity == b.snapshots[i].modularity);
    CHECK(a.snapshots[i].conductance == b.snapshots[i].conductance);
  }
  CHECK(a.selected_epoch == b.selected_epoch);
  CHECK(a.selected_partition == b.selected_partition);
  CHECK(a.evaluation.modularity == b.evaluation.modularity);
  CHECK(a.evaluation.conductance == b.evaluation.conductance);
}

}  // namespace

TEST_SUITE("trainer") {

TEST_CASE("select_model examples") {
  CHECK(select_model(std::vector<double>{0.1, 0.4, 0.3}, MetricName::modularity) == 1);
  CHECK(select_model(std::vector<double>{0.5, 0.2, 0.2}, MetricName::conductance) == 1);
  CHECK(select_model(std::vector<double>{0.7}, MetricName::modularity) == 0);
  CHECK(select_model(std::vector<double>{0.3, 0.3}, MetricName::modularity) == 0);
  CHECK_THROWS(select_model(std::vector<double>{}, MetricName::modularity));
}

TEST_CASE("patience arithmetic") {
  PatienceTracker t(MetricName::modularity, 25);
  int stopped_at = 0;
  for (int eval = 1; eval <= 100 && !stopped_at; ++eval) {
    t.update(eval <= 10 ? 0.01 * eval : 0.1);
    if (t.exhausted()) stopped_at = eval;
  }
  CHECK(stopped_at == 35);
  CHECK(t.best_index() == 9);

  PatienceTracker c(MetricName::conductance, 2);
  CHECK(c.update(0.5));
  CHECK(c.update(0.4));
  CHECK_FALSE(c.update(0.4));
  CHECK_FALSE(c.exhausted());
  CHECK_FALSE(c.update(0.6));
  CHECK(c.exhausted());
  CHECK(c.best_index() == 1);
}

TEST_CASE("run config") {
  RunConfig c;
  c.dataset = "cora";
  CHECK(c.run_id() == "dmon__cora__s42__modularity__f1");
  c.edge_fraction = 0.33;
  c.selection_metric = MetricName::conductance;
  CHECK(c.run_id() == "dmon__cora__s42__conductance__f0.33");
  CHECK(c.patience_evaluations() == 20);
  c.hp.patience = 25;
  CHECK(c.patience_evaluations() == 5);
  c.hp.patience = 3;
  CHECK(c.patience_evaluations() == 1);
  CHECK_NOTHROW(c.validate());
  c.selection_metric = MetricName::nmi;
  CHECK_THROWS(c.validate());
  c.selection_metric = MetricName::modularity;
  c.edge_fraction = 0.0;
  CHECK_THROWS(c.validate());
  c.edge_fraction = 1.0;
  c.evaluation_interval = 0;
  CHECK_THROWS(c.validate());
  CHECK(parse_stopping("loss") == StoppingRule::loss);
  CHECK_THROWS(parse_stopping("never"));
}

TEST_CASE("train_run is deterministic") {
  const Graph g = small_graph();
  for (auto model : {ModelKind::dmon, ModelKind::dgi}) {
    const RunConfig cfg = quick_config(model);
    const RunRecord a = train_run(cfg, g), b = train_run(cfg, g);
    CHECK(a.status == RunStatus::ok);
    check_same_training(a, b);
    CHECK(a.evaluation.nmi == b.evaluation.nmi);
    CHECK(a.evaluation.f1 == b.evaluation.f1);
  }
}

TEST_CASE("labels never influence training") {
  const Graph g = small_graph(PartitionSignal::random, PartitionSignal::distinct);
  for (auto model : {ModelKind::dmon, ModelKind::dgi}) {
    const RunConfig cfg = quick_config(model);
    const RunRecord labelled = train_run(cfg, g);
    const RunRecord blind = train_run(cfg, g.without_labels());
    check_same_training(labelled, blind);
    CHECK(labelled.has_supervised);
    CHECK_FALSE(blind.has_supervised);
  }
}

TEST_CASE("selected snapshot is the best recorded one") {
  const Graph g = small_graph(PartitionSignal::random, PartitionSignal::random);
  for (auto metric : {MetricName::modularity, MetricName::conductance}) {
    RunConfig cfg = quick_config();
    cfg.selection_metric = metric;
    const RunRecord r = train_run(cfg, g);
    REQUIRE_FALSE(r.snapshots.empty());
    const auto& best = r.snapshots[r.selected_index];
    CHECK(best.epoch == r.selected_epoch);
    for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
      const auto& s = r.snapshots[i];
      if (metric == MetricName::modularity) {
        CHECK(best.modularity >= s.modularity);
        if (i < r.selected_index) CHECK(s.modularity < best.modularity);
      } else {
        CHECK(best.conductance <= s.conductance);
        if (i < r.selected_index) CHECK(s.conductance > best.conductance);
      }
    }
    // Label-based selection over the same snapshots can only do better.
    CHECK(r.reference_nmi >= r.evaluation.nmi - 1e-12);
    CHECK(r.reference_f1 >= r.evaluation.f1 - 1e-12);
  }
}

TEST_CASE("evaluation interval and stopping") {
  RunConfig cfg = quick_config();
  cfg.hp.max_epochs = 23;
  cfg.hp.patience = 1000;
  const RunRecord r = train_run(cfg, small_graph());
  std::vector<int> epochs;
  for (const auto& s : r.snapshots) epochs.push_back(s.epoch);
  CHECK(epochs == std::vector<int>{5, 10, 15, 20, 23});

  cfg.stopping = StoppingRule::loss;
  CHECK(train_run(cfg, small_graph()).status == RunStatus::ok);
}

TEST_CASE("reduced-edge runs are evaluated on the full graph") {
  const Graph g = small_graph();
  RunConfig cfg = quick_config();
  cfg.edge_fraction = 0.33;
  const RunRecord r = train_run(cfg, g);
  REQUIRE(r.status == RunStatus::ok);
  CHECK(r.evaluation.modularity == doctest::Approx(modularity(g, r.selected_partition)).epsilon(1e-15));
  CHECK(r.evaluation.conductance == doctest::Approx(conductance(g, r.selected_partition)).epsilon(1e-15));
  CHECK(r.evaluation.nmi == doctest::Approx(nmi(r.selected_partition, g.labels())).epsilon(1e-15));
}

TEST_CASE("non-finite training is recorded as a failed run") {
  const Graph base = small_graph();
  Matrix x = base.features();
  x(0, 0) = std::nan("");
  const Graph g(base.n_nodes(), base.edges(), x, base.labels(), base.n_classes(), "poisoned");
  const RunRecord r = train_run(quick_config(), g);
  CHECK(r.status == RunStatus::failed);
  CHECK_FALSE(r.diagnostic.empty());
  CHECK(r.evaluation.modularity == -1.0);
  CHECK(r.evaluation.conductance == 1.0);
  CHECK(r.evaluation.nmi == 0.0);
  CHECK(r.evaluation.f1 == 0.0);
  CHECK(summarize(r, false).status == "failed");
}

TEST_CASE("grid planning") {
  RunConfig base;
  GridAxes axes{{ModelKind::dmon, ModelKind::dgi}, {"cora"}, kDefaultSeeds,
                {MetricName::modularity, MetricName::conductance}};
  CHECK(plan_grid(axes, base).size() == 40);
  axes.edge_fractions = {0.33, 0.66, 1.0};
  const auto plan = plan_grid(axes, base);
  CHECK(plan.size() == 120);
  CHECK(plan.front().model == ModelKind::dmon);
  CHECK(plan.front().seed == 42);
  CHECK(plan.back().model == ModelKind::dgi);
  CHECK(plan.back().edge_fraction == 1.0);
}

TEST_CASE("run_grid is independent of worker count and isolates failures") {
  std::map<std::string, Graph> data{{"small", small_graph()}};
  RunConfig base = quick_config();
  GridAxes axes{{ModelKind::dmon, ModelKind::dgi}, {"small", "missing"}, {1, 2},
                {MetricName::modularity, MetricName::conductance}};
  const auto plan = plan_grid(axes, base);
  const auto serial = run_grid(plan, data, 1);
  const auto parallel = run_grid(plan, data, 3);
  REQUIRE(serial.size() == plan.size());
  std::vector<RunSummary> a, b;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    CHECK(serial[i].config.run_id() == plan[i].run_id());
    CHECK((serial[i].status == RunStatus::failed) == (plan[i].dataset == "missing"));
    a.push_back(summarize(serial[i], false));
    b.push_back(summarize(parallel[i], false));
  }
  CHECK(aggregate_csv(a) == aggregate_csv(b));
}

TEST_CASE("runs differing only in selection metric share their trajectory prefix") {
  const Graph g = small_graph(PartitionSignal::random, PartitionSignal::random);
  RunConfig a = quick_config();
  RunConfig b = a;
  b.selection_metric = MetricName::conductance;
  const RunRecord ra = train_run(a, g), rb = train_run(b, g);
  const std::size_t common = std::min(ra.snapshots.size(), rb.snapshots.size());
  for (std::size_t i = 0; i < common; ++i) CHECK(ra.snapshots[i].loss == rb.snapshots[i].loss);
}

TEST_CASE("aggregate csv round trip") {
  RunSummary s;
  s.model = "dgi";
  s.dataset = "synth_A-null_X-null";
  s.seed = 98765;
  s.selection_metric = "conductance";
  s.edge_fraction = 0.66;
  s.modularity = -0.125;
  s.conductance = 0.1 + 0.2;
  s.nmi = 1.0 / 3.0;
  s.f1 = 0.0;
  s.selected_epoch = 35;
  s.reference_nmi = 0.5;
  s.reference_f1 = std::nan("");
  const std::vector<RunSummary> rows{s, s};
  const std::string csv = aggregate_csv(rows);
  CHECK(csv.rfind(std::string(kAggregateHeader) + "\n", 0) == 0);
  const auto back = parse_aggregate_csv(csv);
  REQUIRE(back.size() == 2);
  CHECK(back[0].seed == 98765);
  CHECK(back[0].conductance == s.conductance);
  CHECK(back[0].nmi == s.nmi);
  CHECK(std::isnan(back[0].reference_f1));
  CHECK(aggregate_csv(back) == csv);
  CHECK_THROWS(parse_aggregate_csv("model,dataset\n"));
}

TEST_CASE("unlabeled runs summarize supervised fields as NaN") {
  RunConfig cfg = quick_config();
  const RunRecord r = train_run(cfg, small_graph().without_labels());
  const RunSummary s = summarize(r, false);
  CHECK(std::isnan(s.nmi));
  CHECK(std::isnan(s.f1));
  CHECK(s.wall_secs == 0.0);
  CHECK(summarize(r, true).wall_secs > 0.0);
}

TEST_CASE("run json carries config, series and selection") {
  const RunRecord r = train_run(quick_config(), small_graph());
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["schema_version"] == std::string(kResultsSchema));
  CHECK(j["config"]["model"] == "dmon");
  CHECK(j["epochs"].size() == r.snapshots.size());
  CHECK(j["selected_epoch"] == r.selected_epoch);
  const auto path = std::filesystem::temp_directory_path() / "ugs_test_run.json";
  write_run_json(r, path);
  std::ifstream in(path);
  CHECK(nlohmann::json::parse(in) == j);
}

}  // TEST_SUITE
