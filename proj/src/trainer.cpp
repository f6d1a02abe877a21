#include "ugs/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace ugs {

std::string_view to_string(StoppingRule r) { return r == StoppingRule::metric ? "metric" : "loss"; }

StoppingRule parse_stopping(std::string_view text) {
  if (text == "metric") return StoppingRule::metric;
  if (text == "loss") return StoppingRule::loss;
  throw std::invalid_argument("unknown stopping rule '" + std::string(text) + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string RunConfig::run_id() const {
  std::string id = std::string(to_string(model)) + "__" + dataset + "__s" + std::to_string(seed) + "__" +
                   std::string(to_string(selection_metric)) + "__f" + format_number(edge_fraction);
  for (char& c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) c = '-';
  return id;
}

int RunConfig::patience_evaluations() const {
  return std::max(1, (hp.patience + evaluation_interval - 1) / evaluation_interval);
}

void RunConfig::validate() const {
  if (is_supervised(selection_metric))
    throw std::invalid_argument("selection metric must be modularity or conductance; label-based "
                                "selection is reported post hoc in the reference fields");
  if (!(edge_fraction > 0.0 && edge_fraction <= 1.0))
    throw std::invalid_argument("edge_fraction must lie in (0, 1]");
  if (hp.learning_rate <= 0.0 || hp.weight_decay < 0.0) throw std::invalid_argument("bad optimizer settings");
  if (hp.patience < 1 || hp.max_epochs < 1) throw std::invalid_argument("patience and max_epochs must be >= 1");
  if (evaluation_interval < 1) throw std::invalid_argument("evaluation_interval must be >= 1");
  if (hidden_dim < 1 || n_layers < 1) throw std::invalid_argument("bad architecture");
  if (k < 0) throw std::invalid_argument("negative k");
}

std::size_t select_model(std::span<const double> history, MetricName criterion) {
  if (history.empty()) throw std::invalid_argument("select_model: empty history");
  std::size_t best = 0;
  for (std::size_t i = 1; i < history.size(); ++i)
    if (strictly_better(criterion, history[i], history[best])) best = i;
  return best;
}

PatienceTracker::PatienceTracker(MetricName criterion, int patience)
    : PatienceTracker(direction_of(criterion), patience) {}

PatienceTracker::PatienceTracker(Direction direction, int patience)
    : direction_(direction), patience_(patience) {
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
}

bool PatienceTracker::update(double value) {
  const bool improved = count_ == 0 || (direction_ == Direction::maximize ? value > best_ : value < best_);
  if (improved) {
    best_ = value;
    best_index_ = count_;
    since_best_ = 0;
  } else {
    ++since_best_;
  }
  ++count_;
  return improved;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Independent streams per (run identity, purpose). The selection metric is
// deliberately not part of the identity so that runs differing only in how
// they select share their training trajectory.
Rng stream(const RunConfig& cfg, std::uint64_t purpose) {
  const std::uint64_t frac = std::bit_cast<std::uint64_t>(cfg.edge_fraction);
  std::seed_seq seq{cfg.seed, fnv1a(to_string(cfg.model)), fnv1a(cfg.dataset), frac, purpose};
  return Rng(seq);
}

constexpr std::uint64_t kSubsampleStream = 1, kInitStream = 2, kCorruptionStream = 3,
                        kEvalStreamBase = 1000;

bool all_finite(const LossAndGradients& lg) {
  if (!std::isfinite(lg.loss)) return false;
  for (const auto& g : lg.gradients)
    if (!g.allFinite()) return false;
  return true;
}

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<Partition> partitions;
  std::vector<Model> checkpoints;  // only the best is retained; see below
  std::size_t best = 0;
  bool failed = false;
  std::string diagnostic;
};

// The unsupervised core. It receives graphs without labels, so nothing in
// here can read them.
Trajectory train_unlabeled(const RunConfig& cfg, const Graph& train_graph, int k) {
  Trajectory tr;
  if (train_graph.n_edges() == 0) {
    tr.failed = true;
    tr.diagnostic = "training graph has no edges";
    return tr;
  }
  const GraphContext ctx(train_graph);
  Rng init_rng = stream(cfg, kInitStream);
  Rng corruption_rng = stream(cfg, kCorruptionStream);
  ModelConfig arch{cfg.model, cfg.hidden_dim, cfg.n_layers, k, cfg.collapse_weight};
  Model model = Model::init(arch, train_graph.n_features(), init_rng);
  Adam adam(cfg.hp.learning_rate, cfg.hp.weight_decay);

  const bool by_loss = cfg.stopping == StoppingRule::loss;
  PatienceTracker tracker(by_loss ? Direction::minimize : direction_of(cfg.selection_metric),
                          cfg.patience_evaluations());
  Model best_model = model;
  std::vector<double> series;

  for (int epoch = 1; epoch <= cfg.hp.max_epochs; ++epoch) {
    const LossAndGradients lg = gradients(model, ctx, corruption_rng);
    if (!all_finite(lg)) {
      tr.failed = true;
      tr.diagnostic = "non-finite loss or gradient at epoch " + std::to_string(epoch);
      break;
    }
    adam.step(model.parameters(), lg.gradients);
    if (epoch % cfg.evaluation_interval != 0 && epoch != cfg.hp.max_epochs) continue;

    Rng eval_rng = stream(cfg, kEvalStreamBase + static_cast<std::uint64_t>(epoch));
    Partition p = extract_partition(model, ctx, k, eval_rng);
    Snapshot snap;
    snap.epoch = epoch;
    snap.loss = lg.loss;
    snap.modularity = modularity(train_graph, p);
    snap.conductance = conductance(train_graph, p);
    const double metric = cfg.selection_metric == MetricName::modularity ? snap.modularity : snap.conductance;
    series.push_back(metric);
    tr.snapshots.push_back(snap);
    tr.partitions.push_back(std::move(p));

    if (!std::isfinite(metric)) {
      tr.failed = true;
      tr.diagnostic = "non-finite selection metric at epoch " + std::to_string(epoch);
      break;
    }
    // Selection is always by the metric; the stopping rule only decides when
    // to give up.
    const std::size_t best_so_far = select_model(series, cfg.selection_metric);
    if (best_so_far + 1 == series.size()) best_model = model;
    tracker.update(by_loss ? lg.loss : metric);
    if (tracker.exhausted()) break;
  }
  if (!tr.snapshots.empty()) tr.best = select_model(series, cfg.selection_metric);
  tr.checkpoints.push_back(std::move(best_model));
  return tr;
}

}  // namespace

RunRecord train_run(const RunConfig& cfg, const Graph& g) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.config = cfg;
  const int k = cfg.k > 0 ? cfg.k : g.n_classes();
  if (k < 1) throw std::invalid_argument("cluster count unknown: set k or provide n_classes");
  if (k > g.n_nodes()) throw std::invalid_argument("k exceeds n_nodes");

  const Graph full = g.without_labels();
  Graph train_graph = full;
  if (cfg.edge_fraction < 1.0) {
    Rng sub_rng = stream(cfg, kSubsampleStream);
    train_graph = subsample_edges(full, cfg.edge_fraction, sub_rng);
  }

  Trajectory tr = train_unlabeled(cfg, train_graph, k);
  rec.snapshots = std::move(tr.snapshots);
  rec.selected_model = std::move(tr.checkpoints.front());
  if (tr.failed || rec.snapshots.empty()) {
    rec.status = RunStatus::failed;
    rec.diagnostic = tr.failed ? tr.diagnostic : "no evaluation recorded";
    rec.evaluation = {worst_value(MetricName::modularity), worst_value(MetricName::conductance),
                      worst_value(MetricName::nmi), worst_value(MetricName::f1)};
    rec.has_supervised = g.has_labels();
    rec.selected_partition = Partition(std::vector<int>(static_cast<std::size_t>(g.n_nodes()), 0), k);
  } else {
    rec.selected_index = tr.best;
    rec.selected_epoch = rec.snapshots[tr.best].epoch;
    rec.selected_partition = tr.partitions[tr.best];
    rec.evaluation.modularity = full.n_edges() ? modularity(full, rec.selected_partition) : 0.0;
    rec.evaluation.conductance = full.n_edges() ? conductance(full, rec.selected_partition) : 1.0;
    if (g.has_labels()) {
      // Training is over; labels are consulted from here on only.
      const auto& labels = g.labels();
      rec.has_supervised = true;
      rec.evaluation.nmi = nmi(rec.selected_partition, labels);
      rec.evaluation.f1 = macro_f1(rec.selected_partition, labels, g.n_classes());
      std::vector<double> nmis, f1s;
      for (const auto& p : tr.partitions) {
        nmis.push_back(nmi(p, labels));
        f1s.push_back(macro_f1(p, labels, g.n_classes()));
      }
      rec.reference_nmi = nmis[select_model(nmis, MetricName::nmi)];
      rec.reference_f1 = f1s[select_model(f1s, MetricName::f1)];
    }
  }
  rec.wall_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

double RunSummary::value(MetricName m) const {
  switch (m) {
    case MetricName::modularity: return modularity;
    case MetricName::conductance: return conductance;
    case MetricName::nmi: return nmi;
    case MetricName::f1: return f1;
  }
  return 0.0;
}

double RunSummary::reference(MetricName m) const {
  if (m == MetricName::nmi) return reference_nmi;
  if (m == MetricName::f1) return reference_f1;
  throw std::invalid_argument("reference values exist for nmi and f1 only");
}

RunSummary summarize(const RunRecord& r, bool include_wall_time) {
  RunSummary s;
  s.model = std::string(to_string(r.config.model));
  s.dataset = r.config.dataset;
  s.seed = r.config.seed;
  s.selection_metric = std::string(to_string(r.config.selection_metric));
  s.edge_fraction = r.config.edge_fraction;
  s.modularity = r.evaluation.modularity;
  s.conductance = r.evaluation.conductance;
  s.nmi = r.evaluation.nmi;
  s.f1 = r.evaluation.f1;
  if (!r.has_supervised) s.nmi = s.f1 = std::nan("");
  s.selected_epoch = r.selected_epoch;
  s.wall_secs = include_wall_time ? r.wall_secs : 0.0;
  s.reference_nmi = r.has_supervised ? r.reference_nmi : std::nan("");
  s.reference_f1 = r.has_supervised ? r.reference_f1 : std::nan("");
  s.status = r.status == RunStatus::ok ? "ok" : "failed";
  return s;
}

std::vector<RunConfig> plan_grid(const GridAxes& axes, const RunConfig& base) {
  std::vector<RunConfig> plan;
  for (auto model : axes.models)
    for (const auto& ds : axes.datasets)
      for (auto seed : axes.seeds)
        for (auto metric : axes.selection_metrics)
          for (double frac : axes.edge_fractions) {
            RunConfig c = base;
            c.model = model;
            c.dataset = ds;
            c.seed = seed;
            c.selection_metric = metric;
            c.edge_fraction = frac;
            plan.push_back(std::move(c));
          }
  return plan;
}

int default_worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 1 ? static_cast<int>(hw) - 1 : 1;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& job) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  for (auto& t : pool) t.join();
}

std::vector<RunRecord> run_grid(const std::vector<RunConfig>& plan,
                                const std::map<std::string, Graph>& datasets, int workers,
                                const std::function<void(const RunRecord&)>& on_done) {
  std::vector<RunRecord> out(plan.size());
  std::mutex report_mutex;
  parallel_for(plan.size(), workers, [&](std::size_t i) {
    const RunConfig& cfg = plan[i];
    RunRecord rec;
    try {
      const auto it = datasets.find(cfg.dataset);
      if (it == datasets.end()) throw std::invalid_argument("unknown dataset '" + cfg.dataset + "'");
      rec = train_run(cfg, it->second);
    } catch (const std::exception& e) {
      rec = RunRecord{};
      rec.config = cfg;
      rec.status = RunStatus::failed;
      rec.diagnostic = e.what();
      rec.evaluation = {worst_value(MetricName::modularity), worst_value(MetricName::conductance),
                        worst_value(MetricName::nmi), worst_value(MetricName::f1)};
    }
    if (on_done) {
      std::lock_guard lock(report_mutex);
      on_done(rec);
    }
    out[i] = std::move(rec);
  });
  return out;
}

std::string to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kResultsSchema;
  j["run_id"] = r.config.run_id();
  const auto& c = r.config;
  j["config"] = {{"model", to_string(c.model)},
                 {"dataset", c.dataset},
                 {"learning_rate", c.hp.learning_rate},
                 {"weight_decay", c.hp.weight_decay},
                 {"patience", c.hp.patience},
                 {"max_epochs", c.hp.max_epochs},
                 {"selection_metric", to_string(c.selection_metric)},
                 {"seed", c.seed},
                 {"edge_fraction", c.edge_fraction},
                 {"evaluation_interval", c.evaluation_interval},
                 {"stopping", to_string(c.stopping)},
                 {"hidden_dim", c.hidden_dim},
                 {"n_layers", c.n_layers},
                 {"collapse_weight", c.collapse_weight},
                 {"k", c.k}};
  j["status"] = r.status == RunStatus::ok ? "ok" : "failed";
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  auto& series = j["epochs"] = nlohmann::ordered_json::array();
  for (const auto& s : r.snapshots)
    series.push_back({{"epoch", s.epoch}, {"loss", s.loss}, {"modularity", s.modularity},
                      {"conductance", s.conductance}});
  j["selected_epoch"] = r.selected_epoch;
  nlohmann::ordered_json sel = {{"modularity", r.evaluation.modularity},
                                {"conductance", r.evaluation.conductance}};
  if (r.has_supervised) {
    sel["nmi"] = r.evaluation.nmi;
    sel["f1"] = r.evaluation.f1;
    sel["reference_nmi"] = r.reference_nmi;
    sel["reference_f1"] = r.reference_f1;
  }
  j["selected"] = sel;
  j["wall_secs"] = r.wall_secs;
  return j.dump(1) + "\n";
}

void write_run_json(const RunRecord& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(r);
}

std::string aggregate_csv(std::span<const RunSummary> rows) {
  std::string out(kAggregateHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.model + ',' + r.dataset + ',' + std::to_string(r.seed) + ',' + r.selection_metric + ',' +
           format_number(r.edge_fraction) + ',' + format_number(r.modularity) + ',' +
           format_number(r.conductance) + ',' + format_number(r.nmi) + ',' + format_number(r.f1) + ',' +
           std::to_string(r.selected_epoch) + ',' + format_number(r.wall_secs) + ',' +
           format_number(r.reference_nmi) + ',' + format_number(r.reference_f1) + ',' + r.status + '\n';
  }
  return out;
}

namespace {

double to_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  if (s == "nan") return std::nan("");
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("aggregate CSV line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<RunSummary> parse_aggregate_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kAggregateHeader)
    throw std::runtime_error("aggregate CSV header does not match schema " + std::string(kResultsSchema));
  std::vector<RunSummary> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 14) throw std::runtime_error("aggregate CSV line " + std::to_string(lineno) + ": expected 14 fields");
    RunSummary r;
    r.model = f[0];
    r.dataset = f[1];
    r.seed = std::stoull(f[2]);
    r.selection_metric = f[3];
    r.edge_fraction = to_double(f[4], lineno);
    r.modularity = to_double(f[5], lineno);
    r.conductance = to_double(f[6], lineno);
    r.nmi = to_double(f[7], lineno);
    r.f1 = to_double(f[8], lineno);
    r.selected_epoch = static_cast<int>(to_double(f[9], lineno));
    r.wall_secs = to_double(f[10], lineno);
    r.reference_nmi = to_double(f[11], lineno);
    r.reference_f1 = to_double(f[12], lineno);
    r.status = f[13];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<RunSummary> read_aggregate_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_aggregate_csv(buf.str());
}

}  // namespace ugs
