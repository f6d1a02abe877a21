#include "ugs/hpo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ugs/metrics.hpp"

namespace ugs {

std::size_t SearchSpace::grid_size() const {
  std::size_t n = 1;
  for (auto c : cardinalities()) n *= c;
  return n;
}

Hyperparameters HpoPoint::apply(const SearchSpace& space, Hyperparameters base) const {
  base.learning_rate = space.learning_rates.at(index[0]);
  base.weight_decay = space.weight_decays.at(index[1]);
  base.patience = space.patiences.at(index[2]);
  return base;
}

namespace {

// Both objectives as minimization.
std::array<double, 2> objectives(const HpoTrial& t) {
  if (t.status == TrialStatus::failed)
    return {-worst_value(MetricName::modularity), worst_value(MetricName::conductance)};
  return {-t.modularity, t.conductance};
}

}  // namespace

bool dominates(const HpoTrial& a, const HpoTrial& b) {
  const auto oa = objectives(a), ob = objectives(b);
  return oa[0] <= ob[0] && oa[1] <= ob[1] && (oa[0] < ob[0] || oa[1] < ob[1]);
}

std::pair<std::vector<HpoTrial>, std::vector<HpoTrial>> nondominated_split(std::span<const HpoTrial> trials,
                                                                           double gamma) {
  const std::size_t n = trials.size();
  if (n < 2) throw std::invalid_argument("nondominated_split needs at least two trials");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");

  // Front ranks by repeated peeling.
  std::vector<int> rank(n, -1);
  std::size_t assigned = 0;
  for (int front = 0; assigned < n; ++front) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (rank[i] >= 0) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < n && !dominated; ++j)
        dominated = j != i && rank[j] < 0 && dominates(trials[j], trials[i]);
      if (!dominated) members.push_back(i);
    }
    for (auto i : members) rank[i] = front;
    assigned += members.size();
  }

  // Crowding distance within each front.
  std::vector<double> crowd(n, 0.0);
  const int n_fronts = *std::max_element(rank.begin(), rank.end()) + 1;
  for (int f = 0; f < n_fronts; ++f) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (rank[i] == f) members.push_back(i);
    for (int obj = 0; obj < 2; ++obj) {
      std::stable_sort(members.begin(), members.end(), [&](auto a, auto b) {
        return objectives(trials[a])[obj] < objectives(trials[b])[obj];
      });
      const double lo = objectives(trials[members.front()])[obj];
      const double hi = objectives(trials[members.back()])[obj];
      crowd[members.front()] = crowd[members.back()] = std::numeric_limits<double>::infinity();
      if (hi <= lo) continue;
      for (std::size_t m = 1; m + 1 < members.size(); ++m)
        crowd[members[m]] += (objectives(trials[members[m + 1]])[obj] - objectives(trials[members[m - 1]])[obj]) /
                             (hi - lo);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (rank[a] != rank[b]) return rank[a] < rank[b];
    if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
    return trials[a].ordinal < trials[b].ordinal;
  });
  const auto n_good = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(n) - 1e-9));
  std::pair<std::vector<HpoTrial>, std::vector<HpoTrial>> out;
  for (std::size_t r = 0; r < n; ++r) (r < n_good ? out.first : out.second).push_back(trials[order[r]]);
  return out;
}

HpoPoint uniform_sample(const SearchSpace& space, Rng& rng) {
  HpoPoint p;
  const auto card = space.cardinalities();
  for (std::size_t d = 0; d < card.size(); ++d) {
    if (card[d] == 0) throw std::invalid_argument("search dimension is empty");
    std::uniform_int_distribution<std::size_t> pick(0, card[d] - 1);
    p.index[d] = pick(rng);
  }
  return p;
}

namespace {

// Add-one smoothed categorical density per dimension.
std::vector<std::vector<double>> parzen_density(const SearchSpace& space, std::span<const HpoTrial> trials) {
  const auto card = space.cardinalities();
  std::vector<std::vector<double>> dens(card.size());
  for (std::size_t d = 0; d < card.size(); ++d) {
    std::vector<double> counts(card[d], 1.0);
    for (const auto& t : trials) counts.at(t.point.index[d]) += 1.0;
    const double total = static_cast<double>(trials.size() + card[d]);
    for (auto& c : counts) c /= total;
    dens[d] = std::move(counts);
  }
  return dens;
}

}  // namespace

HpoPoint parzen_sample(const SearchSpace& space, std::span<const HpoTrial> good,
                       std::span<const HpoTrial> bad, Rng& rng, int n_candidates, bool skip_visited) {
  if (good.empty() && bad.empty()) return uniform_sample(space, rng);
  const auto l = parzen_density(space, good);
  const auto g = parzen_density(space, bad);
  std::vector<std::discrete_distribution<std::size_t>> draw;
  for (const auto& dim : l) draw.emplace_back(dim.begin(), dim.end());

  std::set<HpoPoint> visited;
  if (skip_visited) {
    for (const auto& t : good) visited.insert(t.point);
    for (const auto& t : bad) visited.insert(t.point);
  }
  // Unvisited candidates outrank visited ones; the ratio decides within each group.
  HpoPoint best;
  bool best_fresh = false;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < std::max(1, n_candidates); ++c) {
    HpoPoint cand;
    double log_ratio = 0.0;
    for (std::size_t d = 0; d < draw.size(); ++d) {
      cand.index[d] = draw[d](rng);
      log_ratio += std::log(l[d][cand.index[d]]) - std::log(g[d][cand.index[d]]);
    }
    const bool fresh = skip_visited && !visited.count(cand);
    if (bad.empty()) log_ratio = 0.0;  // ratio is flat: keep the first draw of each group
    if ((fresh && !best_fresh) || (fresh == best_fresh && log_ratio > best_score)) {
      best_score = log_ratio;
      best = cand;
      best_fresh = fresh;
    }
  }
  return best;
}

HpoResult run_hpo_seed(const SearchSpace& space, const TrialObjective& objective, std::uint64_t seed,
                       const TpeSettings& settings) {
  if (space.max_trials < 1) throw std::invalid_argument("max_trials must be >= 1");
  std::seed_seq seq{seed, std::uint64_t{0x7be}};
  Rng rng(seq);
  HpoResult result;
  result.seed = seed;
  for (int t = 0; t < space.max_trials; ++t) {
    HpoPoint point;
    if (t < settings.n_startup || result.trials.size() < 2) {
      point = uniform_sample(space, rng);
    } else {
      auto [good, bad] = nondominated_split(result.trials, settings.gamma);
      point = parzen_sample(space, good, bad, rng, settings.n_candidates, settings.skip_visited);
    }
    HpoTrial trial;
    trial.point = point;
    trial.seed = seed;
    trial.ordinal = t;
    TrialOutcome outcome;
    try {
      outcome = objective(point, seed);
    } catch (const std::exception&) {
      outcome.ok = false;
    }
    if (!outcome.ok || !std::isfinite(outcome.modularity) || !std::isfinite(outcome.conductance)) {
      trial.status = TrialStatus::failed;
      trial.modularity = worst_value(MetricName::modularity);
      trial.conductance = worst_value(MetricName::conductance);
    } else {
      trial.modularity = outcome.modularity;
      trial.conductance = outcome.conductance;
    }
    result.trials.push_back(trial);
  }
  const HpoTrial* best = nullptr;
  for (const auto& t : result.trials) {
    if (t.status != TrialStatus::ok) continue;
    if (!best || t.modularity > best->modularity ||
        (t.modularity == best->modularity && t.conductance < best->conductance))
      best = &t;
  }
  if (!best) throw std::runtime_error("HPO budget exhausted with zero successful trials (seed " +
                                      std::to_string(seed) + ")");
  result.best = *best;
  return result;
}

std::vector<HpoResult> run_hpo(ModelKind model, const Graph& g, const SearchSpace& space,
                               std::span<const std::uint64_t> seeds, const RunConfig& base,
                               const TpeSettings& settings, int workers) {
  std::vector<HpoResult> results(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  parallel_for(seeds.size(), workers, [&](std::size_t i) {
    try {
      TrialObjective objective = [&](const HpoPoint& p, std::uint64_t seed) {
        RunConfig cfg = base;
        cfg.model = model;
        cfg.dataset = base.dataset.empty() ? g.name() : base.dataset;
        cfg.seed = seed;
        cfg.hp = p.apply(space, base.hp);
        // Objectives come from a label-free copy.
        const RunRecord rec = train_run(cfg, g.without_labels());
        return TrialOutcome{rec.evaluation.modularity, rec.evaluation.conductance, rec.status == RunStatus::ok};
      };
      results[i] = run_hpo_seed(space, objective, seeds[i], settings);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::string trial_log_csv(const SearchSpace& space, std::span<const HpoResult> results) {
  std::string out(kTrialLogHeader);
  out += '\n';
  for (const auto& r : results)
    for (const auto& t : r.trials) {
      const auto hp = t.point.apply(space, {});
      out += std::to_string(t.seed) + ',' + std::to_string(t.ordinal) + ',' + format_number(hp.learning_rate) + ',' +
             format_number(hp.weight_decay) + ',' + std::to_string(hp.patience) + ',' +
             format_number(t.modularity) + ',' + format_number(t.conductance) + ',' +
             (t.status == TrialStatus::ok ? "ok" : "failed") + '\n';
    }
  return out;
}

}  // namespace ugs
