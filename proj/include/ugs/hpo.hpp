#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ugs/graph.hpp"
#include "ugs/trainer.hpp"

namespace ugs {

/// Flat categorical search space. Values default to the shared grids.
struct SearchSpace {
  std::vector<double> learning_rates{0.05, 0.01, 0.005, 0.001, 0.0005, 0.0001};
  std::vector<double> weight_decays{0.05, 0.005, 0.0005, 0.0};
  std::vector<int> patiences{25, 100, 500, 1000};
  int max_trials = 250;

  static constexpr std::size_t kDimensions = 3;
  std::array<std::size_t, kDimensions> cardinalities() const {
    return {learning_rates.size(), weight_decays.size(), patiences.size()};
  }
  std::size_t grid_size() const;
};

/// One grid point as per-dimension indices into the SearchSpace value lists.
struct HpoPoint {
  std::array<std::size_t, SearchSpace::kDimensions> index{};

  Hyperparameters apply(const SearchSpace& space, Hyperparameters base) const;
  friend bool operator==(const HpoPoint&, const HpoPoint&) = default;
  friend auto operator<=>(const HpoPoint&, const HpoPoint&) = default;
};

enum class TrialStatus { ok, failed };

struct HpoTrial {
  HpoPoint point;
  double modularity = -1.0;  // maximize
  double conductance = 1.0;  // minimize
  std::uint64_t seed = 0;
  int ordinal = 0;
  TrialStatus status = TrialStatus::ok;
};

struct TpeSettings {
  double gamma = 0.25;
  int n_startup = 10;
  int n_candidates = 24;
  bool skip_visited = true;  ///< prefer candidates not yet evaluated in this run
};

/// a dominates b: no worse in both objectives, strictly better in one.
bool dominates(const HpoTrial& a, const HpoTrial& b);

/// Orders trials by nondominated rank, then crowding distance (larger
/// first), then ordinal, and cuts after ceil(gamma * n). Failed trials are
/// compared at their worst-case objectives.
std::pair<std::vector<HpoTrial>, std::vector<HpoTrial>> nondominated_split(std::span<const HpoTrial> trials,
                                                                           double gamma);

HpoPoint uniform_sample(const SearchSpace& space, Rng& rng);

/// Draws n_candidates points from the smoothed good-set densities l(x) and
/// returns the one maximizing prod l(x)/g(x). With no bad trials there is
/// no ratio to rank by and the first draw from l(x) is returned.
HpoPoint parzen_sample(const SearchSpace& space, std::span<const HpoTrial> good,
                       std::span<const HpoTrial> bad, Rng& rng, int n_candidates = 24,
                       bool skip_visited = false);

struct TrialOutcome {
  double modularity = -1.0;
  double conductance = 1.0;
  bool ok = true;
};

using TrialObjective = std::function<TrialOutcome(const HpoPoint&, std::uint64_t seed)>;

struct HpoResult {
  std::uint64_t seed = 0;
  HpoTrial best;
  std::vector<HpoTrial> trials;
};

/// Sequential MOTPE for one seed. The winner maximizes modularity, lower
/// conductance breaking ties, then the earlier trial.
HpoResult run_hpo_seed(const SearchSpace& space, const TrialObjective& objective, std::uint64_t seed,
                       const TpeSettings& settings = {});

/// One optimization per seed, each trial a full train_run on `g` with the
/// sampled hyperparameters. Seeds run concurrently on `workers` threads.
std::vector<HpoResult> run_hpo(ModelKind model, const Graph& g, const SearchSpace& space,
                               std::span<const std::uint64_t> seeds, const RunConfig& base,
                               const TpeSettings& settings = {}, int workers = 1);

inline constexpr std::string_view kTrialLogHeader =
    "seed,trial,learning_rate,weight_decay,patience,modularity,conductance,status";

std::string trial_log_csv(const SearchSpace& space, std::span<const HpoResult> results);

}  // namespace ugs
