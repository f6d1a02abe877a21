// Surrogate HPO objective with a single planted optimum on the grid.
#pragma once

#include <cmath>
#include <cstdlib>

#include "ugs/hpo.hpp"

namespace oracle {

/// Modularity falls off linearly with per-dimension index distance from the
/// optimum; conductance mirrors it. Only the optimum reaches (1, 0).
inline ugs::TrialObjective planted_objective(const ugs::SearchSpace& space, const ugs::HpoPoint& optimum,
                                             int* calls = nullptr) {
  return [space, optimum, calls](const ugs::HpoPoint& p, std::uint64_t) {
    if (calls) ++*calls;
    const auto card = space.cardinalities();
    double penalty = 0.0;
    for (std::size_t d = 0; d < card.size(); ++d) {
      const double dist = std::abs(static_cast<double>(p.index[d]) - static_cast<double>(optimum.index[d]));
      penalty += dist / static_cast<double>(card[d] - 1);
    }
    const double m = 1.0 - penalty / static_cast<double>(card.size());
    return ugs::TrialOutcome{m, 1.0 - m, true};
  };
}

/// Trial ordinal (0-based) at which the optimum was first evaluated, or -1.
inline int first_hit(const ugs::HpoResult& r, const ugs::HpoPoint& optimum) {
  for (const auto& t : r.trials)
    if (t.point == optimum) return t.ordinal;
  return -1;
}

}  // namespace oracle
