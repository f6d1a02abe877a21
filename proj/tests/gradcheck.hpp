// Central finite-difference check of the analytic model gradients.
#pragma once

#include <algorithm>
#include <cmath>

#include "ugs/gnn.hpp"

namespace oracle {

/// max over entries of |analytic - numeric| / max(|analytic|, |numeric|, floor).
/// The floor keeps round-off in near-zero entries from dominating.
inline double max_relative_gradient_error(const ugs::Model& model, const ugs::GraphContext& ctx,
                                          const std::vector<ugs::Index>& permutation, double h = 1e-5,
                                          double floor = 1e-6) {
  const auto analytic = ugs::gradients(model, ctx, permutation);
  ugs::Model probe = model;
  auto params = probe.parameters();
  double worst = 0.0;
  for (std::size_t t = 0; t < params.size(); ++t) {
    ugs::Matrix& w = *params[t];
    for (ugs::Index i = 0; i < w.size(); ++i) {
      const double saved = w.data()[i];
      w.data()[i] = saved + h;
      const double up = ugs::model_loss(probe, ctx, permutation);
      w.data()[i] = saved - h;
      const double down = ugs::model_loss(probe, ctx, permutation);
      w.data()[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic.gradients[t].data()[i];
      worst = std::max(worst, std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor}));
    }
  }
  return worst;
}

}  // namespace oracle
