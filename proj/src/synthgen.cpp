#include "ugs/synthgen.hpp"

#include <random>
#include <stdexcept>

namespace ugs {

std::string_view to_string(PartitionSignal s) {
  switch (s) {
    case PartitionSignal::distinct: return "distinct";
    case PartitionSignal::random: return "random";
    case PartitionSignal::null: return "null";
  }
  return "?";
}

PartitionSignal parse_signal(std::string_view text) {
  if (text == "distinct") return PartitionSignal::distinct;
  if (text == "random") return PartitionSignal::random;
  if (text == "null") return PartitionSignal::null;
  throw std::invalid_argument("unknown partition signal '" + std::string(text) + "'");
}

void SynthSpec::validate() const {
  if (k < 1) throw std::invalid_argument("synth: k must be >= 1");
  if (n_nodes < 1) throw std::invalid_argument("synth: n_nodes must be >= 1");
  if (n_nodes % k != 0)
    throw std::invalid_argument("synth: n_nodes (" + std::to_string(n_nodes) +
                                ") not divisible by k (" + std::to_string(k) + ")");
  if (n_features < 0) throw std::invalid_argument("synth: negative n_features");
  if (feat_mode == PartitionSignal::distinct && n_features % k != 0)
    throw std::invalid_argument("synth: distinct features need n_features divisible by k");
  if (!(p_edge_random > 0.0 && p_edge_random < 1.0) || !(p_feat_random > 0.0 && p_feat_random < 1.0))
    throw std::invalid_argument("synth: probabilities must lie in (0, 1)");
}

std::string SynthSpec::dataset_name() const {
  return "synth_A-" + std::string(to_string(adj_mode)) + "_X-" + std::string(to_string(feat_mode));
}

Graph generate(const SynthSpec& spec) {
  spec.validate();
  const Index n = spec.n_nodes;
  const Index d = spec.n_features;
  const Index block = n / spec.k;
  // Separate streams so the feature draw does not depend on the adjacency mode.
  std::seed_seq adj_seq{spec.seed, std::uint64_t{0xad1}};
  std::seed_seq feat_seq{spec.seed, std::uint64_t{0xfea7}};
  Rng adj_rng(adj_seq), feat_rng(feat_seq);

  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i / block);

  std::vector<Edge> edges;
  switch (spec.adj_mode) {
    case PartitionSignal::distinct:
      edges.reserve(static_cast<std::size_t>(spec.k * block * (block - 1) / 2));
      for (Index u = 0; u < n; ++u)
        for (Index v = u + 1; v < (u / block + 1) * block; ++v) edges.push_back({u, v});
      break;
    case PartitionSignal::random: {
      std::bernoulli_distribution coin(spec.p_edge_random);
      for (Index u = 0; u < n; ++u)
        for (Index v = u + 1; v < n; ++v)
          if (coin(adj_rng)) edges.push_back({u, v});
      break;
    }
    case PartitionSignal::null:
      edges.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
      for (Index u = 0; u < n; ++u)
        for (Index v = u + 1; v < n; ++v) edges.push_back({u, v});
      break;
  }

  Matrix x = Matrix::Zero(n, d);
  switch (spec.feat_mode) {
    case PartitionSignal::distinct: {
      const Index band = d / spec.k;
      for (Index i = 0; i < n; ++i) {
        const Index c = i / block;
        x.block(i, c * band, 1, band).setOnes();
      }
      break;
    }
    case PartitionSignal::random: {
      std::bernoulli_distribution coin(spec.p_feat_random);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) x(i, j) = coin(feat_rng) ? 1.0 : 0.0;
      break;
    }
    case PartitionSignal::null:
      x.setOnes();
      break;
  }

  return Graph(n, std::move(edges), std::move(x), std::move(labels), spec.k, spec.dataset_name());
}

}  // namespace ugs
