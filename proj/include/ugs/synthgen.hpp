#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ugs/graph.hpp"

namespace ugs {

/// How much clustering signal a space carries.
enum class PartitionSignal { distinct, random, null };

std::string_view to_string(PartitionSignal s);
PartitionSignal parse_signal(std::string_view text);

struct SynthSpec {
  Index n_nodes = 1000;
  Index n_features = 500;
  int k = 2;
  PartitionSignal adj_mode = PartitionSignal::distinct;
  PartitionSignal feat_mode = PartitionSignal::distinct;
  double p_edge_random = 0.5;
  double p_feat_random = 0.5;
  std::uint64_t seed = 42;

  /// Throws std::invalid_argument when the spec is unusable.
  void validate() const;
  /// e.g. "synth_A-distinct_X-null".
  std::string dataset_name() const;
};

/// Attributed graph with k equal contiguous planted blocks as labels.
Graph generate(const SynthSpec& spec);

}  // namespace ugs
