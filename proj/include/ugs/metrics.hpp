#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ugs/graph.hpp"

namespace ugs {

enum class MetricName { modularity, conductance, nmi, f1 };
enum class Direction { maximize, minimize };

std::string_view to_string(MetricName m);
/// Accepts "modularity", "conductance", "nmi", "f1". Throws on anything else.
MetricName parse_metric(std::string_view text);

constexpr Direction direction_of(MetricName m) {
  return m == MetricName::conductance ? Direction::minimize : Direction::maximize;
}
constexpr bool is_supervised(MetricName m) { return m == MetricName::nmi || m == MetricName::f1; }

/// True when a is strictly better than b under m's direction.
constexpr bool strictly_better(MetricName m, double a, double b) {
  return direction_of(m) == Direction::maximize ? a > b : a < b;
}

/// Worst attainable value; used for failed runs.
constexpr double worst_value(MetricName m) {
  switch (m) {
    case MetricName::modularity: return -1.0;
    case MetricName::conductance: return 1.0;
    default: return 0.0;
  }
}

struct MetricValue {
  MetricName name;
  double value;

  Direction direction() const { return direction_of(name); }
};

/// Newman modularity, Q = sum_c [L_c / m - (vol_c / 2m)^2]. Throws
/// std::domain_error on an edgeless graph.
double modularity(const Graph& g, const Partition& p);

/// Mean over the k clusters of cut(S) / vol(S). Empty and zero-volume
/// clusters score 1. Throws std::domain_error on an edgeless graph.
double conductance(const Graph& g, const Partition& p);

/// 2 I(A;B) / (H(A) + H(B)), natural log. 1 when both sides are the same
/// partition up to relabeling (including two single-cluster vectors), 0 when
/// exactly one entropy is zero.
double nmi(std::span<const int> a, std::span<const int> b);
double nmi(const Partition& p, std::span<const int> labels);

/// Macro-F1 over classes after maximum-overlap one-to-one matching of
/// clusters to classes. n_classes defaults to max(label) + 1.
double macro_f1(const Partition& p, std::span<const int> labels, int n_classes = -1);

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// clusters x classes co-occurrence counts.
CountMatrix contingency(std::span<const int> clusters, int k, std::span<const int> classes,
                        int n_classes);

/// Maximum-weight perfect matching on a square matrix; result[row] = column.
std::vector<int> hungarian_match(const CountMatrix& weights);

struct GraphStats {
  double clustering = 0.0;  ///< average local clustering coefficient
  double closeness = 0.0;   ///< mean closeness centrality (Wasserman-Faust)
};

GraphStats graph_stats(const Graph& g);

}  // namespace ugs
