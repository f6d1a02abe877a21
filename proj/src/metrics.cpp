#include "ugs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>

namespace ugs {

std::string_view to_string(MetricName m) {
  switch (m) {
    case MetricName::modularity: return "modularity";
    case MetricName::conductance: return "conductance";
    case MetricName::nmi: return "nmi";
    case MetricName::f1: return "f1";
  }
  return "?";
}

MetricName parse_metric(std::string_view text) {
  if (text == "modularity") return MetricName::modularity;
  if (text == "conductance") return MetricName::conductance;
  if (text == "nmi") return MetricName::nmi;
  if (text == "f1") return MetricName::f1;
  throw std::invalid_argument("unknown metric '" + std::string(text) + "'");
}

namespace {

void require_edges(const Graph& g, const char* what) {
  if (g.n_edges() == 0) throw std::domain_error(std::string(what) + " is undefined on a graph without edges");
}

void require_size(const Graph& g, const Partition& p) {
  if (p.size() != g.n_nodes())
    throw std::invalid_argument("partition size " + std::to_string(p.size()) + " != n_nodes " +
                                std::to_string(g.n_nodes()));
}

// Relabel arbitrary ids to 0..r-1 in order of first appearance.
std::vector<int> compact(std::span<const int> ids, int& count) {
  std::map<int, int> remap;
  std::vector<int> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(ids[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  count = static_cast<int>(remap.size());
  return out;
}

double entropy(const Eigen::VectorXd& counts, double n) {
  double h = 0.0;
  for (Index i = 0; i < counts.size(); ++i)
    if (counts(i) > 0) h -= counts(i) / n * std::log(counts(i) / n);
  return h;
}

}  // namespace

double modularity(const Graph& g, const Partition& p) {
  require_edges(g, "modularity");
  require_size(g, p);
  const double m = static_cast<double>(g.n_edges());
  std::vector<double> internal(static_cast<std::size_t>(p.k()), 0.0);
  std::vector<double> volume(static_cast<std::size_t>(p.k()), 0.0);
  for (const auto& e : g.edges()) {
    const int cu = p[e.u], cv = p[e.v];
    volume[static_cast<std::size_t>(cu)] += 1.0;
    volume[static_cast<std::size_t>(cv)] += 1.0;
    if (cu == cv) internal[static_cast<std::size_t>(cu)] += 1.0;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < internal.size(); ++c) {
    const double frac = volume[c] / (2.0 * m);
    q += internal[c] / m - frac * frac;
  }
  return q;
}

double conductance(const Graph& g, const Partition& p) {
  require_edges(g, "conductance");
  require_size(g, p);
  if (p.k() == 0) return 1.0;
  std::vector<double> cut(static_cast<std::size_t>(p.k()), 0.0);
  std::vector<double> volume(static_cast<std::size_t>(p.k()), 0.0);
  for (const auto& e : g.edges()) {
    const auto cu = static_cast<std::size_t>(p[e.u]), cv = static_cast<std::size_t>(p[e.v]);
    volume[cu] += 1.0;
    volume[cv] += 1.0;
    if (cu != cv) {
      cut[cu] += 1.0;
      cut[cv] += 1.0;
    }
  }
  double total = 0.0;
  for (std::size_t c = 0; c < cut.size(); ++c) total += volume[c] > 0 ? cut[c] / volume[c] : 1.0;
  return total / static_cast<double>(cut.size());
}

double nmi(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("nmi: length mismatch (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  if (a.empty()) return 1.0;
  int ka = 0, kb = 0;
  const auto ca = compact(a, ka);
  const auto cb = compact(b, kb);
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(ka, kb);
  for (std::size_t i = 0; i < ca.size(); ++i) joint(ca[i], cb[i]) += 1.0;
  const double n = static_cast<double>(a.size());
  const Eigen::VectorXd row = joint.rowwise().sum();
  const Eigen::VectorXd col = joint.colwise().sum().transpose();
  const double ha = entropy(row, n), hb = entropy(col, n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;
  double mi = 0.0;
  for (Index i = 0; i < ka; ++i)
    for (Index j = 0; j < kb; ++j)
      if (joint(i, j) > 0)
        mi += joint(i, j) / n * std::log(joint(i, j) * n / (row(i) * col(j)));
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

double nmi(const Partition& p, std::span<const int> labels) {
  return nmi(std::span<const int>(p.assignment()), labels);
}

CountMatrix contingency(std::span<const int> clusters, int k, std::span<const int> classes,
                        int n_classes) {
  if (clusters.size() != classes.size()) throw std::invalid_argument("contingency: length mismatch");
  CountMatrix c = CountMatrix::Zero(k, n_classes);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i] < 0 || clusters[i] >= k || classes[i] < 0 || classes[i] >= n_classes)
      throw std::invalid_argument("contingency: id out of range");
    ++c(clusters[i], classes[i]);
  }
  return c;
}

double macro_f1(const Partition& p, std::span<const int> labels, int n_classes) {
  if (static_cast<std::size_t>(p.size()) != labels.size())
    throw std::invalid_argument("macro_f1: length mismatch (" + std::to_string(p.size()) + " vs " +
                                std::to_string(labels.size()) + ")");
  if (n_classes < 0) {
    n_classes = 0;
    for (int l : labels) n_classes = std::max(n_classes, l + 1);
  }
  if (n_classes == 0) return 0.0;
  const int side = std::max(p.k(), n_classes);
  CountMatrix square = CountMatrix::Zero(side, side);
  square.topLeftCorner(p.k(), n_classes) =
      contingency(p.assignment(), p.k(), labels, n_classes);
  const Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> predicted = square.rowwise().sum();
  const Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic> support = square.colwise().sum();

  // Overlap first; among tied matchings prefer the larger summed pair F1 so
  // the score does not depend on cluster numbering.
  constexpr std::int64_t resolution = std::int64_t{1} << 20;
  CountMatrix keyed(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const auto denom = static_cast<double>(predicted(r) + support(c));
      const double f1 = denom > 0 ? 2.0 * static_cast<double>(square(r, c)) / denom : 0.0;
      keyed(r, c) = square(r, c) * resolution * (side + 1) + static_cast<std::int64_t>(f1 * resolution);
    }
  const auto match = hungarian_match(keyed);
  std::vector<int> cluster_of_class(static_cast<std::size_t>(side), -1);
  for (int r = 0; r < side; ++r) cluster_of_class[static_cast<std::size_t>(match[static_cast<std::size_t>(r)])] = r;

  double total = 0.0;
  for (int cls = 0; cls < n_classes; ++cls) {
    const int r = cluster_of_class[static_cast<std::size_t>(cls)];
    const auto tp = static_cast<double>(square(r, cls));
    const auto denom = static_cast<double>(predicted(r) + support(cls));
    total += denom > 0 ? 2.0 * tp / denom : 0.0;
  }
  return total / n_classes;
}

std::vector<int> hungarian_match(const CountMatrix& weights) {
  if (weights.rows() != weights.cols())
    throw std::invalid_argument("hungarian_match: matrix must be square, got " +
                                std::to_string(weights.rows()) + "x" + std::to_string(weights.cols()));
  const int n = static_cast<int>(weights.rows());
  if (n == 0) return {};
  // Minimize cost = -weight with the shortest augmenting path formulation
  // (potentials u, v; 1-based with a virtual column 0).
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> col_owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    col_owner[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = col_owner[j0];
      std::int64_t delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = -weights(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const int j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) assignment[static_cast<std::size_t>(col_owner[j] - 1)] = j - 1;
  return assignment;
}

GraphStats graph_stats(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n_nodes());
  GraphStats stats;
  if (n == 0) return stats;
  std::vector<std::vector<Index>> adj(n);
  for (const auto& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  double clustering_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nb = adj[i];
    const double d = static_cast<double>(nb.size());
    if (nb.size() < 2) continue;
    std::size_t links = 0;
    for (Index j : nb) {
      const auto& nj = adj[static_cast<std::size_t>(j)];
      std::vector<Index> common;
      std::set_intersection(nb.begin(), nb.end(), nj.begin(), nj.end(), std::back_inserter(common));
      links += common.size();
    }
    // Each neighbour-neighbour link is seen from both ends.
    clustering_sum += static_cast<double>(links) / (d * (d - 1.0));
  }
  stats.clustering = clustering_sum / static_cast<double>(n);

  double closeness_sum = 0.0;
  std::vector<int> dist(n);
  std::queue<std::size_t> frontier;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    frontier.push(s);
    double total = 0.0;
    std::size_t reached = 0;
    while (!frontier.empty()) {
      const auto x = frontier.front();
      frontier.pop();
      for (Index y : adj[x]) {
        const auto yi = static_cast<std::size_t>(y);
        if (dist[yi] < 0) {
          dist[yi] = dist[x] + 1;
          total += dist[yi];
          ++reached;
          frontier.push(yi);
        }
      }
    }
    if (reached > 0 && n > 1) {
      const double r = static_cast<double>(reached);
      closeness_sum += (r / total) * (r / static_cast<double>(n - 1));
    }
  }
  stats.closeness = closeness_sum / static_cast<double>(n);
  return stats;
}

}  // namespace ugs
