#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ugs {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Unordered edge, stored with u < v.
struct Edge {
  Index u = 0;
  Index v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Raised for malformed dataset directories. Carries the offending file and
/// line (0 when not line specific).
class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& what, std::filesystem::path file = {}, std::size_t line = 0);

  const std::filesystem::path& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::filesystem::path file_;
  std::size_t line_;
};

/// Undirected, unweighted attributed graph with optional node labels.
///
/// Edges are normalized to u < v, sorted and checked for self-loops,
/// duplicates and out-of-range endpoints on construction. The feature matrix
/// is shared between graphs derived from one another (subsampling, label
/// stripping), so copies are cheap.
class Graph {
 public:
  Graph() = default;
  Graph(Index n_nodes, std::vector<Edge> edges, Matrix features,
        std::optional<std::vector<int>> labels = std::nullopt, int n_classes = 0,
        std::string name = {});

  Index n_nodes() const { return n_nodes_; }
  Index n_edges() const { return static_cast<Index>(edges_.size()); }
  Index n_features() const { return features_ ? features_->cols() : 0; }
  int n_classes() const { return n_classes_; }
  const std::string& name() const { return name_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Matrix& features() const { return *features_; }
  bool has_labels() const { return labels_.has_value(); }
  /// Throws std::logic_error when the graph carries no labels.
  const std::vector<int>& labels() const;

  /// Same nodes, features and labels with a different edge set.
  Graph with_edges(std::vector<Edge> edges) const;
  Graph without_labels() const;
  Graph renamed(std::string name) const;

 private:
  Index n_nodes_ = 0;
  std::vector<Edge> edges_;
  std::shared_ptr<const Matrix> features_ = std::make_shared<const Matrix>();
  std::optional<std::vector<int>> labels_;
  int n_classes_ = 0;
  std::string name_;
};

/// Hard clustering: one cluster id in [0, k) per node.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<int> assignment, int k);

  /// k is taken as max id + 1.
  static Partition from_assignment(std::vector<int> assignment);

  int k() const { return k_; }
  Index size() const { return static_cast<Index>(assignment_.size()); }
  const std::vector<int>& assignment() const { return assignment_; }
  int operator[](Index i) const { return assignment_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<int> assignment_;
  int k_ = 0;
};

std::vector<Index> degrees(const Graph& g);

/// Dense symmetric 0/1 adjacency.
Matrix adjacency_matrix(const Graph& g);

/// D~^{-1/2} (A + I) D~^{-1/2}, D~ the degree matrix of A + I.
Matrix normalized_adjacency(const Graph& g);

/// Keeps ceil(fraction * |E|) edges drawn uniformly without replacement.
/// Nodes, features and labels are untouched.
Graph subsample_edges(const Graph& g, double fraction, Rng& rng);

enum class EdgeConvention { unordered, directed_double };

/// Reads meta.json, edges.tsv, features.csv and (optionally) labels.csv.
Graph load_dataset(const std::filesystem::path& dir);

/// Writes g in the layout read by load_dataset. Features are written in
/// shortest round-trip form, so a reload is bit-identical.
void write_dataset(const Graph& g, const std::filesystem::path& dir,
                   EdgeConvention convention = EdgeConvention::unordered);

}  // namespace ugs
