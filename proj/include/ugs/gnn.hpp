#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ugs/graph.hpp"

namespace ugs {

enum class ModelKind { dmon, dgi };

std::string_view to_string(ModelKind k);
ModelKind parse_model(std::string_view text);

/// Stack of graph convolutions H' = relu(A_hat H W), no bias.
struct GcnEncoder {
  std::vector<Matrix> weights;

  Index in_dim() const { return weights.empty() ? 0 : weights.front().rows(); }
  Index out_dim() const { return weights.empty() ? 0 : weights.back().cols(); }
};

/// Soft cluster assignment C = softmax(H W) with a collapse regularizer.
struct DmonHead {
  Matrix weights;  // hidden x k
  double collapse_weight = 1.0;
};

/// Bilinear discriminator between node embeddings and a sigmoid mean readout.
struct DgiObjective {
  Matrix discriminator;  // hidden x hidden
};

struct ModelConfig {
  ModelKind kind = ModelKind::dmon;
  Index hidden_dim = 64;
  int n_layers = 1;
  int k = 2;
  double collapse_weight = 1.0;
};

/// A clustering model: a GCN encoder plus one of the two objectives.
struct Model {
  ModelKind kind = ModelKind::dmon;
  GcnEncoder encoder;
  DmonHead dmon;     // used when kind == dmon
  DgiObjective dgi;  // used when kind == dgi
  int k = 2;

  /// Glorot-uniform initialization.
  static Model init(const ModelConfig& cfg, Index in_dim, Rng& rng);

  /// Trainable tensors in declaration order: encoder layers, then the head
  /// (DMON assignment weights or DGI discriminator).
  std::vector<Matrix*> parameters();
  std::vector<const Matrix*> parameters() const;
};

/// Per-graph quantities reused across epochs. Holds a dense normalized
/// adjacency and the first-layer propagation A_hat X of the clean features.
struct GraphContext {
  Matrix a_hat;
  Matrix a_hat_x;
  const Matrix* features = nullptr;
  std::vector<Edge> edges;
  Vector degree;
  double n_edges = 0.0;
  Index n_nodes = 0;

  explicit GraphContext(const Graph& g);
};

Matrix relu(const Matrix& x);
/// Row-wise softmax, shifted by the row maximum.
Matrix softmax_rows(const Matrix& z);

/// Embeddings of the clean features.
Matrix gcn_forward(const GcnEncoder& enc, const GraphContext& ctx);
Matrix gcn_forward(const GcnEncoder& enc, const Graph& g);

struct DmonTerms {
  double trace = 0.0;     ///< -(1/2m) Tr(C^T B C)
  double collapse = 0.0;  ///< (sqrt(k)/n) ||sum_i C_i|| - 1, before weighting
  double total(double collapse_weight) const { return trace + collapse_weight * collapse; }
};

/// Both DMON terms for a given soft assignment.
DmonTerms dmon_terms(const Matrix& assignment, const GraphContext& ctx);
double dmon_loss(const DmonHead& head, const Matrix& embeddings, const GraphContext& ctx);
double dmon_loss(const DmonHead& head, const Matrix& embeddings, const Graph& g);

/// Row permutation used to corrupt the features.
std::vector<Index> draw_corruption(Index n_nodes, Rng& rng);

/// Binary cross-entropy of the discriminator over clean (positive) and
/// row-shuffled (negative) embeddings against the clean summary.
double dgi_loss(const DgiObjective& obj, const GcnEncoder& enc, const GraphContext& ctx,
                const std::vector<Index>& permutation);
double dgi_loss(const DgiObjective& obj, const GcnEncoder& enc, const Graph& g, Rng& rng);

struct LossAndGradients {
  double loss = 0.0;
  std::vector<Matrix> gradients;  // aligned with Model::parameters()
};

/// Loss of `model` scaled by `scale` and its exact gradient. DGI draws its
/// corruption from rng (or uses `permutation` in the second overload).
LossAndGradients gradients(const Model& model, const GraphContext& ctx, Rng& rng,
                           double scale = 1.0);
LossAndGradients gradients(const Model& model, const GraphContext& ctx,
                           const std::vector<Index>& permutation, double scale = 1.0);
LossAndGradients gradients(const Model& model, const Graph& g, Rng& rng, double scale = 1.0);

/// Forward-only loss with the same conventions as gradients().
double model_loss(const Model& model, const GraphContext& ctx, const std::vector<Index>& permutation);

/// DMON soft assignment for the clean graph.
Matrix soft_assignment(const Model& model, const GraphContext& ctx);

struct KMeansResult {
  std::vector<int> assignment;
  Matrix centroids;
  double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding, keeping the restart with the
/// lowest inertia. Distance ties go to the lowest cluster id.
KMeansResult kmeans(const Matrix& points, int k, Rng& rng, int restarts = 10, int max_iter = 300);

/// Hard partition: argmax of the soft assignment (DMON) or k-means on the
/// embeddings (DGI). Throws when k > n_nodes.
Partition extract_partition(const Model& model, const GraphContext& ctx, int k, Rng& rng);
Partition extract_partition(const Model& model, const Graph& g, int k, Rng& rng);

/// Row argmax, lowest column on ties.
std::vector<int> argmax_rows(const Matrix& m);

/// Adam with L2 weight decay folded into the gradient.
class Adam {
 public:
  explicit Adam(double learning_rate, double weight_decay = 0.0, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8);

  void step(const std::vector<Matrix*>& params, const std::vector<Matrix>& grads);

 private:
  double lr_, wd_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Matrix> m_, v_;
};

/// Flat binary container: "UGSCKPT1", u32 kind, u32 k, f64 collapse weight,
/// u32 tensor count, per tensor u64 rows and u64 cols, then every tensor as
/// row-major little-endian f64 in declaration order.
void save_checkpoint(const Model& model, std::ostream& out);
void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(std::istream& in);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace ugs
