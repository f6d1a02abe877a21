#include "ugs/gnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ugs {

std::string_view to_string(ModelKind k) { return k == ModelKind::dmon ? "dmon" : "dgi"; }

ModelKind parse_model(std::string_view text) {
  if (text == "dmon") return ModelKind::dmon;
  if (text == "dgi") return ModelKind::dgi;
  throw std::invalid_argument("unknown model '" + std::string(text) + "' (expected dmon or dgi)");
}

namespace {

Matrix glorot(Index rows, Index cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-a, a);
  Matrix w(rows, cols);
  // Fill row-major so the draw order does not depend on Eigen's storage.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) w(i, j) = dist(rng);
  return w;
}

double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// Forward record of one encoder pass, enough for backpropagation.
struct EncoderCache {
  Matrix first_input;        // layer-0 input when not pre-propagated
  bool first_propagated = false;
  std::vector<Matrix> inputs;  // H_l for l >= 1
  std::vector<Matrix> pre;     // pre-activations
  Matrix output;
};

EncoderCache encode(const GcnEncoder& enc, const GraphContext& ctx, Matrix* corrupted) {
  if (enc.weights.empty()) throw std::invalid_argument("encoder has no layers");
  const Matrix& x = corrupted ? *corrupted : *ctx.features;
  if (x.cols() != enc.in_dim())
    throw std::invalid_argument("feature dim " + std::to_string(x.cols()) +
                                " != encoder input dim " + std::to_string(enc.in_dim()));
  EncoderCache cache;
  const auto n_layers = enc.weights.size();
  cache.pre.resize(n_layers);
  cache.inputs.resize(n_layers);
  if (!corrupted) {
    cache.first_propagated = true;
    cache.pre[0].noalias() = ctx.a_hat_x * enc.weights[0];
  } else {
    cache.first_input = std::move(*corrupted);
    Matrix xw = cache.first_input * enc.weights[0];
    cache.pre[0].noalias() = ctx.a_hat * xw;
  }
  Matrix h = relu(cache.pre[0]);
  for (std::size_t l = 1; l < n_layers; ++l) {
    if (h.cols() != enc.weights[l].rows()) throw std::invalid_argument("encoder layer dims do not chain");
    Matrix hw = h * enc.weights[l];
    cache.pre[l].noalias() = ctx.a_hat * hw;
    cache.inputs[l] = std::move(h);
    h = relu(cache.pre[l]);
  }
  cache.output = std::move(h);
  return cache;
}

// Accumulates encoder weight gradients given dL/d(output).
void encode_backward(const GcnEncoder& enc, const GraphContext& ctx, const EncoderCache& cache,
                     Matrix d_out, std::vector<Matrix>& grads) {
  for (std::size_t l = enc.weights.size(); l-- > 0;) {
    Matrix d_pre = (cache.pre[l].array() > 0.0).select(d_out, 0.0);
    if (l == 0 && cache.first_propagated) {
      grads[0].noalias() += ctx.a_hat_x.transpose() * d_pre;
      break;
    }
    Matrix t = ctx.a_hat * d_pre;
    const Matrix& input = l == 0 ? cache.first_input : cache.inputs[l];
    grads[l].noalias() += input.transpose() * t;
    if (l > 0) d_out = t * enc.weights[l].transpose();
  }
}

Matrix corrupt(const Matrix& x, const std::vector<Index>& permutation) {
  if (static_cast<Index>(permutation.size()) != x.rows())
    throw std::invalid_argument("corruption permutation length != n_nodes");
  Matrix out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) out.row(i) = x.row(permutation[static_cast<std::size_t>(i)]);
  return out;
}

Matrix adjacency_times(const GraphContext& ctx, const Matrix& c) {
  Matrix ac = Matrix::Zero(c.rows(), c.cols());
  for (const auto& e : ctx.edges) {
    ac.row(e.u) += c.row(e.v);
    ac.row(e.v) += c.row(e.u);
  }
  return ac;
}

std::vector<Matrix> zero_grads(const Model& model) {
  std::vector<Matrix> grads;
  for (const Matrix* p : model.parameters()) grads.push_back(Matrix::Zero(p->rows(), p->cols()));
  return grads;
}

double dmon_forward_backward(const Model& model, const GraphContext& ctx, double scale,
                             std::vector<Matrix>* grads) {
  if (ctx.n_edges <= 0) throw std::domain_error("DMON loss is undefined on a graph without edges");
  const EncoderCache cache = encode(model.encoder, ctx, nullptr);
  const Matrix& h = cache.output;
  const Matrix& wc = model.dmon.weights;
  if (h.cols() != wc.rows()) throw std::invalid_argument("DMON head input dim != embedding dim");
  const Matrix c = softmax_rows(h * wc);
  const DmonTerms terms = dmon_terms(c, ctx);
  const double lambda = model.dmon.collapse_weight;
  const double loss = terms.total(lambda);
  if (!grads) return scale * loss;

  const double two_m = 2.0 * ctx.n_edges;
  const auto n = static_cast<double>(c.rows());
  const auto k = static_cast<double>(c.cols());
  const Matrix ac = adjacency_times(ctx, c);
  const Eigen::RowVectorXd dtc = ctx.degree.transpose() * c;
  Matrix d_c = -(1.0 / two_m) * (2.0 * ac - (2.0 / two_m) * ctx.degree * dtc);
  const Eigen::RowVectorXd sizes = c.colwise().sum();
  const double norm = sizes.norm();
  if (norm > 0) d_c.rowwise() += (lambda * std::sqrt(k) / n / norm) * sizes;
  d_c *= scale;

  const Eigen::VectorXd inner = (d_c.array() * c.array()).rowwise().sum();
  const Matrix d_z = c.array() * (d_c.colwise() - inner).array();
  auto& g = *grads;
  g.back().noalias() += h.transpose() * d_z;
  encode_backward(model.encoder, ctx, cache, d_z * wc.transpose(), g);
  return scale * loss;
}

double dgi_forward_backward(const Model& model, const GraphContext& ctx,
                            const std::vector<Index>& permutation, double scale,
                            std::vector<Matrix>* grads) {
  const EncoderCache clean = encode(model.encoder, ctx, nullptr);
  Matrix shuffled = corrupt(*ctx.features, permutation);
  const EncoderCache noisy = encode(model.encoder, ctx, &shuffled);
  const Matrix& h = clean.output;
  const Matrix& ht = noisy.output;
  const Matrix& wd = model.dgi.discriminator;
  if (wd.rows() != h.cols() || wd.cols() != h.cols())
    throw std::invalid_argument("DGI discriminator must be hidden x hidden");
  const auto n = static_cast<double>(h.rows());

  const Vector mean = h.colwise().mean().transpose();
  const Vector s = mean.unaryExpr([](double v) { return sigmoid(v); });
  const Vector u = wd * s;
  const Vector pos = h * u;
  const Vector neg = ht * u;
  double loss = 0.0;
  for (Index i = 0; i < pos.size(); ++i) loss += softplus(-pos(i)) + softplus(neg(i));
  loss /= 2.0 * n;
  if (!grads) return scale * loss;

  const Vector a = pos.unaryExpr([&](double v) { return scale * (sigmoid(v) - 1.0) / (2.0 * n); });
  const Vector at = neg.unaryExpr([&](double v) { return scale * sigmoid(v) / (2.0 * n); });
  Matrix d_h = a * u.transpose();
  const Matrix d_ht = at * u.transpose();
  const Vector d_u = h.transpose() * a + ht.transpose() * at;
  auto& g = *grads;
  g.back().noalias() += d_u * s.transpose();
  const Vector d_s = wd.transpose() * d_u;
  const Vector d_mean = d_s.array() * s.array() * (1.0 - s.array());
  d_h.rowwise() += (d_mean / n).transpose();
  encode_backward(model.encoder, ctx, clean, std::move(d_h), g);
  encode_backward(model.encoder, ctx, noisy, d_ht, g);
  return scale * loss;
}

}  // namespace

Model Model::init(const ModelConfig& cfg, Index in_dim, Rng& rng) {
  if (cfg.n_layers < 1) throw std::invalid_argument("model needs at least one layer");
  if (cfg.hidden_dim < 1 || in_dim < 1) throw std::invalid_argument("model dimensions must be positive");
  if (cfg.k < 1) throw std::invalid_argument("k must be positive");
  Model m;
  m.kind = cfg.kind;
  m.k = cfg.k;
  Index dim = in_dim;
  for (int l = 0; l < cfg.n_layers; ++l) {
    m.encoder.weights.push_back(glorot(dim, cfg.hidden_dim, rng));
    dim = cfg.hidden_dim;
  }
  if (cfg.kind == ModelKind::dmon) {
    m.dmon.weights = glorot(dim, cfg.k, rng);
    m.dmon.collapse_weight = cfg.collapse_weight;
  } else {
    m.dgi.discriminator = glorot(dim, dim, rng);
  }
  return m;
}

std::vector<Matrix*> Model::parameters() {
  std::vector<Matrix*> out;
  for (auto& w : encoder.weights) out.push_back(&w);
  out.push_back(kind == ModelKind::dmon ? &dmon.weights : &dgi.discriminator);
  return out;
}

std::vector<const Matrix*> Model::parameters() const {
  std::vector<const Matrix*> out;
  for (const auto& w : encoder.weights) out.push_back(&w);
  out.push_back(kind == ModelKind::dmon ? &dmon.weights : &dgi.discriminator);
  return out;
}

GraphContext::GraphContext(const Graph& g)
    : a_hat(normalized_adjacency(g)),
      features(&g.features()),
      edges(g.edges()),
      degree(g.n_nodes()),
      n_edges(static_cast<double>(g.n_edges())),
      n_nodes(g.n_nodes()) {
  a_hat_x.noalias() = a_hat * g.features();
  const auto deg = degrees(g);
  for (Index i = 0; i < n_nodes; ++i) degree(i) = static_cast<double>(deg[static_cast<std::size_t>(i)]);
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix softmax_rows(const Matrix& z) {
  Matrix out = z.colwise() - z.rowwise().maxCoeff();
  out = out.array().exp();
  out.array().colwise() /= out.rowwise().sum().array();
  return out;
}

Matrix gcn_forward(const GcnEncoder& enc, const GraphContext& ctx) {
  return encode(enc, ctx, nullptr).output;
}

Matrix gcn_forward(const GcnEncoder& enc, const Graph& g) { return gcn_forward(enc, GraphContext(g)); }

DmonTerms dmon_terms(const Matrix& c, const GraphContext& ctx) {
  if (ctx.n_edges <= 0) throw std::domain_error("DMON loss is undefined on a graph without edges");
  if (c.rows() != ctx.n_nodes) throw std::invalid_argument("assignment rows != n_nodes");
  const double two_m = 2.0 * ctx.n_edges;
  double within = 0.0;
  for (const auto& e : ctx.edges) within += 2.0 * c.row(e.u).dot(c.row(e.v));
  const Eigen::RowVectorXd dtc = ctx.degree.transpose() * c;
  DmonTerms t;
  t.trace = -(within - dtc.squaredNorm() / two_m) / two_m;
  const auto n = static_cast<double>(c.rows());
  const auto k = static_cast<double>(c.cols());
  t.collapse = std::sqrt(k) / n * c.colwise().sum().norm() - 1.0;
  return t;
}

double dmon_loss(const DmonHead& head, const Matrix& embeddings, const GraphContext& ctx) {
  if (embeddings.cols() != head.weights.rows())
    throw std::invalid_argument("DMON head input dim != embedding dim");
  return dmon_terms(softmax_rows(embeddings * head.weights), ctx).total(head.collapse_weight);
}

double dmon_loss(const DmonHead& head, const Matrix& embeddings, const Graph& g) {
  return dmon_loss(head, embeddings, GraphContext(g));
}

std::vector<Index> draw_corruption(Index n_nodes, Rng& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(n_nodes));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

double dgi_loss(const DgiObjective& obj, const GcnEncoder& enc, const GraphContext& ctx,
                const std::vector<Index>& permutation) {
  Model m;
  m.kind = ModelKind::dgi;
  m.encoder = enc;
  m.dgi = obj;
  return dgi_forward_backward(m, ctx, permutation, 1.0, nullptr);
}

double dgi_loss(const DgiObjective& obj, const GcnEncoder& enc, const Graph& g, Rng& rng) {
  const GraphContext ctx(g);
  return dgi_loss(obj, enc, ctx, draw_corruption(g.n_nodes(), rng));
}

LossAndGradients gradients(const Model& model, const GraphContext& ctx,
                           const std::vector<Index>& permutation, double scale) {
  LossAndGradients out;
  out.gradients = zero_grads(model);
  out.loss = model.kind == ModelKind::dmon
                 ? dmon_forward_backward(model, ctx, scale, &out.gradients)
                 : dgi_forward_backward(model, ctx, permutation, scale, &out.gradients);
  return out;
}

LossAndGradients gradients(const Model& model, const GraphContext& ctx, Rng& rng, double scale) {
  if (model.kind == ModelKind::dmon) return gradients(model, ctx, std::vector<Index>{}, scale);
  return gradients(model, ctx, draw_corruption(ctx.n_nodes, rng), scale);
}

LossAndGradients gradients(const Model& model, const Graph& g, Rng& rng, double scale) {
  return gradients(model, GraphContext(g), rng, scale);
}

double model_loss(const Model& model, const GraphContext& ctx, const std::vector<Index>& permutation) {
  return model.kind == ModelKind::dmon ? dmon_forward_backward(model, ctx, 1.0, nullptr)
                                       : dgi_forward_backward(model, ctx, permutation, 1.0, nullptr);
}

Matrix soft_assignment(const Model& model, const GraphContext& ctx) {
  if (model.kind != ModelKind::dmon) throw std::logic_error("soft assignment needs a DMON model");
  return softmax_rows(gcn_forward(model.encoder, ctx) * model.dmon.weights);
}

std::vector<int> argmax_rows(const Matrix& m) {
  std::vector<int> out(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < m.cols(); ++j)
      if (m(i, j) > m(i, best)) best = j;
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

// ---------------------------------------------------------------------------
// k-means

namespace {

// Nearest centroid per point (lowest id on ties); returns inertia.
double assign(const Matrix& points, const Matrix& centroids, std::vector<int>& assignment) {
  double inertia = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < centroids.rows(); ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    assignment[static_cast<std::size_t>(i)] = best;
    inertia += best_d;
  }
  return inertia;
}

Matrix seed_plus_plus(const Matrix& points, int k, Rng& rng) {
  const Index n = points.rows();
  Matrix centroids(k, points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centroids.row(0) = points.row(pick(rng));
  Vector d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index chosen;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        target -= d2(i);
        if (target < 0.0 && d2(i) > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centroids.row(c) = points.row(chosen);
    d2 = d2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, Rng& rng, int restarts, int max_iter) {
  const Index n = points.rows();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n) throw std::invalid_argument("kmeans: k (" + std::to_string(k) + ") exceeds point count (" +
                                         std::to_string(n) + ")");
  KMeansResult best;
  if (k == n) {
    best.assignment.resize(static_cast<std::size_t>(n));
    std::iota(best.assignment.begin(), best.assignment.end(), 0);
    best.centroids = points;
    return best;
  }
  best.inertia = std::numeric_limits<double>::infinity();
  std::vector<int> assignment(static_cast<std::size_t>(n));
  for (int r = 0; r < std::max(1, restarts); ++r) {
    Matrix centroids = seed_plus_plus(points, k, rng);
    double inertia = assign(points, centroids, assignment);
    for (int it = 0; it < max_iter; ++it) {
      Matrix sums = Matrix::Zero(k, points.cols());
      Vector counts = Vector::Zero(k);
      for (Index i = 0; i < n; ++i) {
        sums.row(assignment[static_cast<std::size_t>(i)]) += points.row(i);
        counts(assignment[static_cast<std::size_t>(i)]) += 1.0;
      }
      for (int c = 0; c < k; ++c)
        if (counts(c) > 0) centroids.row(c) = sums.row(c) / counts(c);
      const std::vector<int> previous = assignment;
      inertia = assign(points, centroids, assignment);
      if (assignment == previous) break;
    }
    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.assignment = assignment;
      best.centroids = centroids;
    }
  }
  return best;
}

Partition extract_partition(const Model& model, const GraphContext& ctx, int k, Rng& rng) {
  if (k > ctx.n_nodes)
    throw std::invalid_argument("k (" + std::to_string(k) + ") exceeds n_nodes (" +
                                std::to_string(ctx.n_nodes) + ")");
  if (model.kind == ModelKind::dmon) {
    const Matrix c = soft_assignment(model, ctx);
    if (c.cols() != k) throw std::invalid_argument("DMON head has a different cluster count than k");
    return Partition(argmax_rows(c), k);
  }
  const Matrix h = gcn_forward(model.encoder, ctx);
  return Partition(kmeans(h, k, rng).assignment, k);
}

Partition extract_partition(const Model& model, const Graph& g, int k, Rng& rng) {
  return extract_partition(model, GraphContext(g), k, rng);
}

// ---------------------------------------------------------------------------
// Adam

Adam::Adam(double learning_rate, double weight_decay, double beta1, double beta2, double eps)
    : lr_(learning_rate), wd_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::step(const std::vector<Matrix*>& params, const std::vector<Matrix>& grads) {
  if (params.size() != grads.size()) throw std::invalid_argument("Adam: parameter/gradient count mismatch");
  if (m_.empty()) {
    for (const Matrix* p : params) {
      m_.push_back(Matrix::Zero(p->rows(), p->cols()));
      v_.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    const Matrix g = wd_ != 0.0 ? Matrix(grads[i] + wd_ * p) : grads[i];
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseProduct(g);
    p.array() -= lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
  }
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

constexpr char kMagic[8] = {'U', 'G', 'S', 'C', 'K', 'P', 'T', '1'};

template <typename T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("checkpoint truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void save_checkpoint(const Model& model, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, model.kind == ModelKind::dmon ? 0u : 1u);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.k));
  put<double>(out, model.dmon.collapse_weight);
  const auto params = model.parameters();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const Matrix* p : params) {
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p->rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p->cols()));
  }
  for (const Matrix* p : params)
    for (Index i = 0; i < p->rows(); ++i)
      for (Index j = 0; j < p->cols(); ++j) put<double>(out, (*p)(i, j));
  if (!out) throw std::runtime_error("checkpoint write failed");
}

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  save_checkpoint(model, out);
}

Model load_checkpoint(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic))
    throw std::runtime_error("not a checkpoint (bad magic)");
  Model m;
  const auto kind = get<std::uint32_t>(in);
  if (kind > 1) throw std::runtime_error("checkpoint: unknown model kind");
  m.kind = kind == 0 ? ModelKind::dmon : ModelKind::dgi;
  m.k = static_cast<int>(get<std::uint32_t>(in));
  const double collapse = get<double>(in);
  const auto count = get<std::uint32_t>(in);
  if (count < 2) throw std::runtime_error("checkpoint: needs at least two tensors");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> dims;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto r = get<std::uint64_t>(in);
    const auto c = get<std::uint64_t>(in);
    dims.emplace_back(r, c);
  }
  std::vector<Matrix> tensors;
  for (auto [r, c] : dims) {
    Matrix t(static_cast<Index>(r), static_cast<Index>(c));
    for (Index i = 0; i < t.rows(); ++i)
      for (Index j = 0; j < t.cols(); ++j) t(i, j) = get<double>(in);
    tensors.push_back(std::move(t));
  }
  for (std::size_t i = 0; i + 1 < tensors.size(); ++i) m.encoder.weights.push_back(std::move(tensors[i]));
  if (m.kind == ModelKind::dmon) {
    m.dmon.weights = std::move(tensors.back());
    m.dmon.collapse_weight = collapse;
  } else {
    m.dgi.discriminator = std::move(tensors.back());
  }
  for (std::size_t l = 1; l < m.encoder.weights.size(); ++l)
    if (m.encoder.weights[l - 1].cols() != m.encoder.weights[l].rows())
      throw std::runtime_error("checkpoint: encoder dims do not chain");
  return m;
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  return load_checkpoint(in);
}

}  // namespace ugs
