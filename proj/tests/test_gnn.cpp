#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "gradcheck.hpp"
#include "oracles.hpp"
#include "ugs/gnn.hpp"
#include "ugs/metrics.hpp"
#include "ugs/synthgen.hpp"

using namespace ugs;

namespace {

Graph two_triangles() {
  return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}, Matrix::Identity(6, 6));
}

Graph cycle(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(n, edges, Matrix::Ones(n, 3));
}

std::vector<Index> identity_permutation(Index n) {
  std::vector<Index> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Index{0});
  return p;
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

TEST_SUITE("gnn") {

TEST_CASE("model names") {
  CHECK(parse_model("dmon") == ModelKind::dmon);
  CHECK(parse_model("dgi") == ModelKind::dgi);
  CHECK_THROWS(parse_model("vgaer"));
  CHECK(to_string(ModelKind::dgi) == "dgi");
}

TEST_CASE("gcn forward examples") {
  GcnEncoder id{{Matrix::Identity(2, 2)}};
  Matrix x(1, 2);
  x << 1.5, 2.0;
  CHECK(gcn_forward(id, Graph(1, {}, x)) == x);

  GcnEncoder zero{{Matrix::Zero(2, 4)}};
  CHECK(gcn_forward(zero, Graph(1, {}, x)).isZero());

  Matrix f(2, 1);
  f << 2, 4;
  GcnEncoder one{{Matrix::Identity(1, 1)}};
  const Matrix h = gcn_forward(one, Graph(2, {{0, 1}}, f));
  CHECK(h(0, 0) == doctest::Approx(3.0));
  CHECK(h(1, 0) == doctest::Approx(3.0));

  GcnEncoder wrong{{Matrix::Identity(3, 3)}};
  CHECK_THROWS(gcn_forward(wrong, Graph(2, {{0, 1}}, f)));
}

TEST_CASE("relu and softmax") {
  Matrix z(2, 3);
  z << -1, 0, 2, 1000, 1000, -1000;
  CHECK(relu(z)(0, 0) == 0.0);
  CHECK(relu(z)(0, 2) == 2.0);
  const Matrix s = softmax_rows(z);
  CHECK(s.allFinite());
  CHECK(s.rowwise().sum().isApproxToConstant(1.0, 1e-15));
  CHECK(s(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("dmon loss examples") {
  const Graph g = two_triangles();
  const GraphContext ctx(g);
  for (int k : {2, 3, 5}) {
    const Matrix uniform = Matrix::Constant(6, k, 1.0 / k);
    const DmonTerms t = dmon_terms(uniform, ctx);
    CHECK(std::abs(t.trace) <= 1e-15);
    CHECK(std::abs(t.collapse) <= 1e-15);
    DmonHead head{Matrix::Zero(6, k), 1.0};
    CHECK(std::abs(dmon_loss(head, Matrix::Random(6, 6), ctx)) <= 1e-15);
  }
  Matrix onehot = Matrix::Zero(6, 2);
  onehot.block(0, 0, 3, 1).setOnes();
  onehot.block(3, 1, 3, 1).setOnes();
  const DmonTerms t = dmon_terms(onehot, ctx);
  CHECK(t.trace == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(std::abs(t.collapse) <= 1e-15);
  CHECK(dmon_terms(Matrix::Ones(6, 1), ctx).trace == doctest::Approx(0.0));
  CHECK_THROWS(dmon_terms(Matrix::Ones(6, 1), GraphContext(Graph(6, {}, Matrix::Ones(6, 1)))));
}

TEST_CASE("dmon trace equals -modularity for one-hot assignments (n <= 8)") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const Graph g = oracle::random_graph(n, 0.5, rng);
    const GraphContext ctx(g);
    oracle::for_each_set_partition(n, n, [&](const std::vector<int>& a, int k) {
      Matrix c = Matrix::Zero(n, k);
      for (int i = 0; i < n; ++i) c(i, a[static_cast<std::size_t>(i)]) = 1.0;
      CHECK(dmon_terms(c, ctx).trace == doctest::Approx(-modularity(g, Partition(a, k))).epsilon(1e-12));
    });
  }
}

TEST_CASE("dgi loss examples") {
  std::mt19937_64 gen(4);
  const Graph g = oracle::random_graph(7, 0.4, gen, 5);
  const GraphContext ctx(g);
  Rng rng(1);
  ModelConfig cfg{ModelKind::dgi, 4, 2, 2, 1.0};
  Model m = Model::init(cfg, 5, rng);

  DgiObjective zero{Matrix::Zero(4, 4)};
  CHECK(dgi_loss(zero, m.encoder, ctx, draw_corruption(7, rng)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  // Identity corruption: positive and negative logits coincide.
  const auto ident = identity_permutation(7);
  const Matrix h = gcn_forward(m.encoder, ctx);
  const Vector s = h.colwise().mean().transpose().unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  const Vector logits = h * (m.dgi.discriminator * s);
  double expected = 0.0;
  for (Index i = 0; i < 7; ++i) expected += softplus(-logits(i)) + softplus(logits(i));
  expected /= 14.0;
  const double loss = dgi_loss(m.dgi, m.encoder, ctx, ident);
  CHECK(loss == doctest::Approx(expected).epsilon(1e-12));
  CHECK(loss >= std::log(2.0) - 1e-15);

  CHECK_THROWS(dgi_loss(m.dgi, m.encoder, ctx, std::vector<Index>{0, 1}));
}

TEST_CASE("dgi loss matches an independent forward pass on a 4-node graph") {
  Matrix x(4, 3);
  x << 1, 0, 2, 0, 1, 1, 3, 1, 0, 0.5, -1, 1;
  const Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {1, 3}}, x);
  Rng rng(99);
  Model m = Model::init({ModelKind::dgi, 3, 1, 2, 1.0}, 3, rng);
  const auto perm = draw_corruption(4, rng);

  // Reference: explicit loops over a hand-built normalized adjacency.
  double a[4][4] = {};
  for (const auto& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = 1.0;
  for (int i = 0; i < 4; ++i) a[i][i] = 1.0;
  double deg[4] = {};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) deg[i] += a[i][j];
  auto embed = [&](const Matrix& feats) {
    Matrix h(4, 3);
    const Matrix& w = m.encoder.weights[0];
    for (int i = 0; i < 4; ++i)
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int j = 0; j < 4; ++j)
          for (int f = 0; f < 3; ++f) acc += a[i][j] / std::sqrt(deg[i] * deg[j]) * feats(j, f) * w(f, c);
        h(i, c) = std::max(0.0, acc);
      }
    return h;
  };
  Matrix shuffled(4, 3);
  for (int i = 0; i < 4; ++i) shuffled.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  const Matrix h = embed(x), ht = embed(shuffled);
  double summary[3];
  for (int c = 0; c < 3; ++c) {
    double mean = 0.0;
    for (int i = 0; i < 4; ++i) mean += h(i, c) / 4.0;
    summary[c] = 1.0 / (1.0 + std::exp(-mean));
  }
  double ref = 0.0;
  for (int i = 0; i < 4; ++i) {
    double pos = 0.0, neg = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        pos += h(i, r) * m.dgi.discriminator(r, c) * summary[c];
        neg += ht(i, r) * m.dgi.discriminator(r, c) * summary[c];
      }
    ref += -std::log(1.0 / (1.0 + std::exp(-pos))) - std::log(1.0 - 1.0 / (1.0 + std::exp(-neg)));
  }
  ref /= 8.0;
  CHECK(std::abs(dgi_loss(m.dgi, m.encoder, GraphContext(g), perm) - ref) <= 1e-10);
}

TEST_CASE("dgi loss is deterministic given the rng seed") {
  std::mt19937_64 gen(12);
  const Graph g = oracle::random_graph(10, 0.3, gen, 4);
  Rng init(3);
  const Model m = Model::init({ModelKind::dgi, 5, 1, 2, 1.0}, 4, init);
  Rng a(8), b(8);
  CHECK(dgi_loss(m.dgi, m.encoder, g, a) == dgi_loss(m.dgi, m.encoder, g, b));
}

TEST_CASE("analytic gradients agree with finite differences") {
  std::mt19937_64 gen(555);
  for (int trial = 0; trial < 6; ++trial) {
    const Graph g = oracle::random_graph(10, 0.35, gen, 6);
    const GraphContext ctx(g);
    for (auto kind : {ModelKind::dmon, ModelKind::dgi})
      for (int layers : {1, 2}) {
        Rng rng(static_cast<std::uint64_t>(trial * 10 + layers));
        const Model m = Model::init({kind, 5, layers, 3, 0.7}, 6, rng);
        const auto perm = draw_corruption(10, rng);
        CHECK(oracle::max_relative_gradient_error(m, ctx, perm) < 1e-4);
      }
  }
}

TEST_CASE("gradients are linear in the loss scale") {
  std::mt19937_64 gen(6);
  const Graph g = oracle::random_graph(9, 0.4, gen, 4);
  const GraphContext ctx(g);
  for (auto kind : {ModelKind::dmon, ModelKind::dgi}) {
    Rng rng(2);
    const Model m = Model::init({kind, 4, 2, 2, 1.0}, 4, rng);
    const auto perm = draw_corruption(9, rng);
    const auto one = gradients(m, ctx, perm, 1.0);
    const auto two = gradients(m, ctx, perm, 2.0);
    CHECK(two.loss == doctest::Approx(2.0 * one.loss));
    for (std::size_t t = 0; t < one.gradients.size(); ++t)
      CHECK(two.gradients[t].isApprox(2.0 * one.gradients[t], 1e-14));
  }
}

TEST_CASE("uniform assignment on a vertex-transitive graph is stationary") {
  const Graph g = cycle(8);
  const GraphContext ctx(g);
  Rng rng(1);
  Model m = Model::init({ModelKind::dmon, 4, 1, 3, 1.0}, 3, rng);
  m.dmon.weights.setZero();
  const auto lg = gradients(m, ctx, rng);
  for (const auto& grad : lg.gradients) CHECK(grad.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("partition extraction") {
  Matrix c(2, 2);
  c << 0.9, 0.1, 0.2, 0.8;
  CHECK(argmax_rows(c) == std::vector<int>{0, 1});
  Matrix tie(1, 3);
  tie << 0.4, 0.4, 0.2;
  CHECK(argmax_rows(tie) == std::vector<int>{0});

  // Two separated clouds.
  Rng rng(5);
  std::normal_distribution<double> noise(0.0, 0.1);
  Matrix pts(40, 2);
  for (Index i = 0; i < 40; ++i) {
    pts(i, 0) = (i < 20 ? 0.0 : 10.0) + noise(rng);
    pts(i, 1) = (i < 20 ? 0.0 : -10.0) + noise(rng);
  }
  const auto km = kmeans(pts, 2, rng);
  for (Index i = 1; i < 40; ++i)
    CHECK((km.assignment[static_cast<std::size_t>(i)] == km.assignment[0]) == (i < 20));

  // k == n: every node its own cluster.
  const Graph g = cycle(5);
  Model dgi = Model::init({ModelKind::dgi, 3, 1, 5, 1.0}, 3, rng);
  const Partition p = extract_partition(dgi, g, 5, rng);
  CHECK(p.assignment() == std::vector<int>{0, 1, 2, 3, 4});
  CHECK_THROWS(extract_partition(dgi, g, 6, rng));

  Model dmon = Model::init({ModelKind::dmon, 3, 1, 2, 1.0}, 3, rng);
  CHECK(extract_partition(dmon, g, 2, rng).k() == 2);
}

TEST_CASE("adam first step moves by the learning rate") {
  Matrix w = Matrix::Zero(1, 3);
  Matrix grad(1, 3);
  grad << 2.0, -0.5, 0.0;
  Adam opt(0.1);
  opt.step({&w}, {grad});
  CHECK(w(0, 0) == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(w(0, 1) == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(w(0, 2) == 0.0);

  // Weight decay adds wd * w to the gradient.
  Matrix v = Matrix::Ones(1, 1);
  Adam decay(0.1, 0.5);
  decay.step({&v}, {Matrix::Zero(1, 1)});
  CHECK(v(0, 0) == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("checkpoint round trip") {
  Rng rng(7);
  for (auto kind : {ModelKind::dmon, ModelKind::dgi}) {
    const Model m = Model::init({kind, 6, 2, 3, 0.25}, 5, rng);
    std::stringstream buf;
    save_checkpoint(m, buf);
    const std::string bytes = buf.str();
    CHECK(bytes.substr(0, 8) == "UGSCKPT1");
    const Model back = load_checkpoint(buf);
    CHECK(back.kind == kind);
    CHECK(back.k == 3);
    const auto a = m.parameters();
    const auto b = back.parameters();
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(*a[t] == *b[t]);
    if (kind == ModelKind::dmon) CHECK(back.dmon.collapse_weight == 0.25);
    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS(load_checkpoint(truncated));
  }
  std::stringstream junk("not a checkpoint");
  CHECK_THROWS(load_checkpoint(junk));
}

TEST_CASE("200 epochs of DMON lower the loss on distinct/distinct") {
  SynthSpec spec;
  spec.n_nodes = 200;
  spec.n_features = 100;
  const Graph g = generate(spec);
  const GraphContext ctx(g);
  int decreased = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    Model m = Model::init({ModelKind::dmon, 64, 1, 2, 1.0}, g.n_features(), rng);
    const double before = model_loss(m, ctx, {});
    Adam opt(0.001);
    for (int epoch = 0; epoch < 200; ++epoch) {
      const auto lg = gradients(m, ctx, rng);
      opt.step(m.parameters(), lg.gradients);
    }
    decreased += model_loss(m, ctx, {}) < before;
  }
  CHECK(decreased >= 9);
}

}  // TEST_SUITE
