#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "ugs/graph.hpp"

using namespace ugs;

namespace {

Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}, Matrix::Ones(3, 2)); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ugs_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("construction normalizes edges") {
  Graph g(4, {{2, 1}, {0, 3}}, Matrix::Zero(4, 1));
  REQUIRE(g.n_edges() == 2);
  CHECK(g.edges()[0] == Edge{0, 3});
  CHECK(g.edges()[1] == Edge{1, 2});
}

TEST_CASE("construction rejects invalid graphs") {
  CHECK_THROWS(Graph(3, {{1, 1}}, Matrix::Zero(3, 1)));
  CHECK_THROWS(Graph(3, {{0, 1}, {1, 0}}, Matrix::Zero(3, 1)));
  CHECK_THROWS(Graph(3, {{0, 3}}, Matrix::Zero(3, 1)));
  CHECK_THROWS(Graph(3, {}, Matrix::Zero(2, 1)));
  CHECK_THROWS(Graph(3, {}, Matrix::Zero(3, 1), std::vector<int>{0, 1, 2}, 2));
  CHECK_THROWS(Graph(3, {}, Matrix::Zero(3, 1), std::vector<int>{0, 1}, 2));
}

TEST_CASE("labels are optional") {
  Graph g = triangle();
  CHECK_FALSE(g.has_labels());
  CHECK_THROWS_AS(g.labels(), std::logic_error);
  Graph l(3, {}, Matrix::Zero(3, 1), std::vector<int>{0, 1, 1}, 2);
  CHECK(l.has_labels());
  CHECK_FALSE(l.without_labels().has_labels());
  CHECK(l.without_labels().n_classes() == 2);
}

TEST_CASE("degrees") {
  CHECK(degrees(triangle()) == std::vector<Index>{2, 2, 2});
  CHECK(degrees(Graph(3, {}, Matrix::Zero(3, 1))) == std::vector<Index>{0, 0, 0});
  CHECK(degrees(Graph(3, {{0, 1}, {1, 2}}, Matrix::Zero(3, 1))) == std::vector<Index>{1, 2, 1});
}

TEST_CASE("adjacency is symmetric 0/1") {
  std::mt19937_64 rng(3);
  const Graph g = oracle::random_graph(9, 0.4, rng);
  const Matrix a = adjacency_matrix(g);
  CHECK(a == a.transpose());
  CHECK(a.sum() == doctest::Approx(2.0 * static_cast<double>(g.n_edges())));
  CHECK(a.diagonal().isZero());
}

TEST_CASE("normalized adjacency examples") {
  Matrix single = normalized_adjacency(Graph(1, {}, Matrix::Ones(1, 1)));
  REQUIRE(single.rows() == 1);
  CHECK(single(0, 0) == 1.0);

  Matrix pair = normalized_adjacency(Graph(2, {{0, 1}}, Matrix::Ones(2, 1)));
  CHECK(pair.isApprox(Matrix::Constant(2, 2, 0.5), 1e-15));

  Matrix tri = normalized_adjacency(triangle());
  CHECK(tri.isApprox(Matrix::Constant(3, 3, 1.0 / 3.0), 1e-15));
}

TEST_CASE("normalized adjacency is symmetric with spectral radius <= 1") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 49);
    const Graph g = oracle::random_graph(n, 0.15, rng);
    const Matrix a = normalized_adjacency(g);
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    // Power iteration on A^2 (positive semidefinite) bounds |lambda|^2.
    Vector v = Vector::Ones(n).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 500; ++it) {
      Vector w = a * (a * v);
      lambda = w.norm();
      if (lambda == 0.0) break;
      v = w / lambda;
    }
    CHECK(std::sqrt(lambda) <= 1.0 + 1e-9);
  }
}

TEST_CASE("subsample_edges") {
  std::vector<Edge> edges;
  for (Index i = 0; i < 10; ++i) edges.push_back({i, i + 1});
  const Graph g(11, edges, Matrix::Random(11, 2), std::vector<int>(11, 0), 1);

  Rng rng(1);
  CHECK(subsample_edges(g, 1.0, rng).edges() == g.edges());

  Rng a(5), b(5), c(6);
  const Graph half = subsample_edges(g, 0.5, a);
  CHECK(half.n_edges() == 5);
  for (const auto& e : half.edges()) CHECK(std::find(g.edges().begin(), g.edges().end(), e) != g.edges().end());
  CHECK(half.features() == g.features());
  CHECK(half.labels() == g.labels());
  CHECK(subsample_edges(g, 0.5, b).edges() == half.edges());
  (void)subsample_edges(g, 0.5, c);

  Rng r(1);
  CHECK_THROWS(subsample_edges(g, 0.0, r));
  CHECK_THROWS(subsample_edges(g, 1.5, r));
}

TEST_CASE("subsampled degree sum is 2 ceil(f |E|)") {
  std::mt19937_64 gen(17);
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = oracle::random_graph(5 + static_cast<int>(gen() % 20), 0.3, gen);
    const double f = std::uniform_real_distribution<double>(0.01, 1.0)(gen);
    const auto deg = degrees(subsample_edges(g, f, rng));
    const auto expected = static_cast<Index>(std::ceil(f * static_cast<double>(g.n_edges()) - 1e-9));
    CHECK(std::accumulate(deg.begin(), deg.end(), Index{0}) == 2 * expected);
  }
}

TEST_CASE("partition invariants") {
  CHECK_THROWS(Partition({0, 2}, 2));
  CHECK_THROWS(Partition({0, -1}, 2));
  Partition p = Partition::from_assignment({0, 2, 1});
  CHECK(p.k() == 3);
  CHECK(p.size() == 3);
}

TEST_CASE("dataset round trip is exact") {
  std::mt19937_64 rng(23);
  Graph g = oracle::random_graph(12, 0.3, rng, 4);
  std::vector<int> labels(12);
  for (auto& l : labels) l = static_cast<int>(rng() % 3);
  g = Graph(12, g.edges(), g.features(), labels, 3, "roundtrip");
  for (auto convention : {EdgeConvention::unordered, EdgeConvention::directed_double}) {
    const auto dir = scratch("roundtrip");
    write_dataset(g, dir, convention);
    const Graph back = load_dataset(dir);
    CHECK(back.name() == "roundtrip");
    CHECK(back.edges() == g.edges());
    CHECK(back.features() == g.features());
    CHECK(back.labels() == g.labels());
    CHECK(back.n_classes() == 3);
  }
}

TEST_CASE("loader accepts an empty edge file") {
  const auto dir = scratch("isolated");
  write(dir / "meta.json",
        R"({"name": "iso", "n_nodes": 3, "n_features": 2, "n_classes": 1, "edge_convention": "unordered"})");
  write(dir / "edges.tsv", "");
  write(dir / "features.csv", "1,0\n0,1\n1,1\n");
  const Graph g = load_dataset(dir);
  CHECK(g.n_nodes() == 3);
  CHECK(g.n_edges() == 0);
  CHECK_FALSE(g.has_labels());
}

TEST_CASE("loader errors carry file and line") {
  const auto dir = scratch("bad");
  write(dir / "meta.json",
        R"({"name": "bad", "n_nodes": 3, "n_features": 2, "n_classes": 2, "edge_convention": "unordered"})");
  write(dir / "features.csv", "1,0\n0,1\n1,1\n");

  write(dir / "edges.tsv", "0\t1\n1\tx\n");
  try {
    (void)load_dataset(dir);
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.file().filename() == "edges.tsv");
    CHECK(e.line() == 2);
  }

  write(dir / "edges.tsv", "0\t1\n");
  write(dir / "labels.csv", "0\n1\n2\n");
  try {
    (void)load_dataset(dir);
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.file().filename() == "labels.csv");
    CHECK(e.line() == 3);
  }

  write(dir / "labels.csv", "0\n1\n");
  CHECK_THROWS_AS(load_dataset(dir), DatasetError);

  std::filesystem::remove(dir / "labels.csv");
  write(dir / "features.csv", "1,0\n0,1\n");
  CHECK_THROWS_AS(load_dataset(dir), DatasetError);

  write(dir / "features.csv", "1,0\n0,1\n1,1,1\n");
  CHECK_THROWS_AS(load_dataset(dir), DatasetError);

  std::filesystem::remove(dir / "features.csv");
  CHECK_THROWS_AS(load_dataset(dir), DatasetError);
}

TEST_CASE("directed_double convention needs both directions") {
  const auto dir = scratch("directed");
  write(dir / "meta.json",
        R"({"name": "d", "n_nodes": 3, "n_features": 1, "n_classes": 1, "edge_convention": "directed_double"})");
  write(dir / "features.csv", "1\n1\n1\n");
  write(dir / "edges.tsv", "0\t1\n1\t0\n1\t2\n2\t1\n");
  CHECK(load_dataset(dir).n_edges() == 2);
  write(dir / "edges.tsv", "0\t1\n1\t0\n1\t2\n");
  CHECK_THROWS_AS(load_dataset(dir), DatasetError);
}

}  // TEST_SUITE
