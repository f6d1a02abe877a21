#include "ugs/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ugs {

namespace fs = std::filesystem;

DatasetError::DatasetError(const std::string& what, fs::path file, std::size_t line)
    : std::runtime_error([&] {
        std::string msg = what;
        if (!file.empty()) msg += " [" + file.string() + (line ? ":" + std::to_string(line) : "") + "]";
        return msg;
      }()),
      file_(std::move(file)),
      line_(line) {}

Graph::Graph(Index n_nodes, std::vector<Edge> edges, Matrix features,
             std::optional<std::vector<int>> labels, int n_classes, std::string name)
    : n_nodes_(n_nodes),
      edges_(std::move(edges)),
      features_(std::make_shared<const Matrix>(std::move(features))),
      labels_(std::move(labels)),
      n_classes_(n_classes),
      name_(std::move(name)) {
  if (n_nodes_ < 0) throw std::invalid_argument("negative node count");
  if (features_->rows() != n_nodes_)
    throw std::invalid_argument("feature rows (" + std::to_string(features_->rows()) +
                                ") != n_nodes (" + std::to_string(n_nodes_) + ")");
  for (auto& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= n_nodes_ || e.v >= n_nodes_)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("duplicate edge");
  if (labels_) {
    if (static_cast<Index>(labels_->size()) != n_nodes_)
      throw std::invalid_argument("label count != n_nodes");
    for (int l : *labels_)
      if (l < 0 || l >= n_classes_)
        throw std::invalid_argument("label id " + std::to_string(l) + " outside [0, " +
                                    std::to_string(n_classes_) + ")");
  }
}

const std::vector<int>& Graph::labels() const {
  if (!labels_) throw std::logic_error("graph '" + name_ + "' carries no labels");
  return *labels_;
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
  Graph out = *this;
  for (auto& e : edges) {
    if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= n_nodes_ || e.v >= n_nodes_)
      throw std::invalid_argument("invalid edge in with_edges");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge");
  out.edges_ = std::move(edges);
  return out;
}

Graph Graph::without_labels() const {
  Graph out = *this;
  out.labels_.reset();
  return out;
}

Graph Graph::renamed(std::string name) const {
  Graph out = *this;
  out.name_ = std::move(name);
  return out;
}

Partition::Partition(std::vector<int> assignment, int k) : assignment_(std::move(assignment)), k_(k) {
  if (k_ < 0) throw std::invalid_argument("negative cluster count");
  for (int c : assignment_)
    if (c < 0 || c >= k_)
      throw std::invalid_argument("cluster id " + std::to_string(c) + " outside [0, " +
                                  std::to_string(k_) + ")");
}

Partition Partition::from_assignment(std::vector<int> assignment) {
  int k = 0;
  for (int c : assignment) k = std::max(k, c + 1);
  return Partition(std::move(assignment), k);
}

std::vector<Index> degrees(const Graph& g) {
  std::vector<Index> deg(static_cast<std::size_t>(g.n_nodes()), 0);
  for (const auto& e : g.edges()) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

Matrix adjacency_matrix(const Graph& g) {
  Matrix a = Matrix::Zero(g.n_nodes(), g.n_nodes());
  for (const auto& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

Matrix normalized_adjacency(const Graph& g) {
  const auto deg = degrees(g);
  Vector inv_sqrt(g.n_nodes());
  for (Index i = 0; i < g.n_nodes(); ++i)
    inv_sqrt(i) = 1.0 / std::sqrt(static_cast<double>(deg[static_cast<std::size_t>(i)] + 1));
  Matrix a_hat = Matrix::Zero(g.n_nodes(), g.n_nodes());
  for (Index i = 0; i < g.n_nodes(); ++i) a_hat(i, i) = inv_sqrt(i) * inv_sqrt(i);
  for (const auto& e : g.edges()) {
    const double w = inv_sqrt(e.u) * inv_sqrt(e.v);
    a_hat(e.u, e.v) = w;
    a_hat(e.v, e.u) = w;
  }
  return a_hat;
}

Graph subsample_edges(const Graph& g, double fraction, Rng& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("edge fraction must lie in (0, 1], got " + std::to_string(fraction));
  const auto m = static_cast<double>(g.n_edges());
  // 0.33 * 100 is 33.000000000000004 in binary; keep such products at 33.
  const auto keep = static_cast<std::size_t>(std::ceil(fraction * m - 1e-9 * std::max(1.0, m)));
  std::vector<Edge> kept;
  kept.reserve(keep);
  std::sample(g.edges().begin(), g.edges().end(), std::back_inserter(kept), keep, rng);
  return g.with_edges(std::move(kept));
}

// ---------------------------------------------------------------------------
// Dataset IO

namespace {

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DatasetError("missing or unreadable file", p);
  return in;
}

template <typename T>
T parse_number(std::string_view tok, const fs::path& file, std::size_t line) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
    tok.remove_suffix(1);
  T value{};
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end || tok.empty())
    throw DatasetError("malformed value '" + std::string(tok) + "'", file, line);
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

void write_double(std::ostream& os, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, ptr - buf);
}

}  // namespace

Graph load_dataset(const fs::path& dir) {
  const auto meta_path = dir / "meta.json";
  auto meta_in = open_input(meta_path);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("invalid JSON: ") + e.what(), meta_path);
  }
  auto field = [&](const char* key) -> const nlohmann::json& {
    if (!meta.contains(key)) throw DatasetError(std::string("meta is missing '") + key + "'", meta_path);
    return meta.at(key);
  };
  Index n_nodes = 0, n_features = 0;
  int n_classes = 0;
  std::string name, convention_text;
  try {
    name = field("name").get<std::string>();
    n_nodes = field("n_nodes").get<Index>();
    n_features = field("n_features").get<Index>();
    n_classes = field("n_classes").get<int>();
    convention_text = field("edge_convention").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("bad meta field type: ") + e.what(), meta_path);
  }
  if (n_nodes < 0 || n_features < 0 || n_classes < 0)
    throw DatasetError("negative count in meta", meta_path);
  EdgeConvention convention;
  if (convention_text == "unordered") {
    convention = EdgeConvention::unordered;
  } else if (convention_text == "directed_double") {
    convention = EdgeConvention::directed_double;
  } else {
    throw DatasetError("unknown edge_convention '" + convention_text + "'", meta_path);
  }

  // Edges.
  const auto edge_path = dir / "edges.tsv";
  auto edge_in = open_input(edge_path);
  std::vector<Edge> directed;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(edge_in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2) throw DatasetError("expected 'u<TAB>v'", edge_path, lineno);
    auto u = parse_number<Index>(cols[0], edge_path, lineno);
    auto v = parse_number<Index>(cols[1], edge_path, lineno);
    if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes)
      throw DatasetError("edge endpoint out of range", edge_path, lineno);
    if (u == v) throw DatasetError("self-loop", edge_path, lineno);
    directed.push_back({u, v});
  }
  const auto n_lines = directed.size();
  std::vector<Edge> edges;
  if (convention == EdgeConvention::unordered) {
    edges = directed;
    for (auto& e : edges)
      if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw DatasetError("duplicate edge under 'unordered' convention", edge_path);
  } else {
    std::sort(directed.begin(), directed.end());
    if (std::adjacent_find(directed.begin(), directed.end()) != directed.end())
      throw DatasetError("duplicate directed edge", edge_path);
    for (const auto& e : directed) {
      if (!std::binary_search(directed.begin(), directed.end(), Edge{e.v, e.u}))
        throw DatasetError("edge " + std::to_string(e.u) + "->" + std::to_string(e.v) +
                               " has no reverse under 'directed_double' convention",
                           edge_path);
      if (e.u < e.v) edges.push_back(e);
    }
  }
  if (meta.contains("n_edges")) {
    const auto declared = meta.at("n_edges").get<std::size_t>();
    if (declared != n_lines)
      throw DatasetError("meta declares " + std::to_string(declared) + " edges, file has " +
                             std::to_string(n_lines),
                         edge_path);
  }

  // Features.
  const auto feat_path = dir / "features.csv";
  auto feat_in = open_input(feat_path);
  Matrix features(n_nodes, n_features);
  Index row = 0;
  lineno = 0;
  while (std::getline(feat_in, line)) {
    ++lineno;
    if (blank(line)) continue;
    if (row >= n_nodes) throw DatasetError("more feature rows than n_nodes", feat_path, lineno);
    if (n_features == 0) {
      ++row;
      continue;
    }
    auto cols = split(line, ',');
    if (static_cast<Index>(cols.size()) != n_features)
      throw DatasetError("expected " + std::to_string(n_features) + " columns, got " +
                             std::to_string(cols.size()),
                         feat_path, lineno);
    for (Index j = 0; j < n_features; ++j)
      features(row, j) = parse_number<double>(cols[static_cast<std::size_t>(j)], feat_path, lineno);
    ++row;
  }
  if (row != n_nodes)
    throw DatasetError("feature rows (" + std::to_string(row) + ") != n_nodes (" +
                           std::to_string(n_nodes) + ")",
                       feat_path);

  // Labels, optional.
  std::optional<std::vector<int>> labels;
  const auto label_path = dir / "labels.csv";
  if (fs::exists(label_path)) {
    auto label_in = open_input(label_path);
    std::vector<int> ls;
    lineno = 0;
    while (std::getline(label_in, line)) {
      ++lineno;
      if (blank(line)) continue;
      int l = parse_number<int>(line, label_path, lineno);
      if (l < 0 || l >= n_classes)
        throw DatasetError("label id " + std::to_string(l) + " outside [0, " +
                               std::to_string(n_classes) + ")",
                           label_path, lineno);
      ls.push_back(l);
    }
    if (static_cast<Index>(ls.size()) != n_nodes)
      throw DatasetError("label rows (" + std::to_string(ls.size()) + ") != n_nodes (" +
                             std::to_string(n_nodes) + ")",
                         label_path);
    labels = std::move(ls);
  }

  return Graph(n_nodes, std::move(edges), std::move(features), std::move(labels), n_classes,
               std::move(name));
}

void write_dataset(const Graph& g, const fs::path& dir, EdgeConvention convention) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DatasetError("cannot create directory: " + ec.message(), dir);

  auto open_output = [](const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DatasetError("cannot write file", p);
    return out;
  };

  const bool doubled = convention == EdgeConvention::directed_double;
  nlohmann::ordered_json meta;
  meta["name"] = g.name();
  meta["n_nodes"] = g.n_nodes();
  meta["n_features"] = g.n_features();
  meta["n_classes"] = g.n_classes();
  meta["edge_convention"] = doubled ? "directed_double" : "unordered";
  meta["n_edges"] = g.n_edges() * (doubled ? 2 : 1);
  open_output(dir / "meta.json") << meta.dump(2) << '\n';

  {
    auto out = open_output(dir / "edges.tsv");
    std::string buf;
    for (const auto& e : g.edges()) {
      buf += std::to_string(e.u) + '\t' + std::to_string(e.v) + '\n';
      if (doubled) buf += std::to_string(e.v) + '\t' + std::to_string(e.u) + '\n';
    }
    out << buf;
  }
  {
    auto out = open_output(dir / "features.csv");
    const Matrix& x = g.features();
    for (Index i = 0; i < x.rows(); ++i) {
      for (Index j = 0; j < x.cols(); ++j) {
        if (j) out.put(',');
        write_double(out, x(i, j));
      }
      out.put('\n');
    }
  }
  const auto label_path = dir / "labels.csv";
  if (g.has_labels()) {
    auto out = open_output(label_path);
    for (int l : g.labels()) out << l << '\n';
  } else {
    fs::remove(label_path, ec);
  }
}

}  // namespace ugs
