#include "ugs/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ugs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fixed(double v, int digits = 3) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos) s = s.substr(s.front() == '-' ? 1 : 0);
  return s;
}

}  // namespace

std::string MetricPair::label() const {
  return std::string(to_string(predictor)) + "->" + std::string(to_string(target));
}

Vector polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size()) throw std::invalid_argument("polyfit: x and y differ in length");
  if (degree < 0) throw std::invalid_argument("polyfit: negative degree");
  const auto n = static_cast<Index>(x.size());
  Matrix design(n, degree + 1);
  Vector target(n);
  for (Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      design(i, d) = p;
      p *= x[static_cast<std::size_t>(i)];
    }
    target(i) = y[static_cast<std::size_t>(i)];
  }
  return design.completeOrthogonalDecomposition().solve(target);
}

double r2_fit(std::span<const double> x, std::span<const double> y, int degree) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("r2_fit: degree must be 1 or 2");
  if (x.size() != y.size()) throw std::invalid_argument("r2_fit: x and y differ in length");
  if (x.size() < static_cast<std::size_t>(degree + 2))
    throw std::invalid_argument("r2_fit: need at least " + std::to_string(degree + 2) + " observations, got " +
                                std::to_string(x.size()));
  const Vector coef = polyfit(x, y, degree);
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double fit = 0.0, p = 1.0;
    for (Index d = 0; d < coef.size(); ++d) {
      fit += coef(d) * p;
      p *= x[i];
    }
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot == 0.0) return 0.0;
  return 1.0 - ss_res / ss_tot;
}

double r2_fit(const MetricPair& pair, int degree) { return r2_fit(pair.x, pair.y, degree); }

double signed_mae(std::span<const SelectionOutcome> unsupervised, std::span<const SelectionOutcome> supervised) {
  if (unsupervised.size() != supervised.size())
    throw std::invalid_argument("signed_mae: " + std::to_string(unsupervised.size()) + " unsupervised vs " +
                                std::to_string(supervised.size()) + " supervised runs");
  if (unsupervised.empty()) throw std::invalid_argument("signed_mae: no runs");
  std::map<decltype(supervised[0].key()), double> sup;
  for (const auto& s : supervised)
    if (!sup.emplace(s.key(), s.value).second) throw std::invalid_argument("signed_mae: duplicate supervised run");
  double total = 0.0;
  for (const auto& u : unsupervised) {
    const auto it = sup.find(u.key());
    if (it == sup.end())
      throw std::invalid_argument("signed_mae: unpaired run " + u.model + "/" + u.dataset + "/" +
                                  std::to_string(u.seed));
    total += u.value - it->second;
    sup.erase(it);
  }
  return total / static_cast<double>(unsupervised.size());
}

std::vector<double> average_ranks(std::span<const double> scores, Direction direction) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return direction == Direction::maximize ? scores[a] > scores[b] : scores[a] < scores[b];
  });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

double kendall_w(const Matrix& ranks) {
  const Index m = ranks.rows(), n = ranks.cols();
  if (m < 2 || n < 2)
    throw std::invalid_argument("kendall_w: need >= 2 seeds and >= 2 algorithms, got " + std::to_string(m) +
                                "x" + std::to_string(n));
  const Vector sums = ranks.colwise().sum().transpose();
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  const double mean = md * (nd + 1.0) / 2.0;
  const double s = (sums.array() - mean).square().sum();
  double ties = 0.0;
  for (Index r = 0; r < m; ++r) {
    std::map<double, int> groups;
    for (Index c = 0; c < n; ++c) ++groups[ranks(r, c)];
    for (const auto& [rank, t] : groups) ties += static_cast<double>(t) * t * t - t;
  }
  const double denom = md * md * (nd * nd * nd - nd) - md * ties;
  if (denom <= 0.0) return 1.0;
  return std::clamp(12.0 * s / denom, 0.0, 1.0);
}

RankCell rank_cell(std::string dataset, MetricName metric, const Matrix& scores) {
  RankCell cell{std::move(dataset), std::string(to_string(metric)), Matrix(scores.rows(), scores.cols())};
  for (Index r = 0; r < scores.rows(); ++r) {
    const Vector row = scores.row(r).transpose();
    const auto ranks = average_ranks(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())),
                                     direction_of(metric));
    for (Index c = 0; c < scores.cols(); ++c) cell.ranks(r, c) = ranks[static_cast<std::size_t>(c)];
  }
  return cell;
}

double w_coefficient(const RankTable& table) {
  if (table.cells.empty()) throw std::invalid_argument("w_coefficient: empty rank table");
  double total = 0.0;
  for (const auto& cell : table.cells) total += 1.0 - kendall_w(cell.ranks);
  return total / static_cast<double>(table.cells.size());
}

std::string fcr_cell_key(const RunSummary& r, MetricName target) {
  return r.model + '|' + r.dataset + '|' + std::to_string(r.seed) + '|' + r.selection_metric + '|' +
         format_number(r.edge_fraction) + '|' + std::string(to_string(target));
}

FrameworkGrid framework_grid(std::string name, std::span<const RunSummary> rows) {
  FrameworkGrid grid{std::move(name), {}};
  for (const auto& r : rows)
    for (MetricName target : {MetricName::f1, MetricName::nmi}) {
      const double v = r.value(target);
      if (std::isnan(v)) continue;
      if (!grid.cells.emplace(fcr_cell_key(r, target), std::pair{v, direction_of(target)}).second)
        throw std::invalid_argument("framework '" + grid.name + "' has duplicate cell " + fcr_cell_key(r, target));
    }
  return grid;
}

std::vector<double> fcr(std::span<const FrameworkGrid> frameworks) {
  if (frameworks.size() < 2) throw std::invalid_argument("fcr: need at least two frameworks");
  const auto& reference = frameworks.front().cells;
  if (reference.empty()) throw std::invalid_argument("fcr: empty grid");
  for (const auto& f : frameworks) {
    if (f.cells.size() != reference.size())
      throw std::invalid_argument("fcr: mismatched grids ('" + f.name + "' has " + std::to_string(f.cells.size()) +
                                  " cells, expected " + std::to_string(reference.size()) + ")");
    for (const auto& [key, value] : reference) {
      const auto it = f.cells.find(key);
      if (it == f.cells.end()) throw std::invalid_argument("fcr: mismatched grids, '" + f.name + "' lacks " + key);
      if (it->second.second != value.second) throw std::invalid_argument("fcr: direction mismatch at " + key);
    }
  }
  std::vector<double> totals(frameworks.size(), 0.0);
  std::vector<double> scores(frameworks.size());
  for (const auto& [key, value] : reference) {
    for (std::size_t f = 0; f < frameworks.size(); ++f) scores[f] = frameworks[f].cells.at(key).first;
    const auto ranks = average_ranks(scores, value.second);
    for (std::size_t f = 0; f < frameworks.size(); ++f) totals[f] += ranks[f];
  }
  for (auto& t : totals) t /= static_cast<double>(reference.size());
  return totals;
}

// ---------------------------------------------------------------------------
// Tables

namespace {

using Rows = std::vector<const RunSummary*>;

MetricPair make_pair(const Rows& rows, MetricName predictor, MetricName target) {
  MetricPair pair{predictor, target, {}, {}};
  for (const auto* r : rows) {
    if (r->selection_metric != to_string(predictor)) continue;
    const double x = r->value(predictor), y = r->value(target);
    if (std::isnan(x) || std::isnan(y)) continue;
    pair.x.push_back(x);
    pair.y.push_back(y);
  }
  return pair;
}

double safe_r2(const MetricPair& p, int degree) {
  if (p.x.size() < static_cast<std::size_t>(degree + 2)) return kNaN;
  return r2_fit(p, degree);
}

double pair_w(const Rows& rows, MetricName predictor, MetricName target) {
  // dataset -> seed -> model -> value
  std::map<std::string, std::map<std::uint64_t, std::map<std::string, double>>> grouped;
  for (const auto* r : rows) {
    if (r->selection_metric != to_string(predictor) || std::isnan(r->value(target))) continue;
    grouped[r->dataset][r->seed][r->model] = r->value(target);
  }
  RankTable table;
  for (const auto& [dataset, by_seed] : grouped) {
    std::set<std::string> models;
    for (const auto& [seed, by_model] : by_seed)
      for (const auto& [model, v] : by_model) models.insert(model);
    std::vector<std::vector<double>> complete;
    for (const auto& [seed, by_model] : by_seed) {
      if (by_model.size() != models.size()) continue;
      std::vector<double> row;
      for (const auto& m : models) row.push_back(by_model.at(m));
      complete.push_back(std::move(row));
    }
    if (models.size() < 2 || complete.size() < 2) continue;
    Matrix scores(static_cast<Index>(complete.size()), static_cast<Index>(models.size()));
    for (std::size_t s = 0; s < complete.size(); ++s)
      for (std::size_t m = 0; m < models.size(); ++m)
        scores(static_cast<Index>(s), static_cast<Index>(m)) = complete[s][m];
    table.cells.push_back(rank_cell(dataset, target, scores));
  }
  return table.cells.empty() ? kNaN : w_coefficient(table);
}

double pair_mae(const Rows& rows, MetricName predictor, MetricName target) {
  std::vector<SelectionOutcome> unsup, sup;
  for (const auto* r : rows) {
    if (r->selection_metric != to_string(predictor)) continue;
    const double u = r->value(target), s = r->reference(target);
    if (std::isnan(u) || std::isnan(s)) continue;
    unsup.push_back({r->model, r->dataset, r->seed, r->edge_fraction, u});
    sup.push_back({r->model, r->dataset, r->seed, r->edge_fraction, s});
  }
  return unsup.empty() ? kNaN : signed_mae(unsup, sup);
}

double pair_abs_delta(const Rows& rows, MetricName predictor, MetricName target) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto* r : rows) {
    if (r->selection_metric != to_string(predictor)) continue;
    const double u = r->value(target), s = r->reference(target);
    if (std::isnan(u) || std::isnan(s)) continue;
    total += std::abs(u - s);
    ++count;
  }
  return count ? total / static_cast<double>(count) : kNaN;
}

std::vector<PairRow> pair_rows(const Rows& rows) {
  std::vector<PairRow> out;
  for (auto [pred, target] : kMetricPairs) {
    const MetricPair p = make_pair(rows, pred, target);
    out.push_back({p.label(), p.x.size(), safe_r2(p, 1), safe_r2(p, 2), pair_w(rows, pred, target),
                   pair_mae(rows, pred, target)});
  }
  return out;
}

SliceRow slice_row(std::string name, const Rows& rows) {
  SliceRow row{std::move(name), {}};
  for (std::size_t i = 0; i < kMetricPairs.size(); ++i)
    row.quadratic_r2[i] = safe_r2(make_pair(rows, kMetricPairs[i].first, kMetricPairs[i].second), 2);
  return row;
}

}  // namespace

AnalysisTables build_tables(std::string framework, std::span<const RunSummary> rows) {
  if (rows.empty()) throw std::invalid_argument("build_tables: empty record set");
  AnalysisTables t;
  t.framework = std::move(framework);
  Rows full;
  std::map<double, Rows> reduced;
  for (const auto& r : rows) (r.edge_fraction < 1.0 ? reduced[r.edge_fraction] : full).push_back(&r);

  t.overall = pair_rows(full);

  std::map<std::string, Rows> by_model, by_dataset;
  for (const auto* r : full) {
    by_model[r->model].push_back(r);
    by_dataset[r->dataset].push_back(r);
  }
  for (const auto& [name, subset] : by_model) t.per_algorithm.push_back(slice_row(name, subset));
  for (const auto& [name, subset] : by_dataset) t.per_dataset.push_back(slice_row(name, subset));

  for (const auto& [fraction, subset] : reduced) t.reduced[fraction] = pair_rows(subset);

  for (const auto& [name, subset] : by_dataset) {
    if (name.rfind("synth_", 0) != 0) continue;
    DeltaRow row{name, {}};
    for (std::size_t i = 0; i < kMetricPairs.size(); ++i)
      row.delta[i] = pair_abs_delta(subset, kMetricPairs[i].first, kMetricPairs[i].second);
    t.synthetic_delta.push_back(std::move(row));
  }

  for (auto [pred, target] : kMetricPairs) {
    ScatterSeries s{make_pair(full, pred, target), {}, {}};
    if (s.pair.x.size() >= 3) s.linear = polyfit(s.pair.x, s.pair.y, 1);
    if (s.pair.x.size() >= 4) s.quadratic = polyfit(s.pair.x, s.pair.y, 2);
    t.scatter.push_back(std::move(s));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Output

namespace {

double eval_poly(const Vector& c, double x) {
  double y = 0.0, p = 1.0;
  for (Index i = 0; i < c.size(); ++i) {
    y += c(i) * p;
    p *= x;
  }
  return y;
}

std::string safe_name(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '-';
  return s;
}

std::string pair_file_label(const MetricPair& p) {
  return std::string(to_string(p.predictor)) + "-" + std::string(to_string(p.target));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string pair_table_csv(const std::vector<PairRow>& rows, const std::string& prefix_header,
                           const std::string& prefix) {
  std::string out;
  for (const auto& r : rows)
    out += prefix + r.label + ',' + std::to_string(r.n) + ',' + format_number(r.linear_r2) + ',' +
           format_number(r.quadratic_r2) + ',' + format_number(r.w) + ',' + format_number(r.mae) + '\n';
  return prefix_header + out;
}

std::string pair_table_md(const std::vector<PairRow>& rows) {
  std::string md = "| Metric optimised -> labelled metric | n | l-R2 | q-R2 | W | MAE |\n|---|---|---|---|---|---|\n";
  for (const auto& r : rows)
    md += "| " + r.label + " | " + std::to_string(r.n) + " | " + fixed(r.linear_r2, 2) + " | " +
          fixed(r.quadratic_r2, 2) + " | " + fixed(r.w, 2) + " | " + fixed(r.mae, 2) + " |\n";
  return md;
}

std::string slice_csv(const std::vector<SliceRow>& rows, const std::string& what) {
  std::string out = what + ",modularity->f1,modularity->nmi,conductance->f1,conductance->nmi\n";
  for (const auto& r : rows) {
    out += r.name;
    for (double v : r.quadratic_r2) out += ',' + format_number(v);
    out += '\n';
  }
  return out;
}

std::string slice_md(const std::vector<SliceRow>& rows, const std::string& what) {
  std::string md = "| " + what + " | M->F1 | M->NMI | C->F1 | C->NMI |\n|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    md += "| " + r.name;
    for (double v : r.quadratic_r2) md += " | " + fixed(v, 2);
    md += " |\n";
  }
  return md;
}

}  // namespace

std::string scatter_svg(const ScatterSeries& s, const std::string& title) {
  constexpr double W = 480, H = 360, left = 56, right = 16, top = 32, bottom = 48;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!s.pair.x.empty()) {
    xmin = *std::min_element(s.pair.x.begin(), s.pair.x.end());
    xmax = *std::max_element(s.pair.x.begin(), s.pair.x.end());
    ymin = std::min(0.0, *std::min_element(s.pair.y.begin(), s.pair.y.end()));
    ymax = std::max(1.0, *std::max_element(s.pair.y.begin(), s.pair.y.end()));
  }
  if (xmax - xmin < 1e-9) {
    xmin -= 0.05;
    xmax += 0.05;
  }
  const double pad = 0.05 * (xmax - xmin);
  xmin -= pad;
  xmax += pad;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (y - ymin) / (ymax - ymin) * (H - top - bottom); };
  auto num = [](double v) { return fixed(v, 2); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"360\" viewBox=\"0 0 480 360\">\n";
  svg += "<rect width=\"480\" height=\"360\" fill=\"white\"/>\n";
  svg += "<text x=\"240\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + title + "</text>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(H - bottom) + "\" x2=\"" + num(W - right) + "\" y2=\"" +
         num(H - bottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(H - bottom) +
         "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0, yv = ymin + (ymax - ymin) * i / 4.0;
    svg += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(H - bottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + fixed(xv, 2) + "</text>\n";
    svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(yv) + 3) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + fixed(yv, 2) + "</text>\n";
  }
  svg += "<text x=\"" + num((left + W - right) / 2) + "\" y=\"" + num(H - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         std::string(to_string(s.pair.predictor)) + "</text>\n";
  svg += "<text x=\"14\" y=\"" + num((top + H - bottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 " +
         num((top + H - bottom) / 2) + ")\">" + std::string(to_string(s.pair.target)) + "</text>\n";
  for (std::size_t i = 0; i < s.pair.x.size(); ++i)
    svg += "<circle cx=\"" + num(px(s.pair.x[i])) + "\" cy=\"" + num(py(s.pair.y[i])) +
           "\" r=\"2.5\" fill=\"#4c72b0\" fill-opacity=\"0.6\"/>\n";
  auto curve = [&](const Vector& c, const char* colour, const char* dash) {
    if (c.size() == 0) return;
    svg += std::string("<polyline fill=\"none\" stroke=\"") + colour + "\" stroke-width=\"1.5\"" + dash + " points=\"";
    for (int i = 0; i <= 50; ++i) {
      const double x = xmin + (xmax - xmin) * i / 50.0;
      const double y = std::clamp(eval_poly(c, x), ymin, ymax);
      svg += (i ? " " : "") + num(px(x)) + "," + num(py(y));
    }
    svg += "\"/>\n";
  };
  curve(s.linear, "#dd8452", "");
  curve(s.quadratic, "#c44e52", " stroke-dasharray=\"5,3\"");
  svg += "</svg>\n";
  return svg;
}

void write_report(std::span<const ReportInput> inputs, const std::filesystem::path& out_dir) {
  if (inputs.empty()) throw std::invalid_argument("write_report: no inputs");
  std::filesystem::create_directories(out_dir);
  std::string md = "# Unsupervised model selection report\n\n";
  md += "Each MetricPair's W is computed from that predictor's runs only. R2 is pooled over all full-data runs "
        "of a framework; MAE is the mean of (unsupervised-selected minus label-selected) target value.\n\n";

  std::vector<FrameworkGrid> grids;
  for (const auto& in : inputs) {
    const AnalysisTables t = build_tables(in.framework, in.rows);
    const std::string fw = safe_name(in.framework);
    md += "## Framework `" + in.framework + "` (" + std::to_string(in.rows.size()) + " runs)\n\n";

    write_file(out_dir / (fw + "__overall.csv"), pair_table_csv(t.overall, "pair,n,l_r2,q_r2,w,mae\n", ""));
    md += "### Overall\n\n" + pair_table_md(t.overall) + "\n";

    write_file(out_dir / (fw + "__per_algorithm.csv"), slice_csv(t.per_algorithm, "algorithm"));
    write_file(out_dir / (fw + "__per_dataset.csv"), slice_csv(t.per_dataset, "dataset"));
    md += "### q-R2 per algorithm\n\n" + slice_md(t.per_algorithm, "Algorithm") + "\n";
    md += "### q-R2 per dataset\n\n" + slice_md(t.per_dataset, "Dataset") + "\n";

    if (!t.reduced.empty()) {
      std::string csv = "edge_fraction,pair,n,l_r2,q_r2,w,mae\n";
      md += "### Reduced training data\n\n";
      for (const auto& [fraction, rows] : t.reduced) {
        csv += pair_table_csv(rows, "", format_number(fraction) + ",");
        md += "Edge fraction " + format_number(fraction) + ":\n\n" + pair_table_md(rows) + "\n";
      }
      write_file(out_dir / (fw + "__reduced.csv"), csv);
    }

    if (!t.synthetic_delta.empty()) {
      std::string csv = "dataset,modularity->f1,modularity->nmi,conductance->f1,conductance->nmi\n";
      md += "### Synthetic: |unsupervised minus label-based selection|\n\n"
            "| Dataset | Mod->F1 | Mod->NMI | Con->F1 | Con->NMI |\n|---|---|---|---|---|\n";
      for (const auto& r : t.synthetic_delta) {
        csv += r.dataset;
        md += "| " + r.dataset;
        for (double v : r.delta) {
          csv += ',' + format_number(v);
          md += " | " + fixed(v, 2);
        }
        csv += '\n';
        md += " |\n";
      }
      md += "\n";
      write_file(out_dir / (fw + "__synthetic_delta.csv"), csv);
    }

    for (const auto& s : t.scatter) {
      const std::string base = fw + "__scatter__" + pair_file_label(s.pair);
      std::string csv = "kind,x,y\n";
      for (std::size_t i = 0; i < s.pair.x.size(); ++i)
        csv += "point," + format_number(s.pair.x[i]) + ',' + format_number(s.pair.y[i]) + '\n';
      if (!s.pair.x.empty()) {
        const double lo = *std::min_element(s.pair.x.begin(), s.pair.x.end());
        const double hi = *std::max_element(s.pair.x.begin(), s.pair.x.end());
        for (const auto& [kind, coef] : {std::pair{"linear", &s.linear}, std::pair{"quadratic", &s.quadratic}}) {
          if (coef->size() == 0) continue;
          for (int i = 0; i <= 20; ++i) {
            const double x = lo + (hi - lo) * i / 20.0;
            csv += std::string(kind) + ',' + format_number(x) + ',' + format_number(eval_poly(*coef, x)) + '\n';
          }
        }
      }
      write_file(out_dir / (base + ".csv"), csv);
      write_file(out_dir / (base + ".svg"), scatter_svg(s, in.framework + ": " + s.pair.label()));
    }
    grids.push_back(framework_grid(in.framework, in.rows));
  }

  if (grids.size() >= 2) {
    const auto ranks = fcr(grids);
    std::string csv = "framework,fcr,cells\n";
    md += "## Framework comparison rank\n\n| Framework | FCR |\n|---|---|\n";
    for (std::size_t i = 0; i < grids.size(); ++i) {
      csv += grids[i].name + ',' + format_number(ranks[i]) + ',' + std::to_string(grids[i].cells.size()) + '\n';
      md += "| " + grids[i].name + " | " + fixed(ranks[i], 3) + " |\n";
    }
    md += "\n";
    write_file(out_dir / "fcr.csv", csv);
  }
  write_file(out_dir / "report.md", md);
}

}  // namespace ugs
