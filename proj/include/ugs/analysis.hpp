#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "ugs/metrics.hpp"
#include "ugs/trainer.hpp"

namespace ugs {

/// Paired (unsupervised predictor, supervised target) observations.
struct MetricPair {
  MetricName predictor = MetricName::modularity;
  MetricName target = MetricName::f1;
  std::vector<double> x;
  std::vector<double> y;

  std::string label() const;  // e.g. "modularity->f1"
};

/// The four pairs reported everywhere: M->F1, M->NMI, C->F1, C->NMI.
inline constexpr std::array<std::pair<MetricName, MetricName>, 4> kMetricPairs = {{
    {MetricName::modularity, MetricName::f1},
    {MetricName::modularity, MetricName::nmi},
    {MetricName::conductance, MetricName::f1},
    {MetricName::conductance, MetricName::nmi},
}};

/// Least-squares polynomial coefficients, constant term first.
Vector polyfit(std::span<const double> x, std::span<const double> y, int degree);

/// R^2 of a least-squares polynomial fit; 0 for a constant target. Needs
/// at least degree + 2 observations.
double r2_fit(std::span<const double> x, std::span<const double> y, int degree);
double r2_fit(const MetricPair& pair, int degree);

/// Target value reached by one selection procedure in one run.
struct SelectionOutcome {
  std::string model;
  std::string dataset;
  std::uint64_t seed = 0;
  double edge_fraction = 1.0;
  double value = 0.0;

  auto key() const { return std::tuple(model, dataset, seed, edge_fraction); }
};

/// Mean of (unsupervised-selected value - supervised-selected value) over
/// runs paired on (model, dataset, seed, edge fraction).
double signed_mae(std::span<const SelectionOutcome> unsupervised, std::span<const SelectionOutcome> supervised);

/// Ranks with 1 = best and tied entries sharing their average rank.
std::vector<double> average_ranks(std::span<const double> scores, Direction direction);

/// Kendall's coefficient of concordance with tie correction. `ranks` is
/// raters (seeds) x objects (algorithms). All-tied tables count as W = 1.
double kendall_w(const Matrix& ranks);

/// Rankings of algorithms per (dataset, metric) cell, one row per seed.
struct RankCell {
  std::string dataset;
  std::string metric;
  Matrix ranks;  // seeds x algorithms
};

struct RankTable {
  std::vector<RankCell> cells;
};

/// Builds a RankTable from scores[cell][seed][algorithm].
RankCell rank_cell(std::string dataset, MetricName metric, const Matrix& scores);

/// Mean over cells of 1 - W_k; 0 means identical rankings on every seed.
double w_coefficient(const RankTable& table);

/// Scores of one experimental setup keyed by cell (model, dataset, seed,
/// selection metric, edge fraction, target metric).
struct FrameworkGrid {
  std::string name;
  std::map<std::string, std::pair<double, Direction>> cells;
};

std::string fcr_cell_key(const RunSummary& r, MetricName target);
FrameworkGrid framework_grid(std::string name, std::span<const RunSummary> rows);

/// Mean rank of each framework over all shared cells.
std::vector<double> fcr(std::span<const FrameworkGrid> frameworks);

struct PairRow {
  std::string label;
  std::size_t n = 0;
  double linear_r2 = 0.0;
  double quadratic_r2 = 0.0;
  double w = 0.0;
  double mae = 0.0;
};

struct SliceRow {
  std::string name;
  std::array<double, 4> quadratic_r2{};
};

struct DeltaRow {
  std::string dataset;
  std::array<double, 4> delta{};  // mean |unsupervised - label-selected| per pair
};

struct ScatterSeries {
  MetricPair pair;
  Vector linear;     // coefficients
  Vector quadratic;  // coefficients
};

struct AnalysisTables {
  std::string framework;
  std::vector<PairRow> overall;  // full-data runs
  std::vector<SliceRow> per_algorithm;
  std::vector<SliceRow> per_dataset;
  std::map<double, std::vector<PairRow>> reduced;  // keyed by edge fraction < 1
  std::vector<DeltaRow> synthetic_delta;
  std::vector<ScatterSeries> scatter;
};

/// Every table for one framework's runs. Failed runs stay in with their
/// worst-case values; unlabeled (NaN) rows are skipped.
AnalysisTables build_tables(std::string framework, std::span<const RunSummary> rows);

struct ReportInput {
  std::string framework;
  std::vector<RunSummary> rows;
};

/// Writes CSVs, SVG scatters and report.md into `out_dir`. FCR is included
/// when at least two frameworks are given. Output is byte-deterministic.
void write_report(std::span<const ReportInput> inputs, const std::filesystem::path& out_dir);

/// Static scatter plot with the linear and quadratic fits overlaid.
std::string scatter_svg(const ScatterSeries& s, const std::string& title);

}  // namespace ugs
