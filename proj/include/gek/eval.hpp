#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gek/datasets.hpp"
#include "gek/stats.hpp"

namespace gek {

struct Significance {
  std::string vs_scorer;
  double z = 0.0;
  double p_one_tailed = 0.5;
};

/// Per (dataset, scorer) evaluation summary.
struct EvalReport {
  std::string dataset;
  std::string scorer;
  std::string construction = "declarative";
  std::size_t n_items = 0;
  Coverage coverage;
  std::optional<double> spearman_rho;  // absent when the pairs carry no ratings
  std::optional<double> accuracy;
  std::optional<double> residual_sum;
  std::optional<Significance> significance;
};

struct EvalOptions {
  std::string dataset;
  std::string scorer;
  std::string construction = "declarative";
  /// Scorer tested against `scorer` with Fisher's r-to-z.
  std::optional<std::string> compare_scorer;
  /// Scorers whose coverage is intersected. Empty: `scorer` plus `compare_scorer`.
  std::vector<std::string> coverage_scorers;
  /// Natural log of the scores before any statistic (scores must be positive).
  bool log_transform = false;
  bool residuals = false;
  ResidualNorm residual_norm = ResidualNorm::l1;
};

/// Evaluates `options.scorer` over the pairs every coverage scorer scored.
/// Spearman pools the typical and atypical (rating, score) points; its sample
/// size for the significance test is the pooled point count.
EvalReport evaluate(std::span<const ItemPair> pairs, std::span<const ScoreRecord> records,
                    const EvalOptions& options);

/// Machine-readable report, one row per (dataset, scorer).
void write_report_tsv(std::ostream& out, std::span<const EvalReport> reports);
std::vector<EvalReport> read_report_tsv(std::istream& in, std::string_view source = "<stream>");

/// Aligned human-readable table.
void write_report_table(std::ostream& out, std::span<const EvalReport> reports);

enum class Metric { spearman, accuracy };
enum class PivotColumn { scorer, construction };

/// Dataset x (scorer | construction) matrix of one metric, with a coverage
/// column. Rows and columns keep first-appearance order.
void write_matrix(std::ostream& out, std::span<const EvalReport> reports, Metric metric,
                  PivotColumn column);

/// Scatter-ready rows: item_id, variant, rating, score, log_score.
void write_plot_tsv(std::ostream& out, std::span<const ItemPair> pairs,
                    std::span<const ScoreRecord> records, std::string_view scorer);

}  // namespace gek
