#include "gek/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "gek/io.hpp"
#include "gek/log.hpp"

namespace gek {
namespace {

using ScoreKey = std::tuple<std::string, Variant, std::string>;

std::map<ScoreKey, double> index_scores(std::span<const ScoreRecord> records) {
  std::map<ScoreKey, double> index;
  for (const auto& r : records) index.emplace(ScoreKey{r.item_id, r.variant, r.scorer}, r.score);
  return index;
}

Eigen::VectorXd pooled_scores(std::span<const ItemPair* const> pairs,
                              const std::map<ScoreKey, double>& index, const std::string& scorer,
                              bool log_transform) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(2 * pairs.size()));
  Eigen::Index i = 0;
  for (const auto* p : pairs) {
    for (auto v : {Variant::typical, Variant::atypical}) {
      double s = index.at({p->pair_id, v, scorer});
      if (log_transform) {
        if (!(s > 0.0)) {
          throw StatsError("log transform needs positive scores; " + scorer + " gives " +
                           format_double(s) + " for " + p->pair_id);
        }
        s = std::log(s);
      }
      out[i++] = s;
    }
  }
  return out;
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string fixed(const std::optional<double>& v, int digits) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << *v;
  return s.str();
}

constexpr const char* kReportColumns[] = {
    "dataset",  "scorer",       "construction", "n_items",   "coverage", "spearman_rho",
    "accuracy", "residual_sum", "vs_scorer",    "z",         "p_one_tailed"};

}  // namespace

EvalReport evaluate(std::span<const ItemPair> pairs, std::span<const ScoreRecord> records,
                    const EvalOptions& options) {
  auto scorers = options.coverage_scorers;
  if (scorers.empty()) {
    scorers.push_back(options.scorer);
    if (options.compare_scorer) scorers.push_back(*options.compare_scorer);
  }
  std::set<std::string> dataset_ids;
  for (const auto& p : pairs) dataset_ids.insert(p.pair_id);
  std::vector<ScoreSetIds> sets{{"dataset", dataset_ids}};
  for (const auto& s : scorers) sets.emplace_back(s, covered_items(records, s));
  const auto common = intersect_coverage(sets);

  std::vector<const ItemPair*> covered;
  for (const auto& p : pairs) {
    if (common.contains(p.pair_id)) covered.push_back(&p);
  }

  EvalReport report;
  report.dataset = options.dataset;
  report.scorer = options.scorer;
  report.construction = options.construction;
  report.n_items = covered.size();
  report.coverage = {covered.size(), pairs.size()};
  if (covered.size() < 3) {
    throw StatsError("insufficient coverage for " + options.dataset + "/" + options.scorer + ": " +
                     report.coverage.str() + " pairs scored by every scorer");
  }

  const auto index = index_scores(records);
  const auto scores = pooled_scores(covered, index, options.scorer, options.log_transform);

  std::vector<std::pair<double, double>> pair_scores;
  for (Eigen::Index i = 0; i < scores.size(); i += 2) pair_scores.emplace_back(scores[i], scores[i + 1]);
  report.accuracy = binary_accuracy(pair_scores);

  const auto rated = std::count_if(covered.begin(), covered.end(),
                                   [](const ItemPair* p) { return p->has_ratings(); });
  if (rated != 0 && static_cast<std::size_t>(rated) != covered.size()) {
    throw StatsError("dataset " + options.dataset + " mixes rated and unrated pairs");
  }
  if (rated == 0) return report;

  Eigen::VectorXd ratings(scores.size());
  for (std::size_t i = 0; i < covered.size(); ++i) {
    ratings[static_cast<Eigen::Index>(2 * i)] = *covered[i]->typical.rating;
    ratings[static_cast<Eigen::Index>(2 * i + 1)] = *covered[i]->atypical.rating;
  }
  report.spearman_rho = spearman(ratings, scores);
  if (options.residuals) report.residual_sum = residual_sum(ratings, scores, options.residual_norm);

  if (options.compare_scorer) {
    const auto other = pooled_scores(covered, index, *options.compare_scorer, options.log_transform);
    const double r2 = spearman(ratings, other);
    const auto n = static_cast<std::size_t>(scores.size());
    if (std::abs(*report.spearman_rho) < 1.0 && std::abs(r2) < 1.0) {
      auto test = fisher_r_to_z(*report.spearman_rho, n, r2, n);
      report.significance = Significance{*options.compare_scorer, test.z, test.p_one_tailed};
    } else {
      warn("significance vs " + *options.compare_scorer + " skipped: a correlation is exactly +-1");
    }
  }
  return report;
}

void write_report_tsv(std::ostream& out, std::span<const EvalReport> reports) {
  for (std::size_t i = 0; i < std::size(kReportColumns); ++i) out << (i ? "\t" : "") << kReportColumns[i];
  out << '\n';
  for (const auto& r : reports) {
    out << r.dataset << '\t' << r.scorer << '\t' << r.construction << '\t' << r.n_items << '\t'
        << r.coverage.str() << '\t' << cell(r.spearman_rho) << '\t' << cell(r.accuracy) << '\t'
        << cell(r.residual_sum) << '\t';
    if (r.significance) {
      out << r.significance->vs_scorer << '\t' << format_double(r.significance->z) << '\t'
          << format_double(r.significance->p_one_tailed);
    } else {
      out << "\t\t";
    }
    out << '\n';
  }
}

std::vector<EvalReport> read_report_tsv(std::istream& in, std::string_view source) {
  std::vector<EvalReport> reports;
  std::vector<std::string> problems;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line.starts_with("dataset\t")) continue;
    auto c = split(line, '\t');
    auto where = std::string(source) + " line " + std::to_string(line_no) + ": ";
    if (c.size() != std::size(kReportColumns)) {
      problems.push_back(where + "expected " + std::to_string(std::size(kReportColumns)) + " columns");
      continue;
    }
    auto opt = [](std::string_view v) { return v.empty() ? std::nullopt : parse_double(v); };
    EvalReport r;
    r.dataset = std::string(c[0]);
    r.scorer = std::string(c[1]);
    r.construction = std::string(c[2]);
    auto n = parse_uint(c[3]);
    auto cov = split(c[4], '/');
    std::optional<std::uint64_t> cov_a, cov_b;
    if (cov.size() == 2) {
      cov_a = parse_uint(cov[0]);
      cov_b = parse_uint(cov[1]);
    }
    if (!n || !cov_a || !cov_b) {
      problems.push_back(where + "bad n_items or coverage");
      continue;
    }
    r.n_items = *n;
    r.coverage = {*cov_a, *cov_b};
    r.spearman_rho = opt(c[5]);
    r.accuracy = opt(c[6]);
    r.residual_sum = opt(c[7]);
    if (!c[8].empty()) {
      auto z = parse_double(c[9]);
      auto p = parse_double(c[10]);
      if (!z || !p) {
        problems.push_back(where + "bad significance columns");
        continue;
      }
      r.significance = Significance{std::string(c[8]), *z, *p};
    }
    reports.push_back(std::move(r));
  }
  if (!problems.empty()) throw DatasetError(std::move(problems));
  return reports;
}

void write_report_table(std::ostream& out, std::span<const EvalReport> reports) {
  std::vector<std::vector<std::string>> rows{
      {"dataset", "scorer", "construction", "coverage", "rho", "accuracy", "residuals", "vs", "z", "p"}};
  for (const auto& r : reports) {
    rows.push_back({r.dataset, r.scorer, r.construction, r.coverage.str(), fixed(r.spearman_rho, 3),
                    fixed(r.accuracy, 3), fixed(r.residual_sum, 2),
                    r.significance ? r.significance->vs_scorer : "-",
                    r.significance ? fixed(r.significance->z, 3) : "-",
                    r.significance ? fixed(r.significance->p_one_tailed, 4) : "-"});
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << row[i];
    }
    out << '\n';
  }
}

void write_matrix(std::ostream& out, std::span<const EvalReport> reports, Metric metric,
                  PivotColumn column) {
  std::vector<std::string> rows, cols;
  std::map<std::pair<std::string, std::string>, std::optional<double>> values;
  std::map<std::string, Coverage> coverage;
  auto remember = [](std::vector<std::string>& list, const std::string& v) {
    if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
  };
  for (const auto& r : reports) {
    // Pivoting on construction keeps the scorer distinct in the row label.
    auto row = column == PivotColumn::scorer ? r.dataset : r.dataset + "/" + r.scorer;
    auto col = column == PivotColumn::scorer ? r.scorer : r.construction;
    remember(rows, row);
    remember(cols, col);
    values[{row, col}] = metric == Metric::spearman ? r.spearman_rho : r.accuracy;
    coverage.try_emplace(row, r.coverage);
  }
  out << "dataset\tcoverage";
  for (const auto& c : cols) out << '\t' << c;
  out << '\n';
  for (const auto& row : rows) {
    out << row << '\t' << coverage[row].str();
    for (const auto& c : cols) {
      auto it = values.find({row, c});
      out << '\t' << (it == values.end() || !it->second ? std::string("-") : fixed(it->second, 2));
    }
    out << '\n';
  }
}

void write_plot_tsv(std::ostream& out, std::span<const ItemPair> pairs,
                    std::span<const ScoreRecord> records, std::string_view scorer) {
  const auto index = index_scores(records);
  out << "item_id\tvariant\trating\tscore\tlog_score\n";
  for (const auto& p : pairs) {
    for (auto v : {Variant::typical, Variant::atypical}) {
      auto it = index.find({p.pair_id, v, std::string(scorer)});
      if (it == index.end()) continue;
      const auto& rating = p.filler(v).rating;
      out << p.pair_id << '\t' << to_string(v) << '\t' << cell(rating) << '\t'
          << format_double(it->second) << '\t'
          << (it->second > 0 ? format_double(std::log(it->second)) : std::string("NA")) << '\n';
    }
  }
}

}  // namespace gek
