#include "gek/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace gek {
namespace {

bool constant(const ConstVectorRef& xs) {
  return xs.size() == 0 || (xs.array() == xs[0]).all();
}

void require_finite(const ConstVectorRef& xs) {
  if (!xs.allFinite()) throw StatsError("input contains non-finite values");
}

}  // namespace

Eigen::VectorXd average_ranks(const ConstVectorRef& xs) {
  const auto n = xs.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return xs[a] < xs[b]; });
  Eigen::VectorXd ranks(n);
  for (Eigen::Index i = 0; i < n;) {
    auto j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (auto t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const ConstVectorRef& xs, const ConstVectorRef& ys) {
  if (xs.size() != ys.size()) throw StatsError("correlation of series with different lengths");
  if (xs.size() < 2) throw StatsError("correlation needs at least two points");
  const Eigen::ArrayXd dx = xs.array() - xs.mean();
  const Eigen::ArrayXd dy = ys.array() - ys.mean();
  const double sxx = (dx * dx).sum();
  const double syy = (dy * dy).sum();
  if (sxx == 0.0 || syy == 0.0) throw StatsError("correlation undefined for constant input");
  return std::clamp((dx * dy).sum() / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(const ConstVectorRef& xs, const ConstVectorRef& ys) {
  if (xs.size() != ys.size()) throw StatsError("spearman: length mismatch");
  if (xs.size() < 3) throw StatsError("spearman: need at least 3 observations");
  require_finite(xs);
  require_finite(ys);
  if (constant(xs) || constant(ys)) throw StatsError("spearman: constant input");
  return pearson(average_ranks(xs), average_ranks(ys));
}

FisherTest fisher_r_to_z(double r1, std::size_t n1, double r2, std::size_t n2) {
  if (n1 <= 3 || n2 <= 3) throw StatsError("fisher r-to-z needs n > 3");
  if (!(std::abs(r1) < 1.0) || !(std::abs(r2) < 1.0)) {
    throw StatsError("fisher r-to-z needs |r| < 1");
  }
  const double se = std::sqrt(1.0 / static_cast<double>(n1 - 3) + 1.0 / static_cast<double>(n2 - 3));
  const double z = (std::atanh(r1) - std::atanh(r2)) / se;
  return {z, 0.5 * std::erfc(z / std::sqrt(2.0))};
}

double binary_accuracy(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) throw StatsError("accuracy of an empty pair list");
  const auto correct = std::count_if(pairs.begin(), pairs.end(),
                                     [](const auto& p) { return p.first > p.second; });
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

Eigen::VectorXd minmax_scale(const ConstVectorRef& xs) {
  if (xs.size() < 2) throw StatsError("min-max scaling needs at least two values");
  require_finite(xs);
  const double lo = xs.minCoeff();
  const double hi = xs.maxCoeff();
  if (lo == hi) throw StatsError("min-max scaling of constant input");
  Eigen::VectorXd out = (xs.array() - lo) / (hi - lo);
  // Pin the endpoints against rounding in the division.
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    if (xs[i] == lo) out[i] = 0.0;
    if (xs[i] == hi) out[i] = 1.0;
  }
  return out;
}

double residual_sum(const ConstVectorRef& human, const ConstVectorRef& scores, ResidualNorm norm) {
  if (human.size() != scores.size()) throw StatsError("residuals: length mismatch");
  if (human.size() < 3) throw StatsError("residuals: need at least 3 observations");
  require_finite(human);
  if (constant(human)) throw StatsError("residuals: constant ratings");
  const Eigen::VectorXd y = minmax_scale(scores);
  Eigen::MatrixXd design(human.size(), 2);
  design.col(0).setOnes();
  design.col(1) = human;
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
  const Eigen::ArrayXd residual = (y - design * beta).array();
  return norm == ResidualNorm::l1 ? residual.abs().sum() : residual.square().sum();
}

}  // namespace gek
