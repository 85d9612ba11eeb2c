#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <utility>

#include "gek/error.hpp"

namespace gek {

using ConstVectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Average ranks (1-based); tied values share the mean of their positions.
Eigen::VectorXd average_ranks(const ConstVectorRef& xs);

double pearson(const ConstVectorRef& xs, const ConstVectorRef& ys);

/// Pearson correlation of average ranks. Needs equal lengths >= 3 and
/// non-constant inputs.
double spearman(const ConstVectorRef& xs, const ConstVectorRef& ys);

struct FisherTest {
  double z = 0.0;
  double p_one_tailed = 0.5;  // P(Z >= z)
};

/// Compares two independent correlations with Fisher's r-to-z transform.
FisherTest fisher_r_to_z(double r1, std::size_t n1, double r2, std::size_t n2);

/// Fraction of (typical, atypical) score pairs where typical scores strictly
/// higher. Ties count as failures.
double binary_accuracy(std::span<const std::pair<double, double>> pairs);

Eigen::VectorXd minmax_scale(const ConstVectorRef& xs);

enum class ResidualNorm { l1, l2 };

/// Min-max scales `scores`, fits scaled ~ a + b * human by least squares, and
/// sums |residual| (l1) or residual^2 (l2).
double residual_sum(const ConstVectorRef& human, const ConstVectorRef& scores,
                    ResidualNorm norm = ResidualNorm::l1);

class StatsError : public Error {
 public:
  explicit StatsError(const std::string& what) : Error("eval-stats", what) {}
};

}  // namespace gek
