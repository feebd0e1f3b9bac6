#pragma once

#include <span>
#include <vector>

namespace edgemind::stats {

double mean(std::span<const double> xs);

// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> xs);

struct Interval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// mean +/- 1.96 s / sqrt(n).
Interval normal_ci95(std::span<const double> xs);

// Ranks starting at 1; ties share their average rank.
std::vector<double> ranks(std::span<const double> xs);

// Spearman rank correlation (Pearson on average ranks). NaN when either
// side is constant.
double spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace edgemind::stats
