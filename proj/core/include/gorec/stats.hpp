#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace gorec {

/// Sample mean and 95%-style normal-approximation half width
/// z * s / sqrt(n) with s the (n-1) sample standard deviation. Half width
/// is 0 for n = 1 or zero variance.
std::pair<double, double> mean_ci(const std::vector<double>& samples, double level = 0.95);

/// Two-sided Welch t-test p-value (Welch-Satterthwaite degrees of freedom).
/// Both samples need n >= 2. Zero variance on both sides with equal means
/// gives p = 1.
double welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// Sidak-corrected per-comparison significance level: 1 - (1-alpha)^(1/m).
double sidak_alpha(double alpha, std::size_t m_comparisons);

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall);

/// CDF of Student's t distribution with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace gorec
