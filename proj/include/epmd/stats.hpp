#pragma once

#include <cstddef>
#include <vector>

namespace epmd::stats {

// I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value for a t statistic: I_{v/(v+t^2)}(v/2, 1/2).
double t_two_sided_p(double t, double dof);

struct PairedTestResult {
    double t = 0.0;
    double p = 1.0;
    double mean_diff = 0.0;
    std::size_t n = 0;
};

// Zero-variance differences: p = 1 if the mean difference is 0, else capped
// near 0.
PairedTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Step-up adjusted p-values, same order as the input.
std::vector<double> benjamini_hochberg(const std::vector<double>& pvalues);

}  // namespace epmd::stats
