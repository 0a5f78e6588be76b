#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace epmd {

struct MetricResult {
    std::string name;
    double value = 0.0;
    std::size_t n = 0;
};

// Mann-Whitney statistic with average ranks for ties: U / (n_pos * n_neg).
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);

// Hand-Till M: mean over present class pairs of (A(i|j) + A(j|i)) / 2, where
// A(i|j) uses class-i scores restricted to samples of classes i and j.
double mc_auroc(const std::vector<std::vector<double>>& score_matrix,
                const std::vector<int>& labels);

double mae(const std::vector<double>& predictions, const std::vector<double>& targets);

}  // namespace epmd
