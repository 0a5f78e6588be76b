#include "epmd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "epmd/errors.hpp"

namespace epmd {

double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw DimensionMismatch("auroc: length mismatch");
    if (scores.empty()) throw EmptyInput("auroc: empty input");
    std::size_t n_pos = 0, n_neg = 0;
    for (int y : labels) {
        if (y == 1)
            ++n_pos;
        else if (y == 0)
            ++n_neg;
        else
            throw ValidationError("auroc: labels must be 0/1");
    }
    if (n_pos == 0 || n_neg == 0) throw OneClassOnly("auroc: both classes required");

    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // average ranks over tie groups, 1-based
    std::vector<double> rank(scores.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
        double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = avg;
        i = j + 1;
    }

    double rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (labels[k] == 1) rank_sum_pos += rank[k];
    double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double mc_auroc(const std::vector<std::vector<double>>& score_matrix,
                const std::vector<int>& labels) {
    if (score_matrix.size() != labels.size()) throw DimensionMismatch("mc_auroc: length mismatch");
    if (score_matrix.empty()) throw EmptyInput("mc_auroc: empty input");
    const std::size_t n_classes = score_matrix[0].size();
    for (const auto& row : score_matrix)
        if (row.size() != n_classes) throw DimensionMismatch("mc_auroc: ragged score matrix");

    std::set<int> present(labels.begin(), labels.end());
    for (int y : present)
        if (y < 0 || static_cast<std::size_t>(y) >= n_classes)
            throw ValidationError("mc_auroc: label outside score columns");
    if (present.size() < 2) throw OneClassOnly("mc_auroc: need at least two classes");

    std::vector<int> classes(present.begin(), present.end());
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < classes.size(); ++a) {
        for (std::size_t b = a + 1; b < classes.size(); ++b) {
            int ci = classes[a], cj = classes[b];
            std::vector<double> si, sj;
            std::vector<int> yi, yj;
            for (std::size_t k = 0; k < labels.size(); ++k) {
                if (labels[k] != ci && labels[k] != cj) continue;
                // A(i|j): class-i scores, class i treated as positive
                si.push_back(score_matrix[k][static_cast<std::size_t>(ci)]);
                yi.push_back(labels[k] == ci ? 1 : 0);
                sj.push_back(score_matrix[k][static_cast<std::size_t>(cj)]);
                yj.push_back(labels[k] == cj ? 1 : 0);
            }
            total += 0.5 * (auroc(si, yi) + auroc(sj, yj));
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

double mae(const std::vector<double>& predictions, const std::vector<double>& targets) {
    if (predictions.size() != targets.size()) throw DimensionMismatch("mae: length mismatch");
    if (predictions.empty()) throw EmptyInput("mae: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) s += std::fabs(predictions[i] - targets[i]);
    return s / static_cast<double>(predictions.size());
}

}  // namespace epmd
