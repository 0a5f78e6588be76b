#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epmd/dataset.hpp"

namespace epmd {

enum class Penalty { l1, l2 };
enum class ClassWeight { none, balanced };

std::string penalty_name(Penalty p);
std::string class_weight_name(ClassWeight cw);

struct LogisticHyper {
    Penalty penalty = Penalty::l2;
    double C = 1.0;
    ClassWeight class_weight = ClassWeight::none;
};

// One-vs-rest logistic regression. Subproblems minimize the sample-weighted
// negative log-likelihood plus (1/(2C))||w||^2 (l2, smooth part) or
// (1/C)||w||_1 (l1, proximal part); intercept unpenalized. Solved by proximal
// gradient with backtracking line search; the objective is monotone by
// construction and asserted so.
struct LogisticModel {
    std::size_t n_features = 0;
    std::size_t n_classes = 0;
    LogisticHyper hyper;
    std::vector<Eigen::VectorXd> weights;      // one per class
    std::vector<double> intercepts;
    std::vector<std::uint8_t> constant_class;  // 1 → single-class fallback
    std::vector<std::string> warnings;
};

// Per-sample weights n/(k*n_c) over classes present in y; k = distinct count.
std::vector<double> class_balanced_weights(const std::vector<int>& y);

// Smooth part of the objective (weighted NLL + l2 term when applicable); the
// gradient outputs are optional. Exposed for finite-difference checks.
double logistic_smooth(const Eigen::MatrixXd& X, const std::vector<int>& y01,
                       const std::vector<double>& sample_weight, const LogisticHyper& hp,
                       const Eigen::VectorXd& w, double b, Eigen::VectorXd* grad_w,
                       double* grad_b);

// Full objective: smooth part plus the l1 term when applicable.
double logistic_objective(const Eigen::MatrixXd& X, const std::vector<int>& y01,
                          const std::vector<double>& sample_weight, const LogisticHyper& hp,
                          const Eigen::VectorXd& w, double b);

struct BinaryFit {
    Eigen::VectorXd w;
    double b = 0.0;
    bool constant = false;
    std::size_t iterations = 0;
};

BinaryFit fit_logistic_binary(const Eigen::MatrixXd& X, const std::vector<int>& y01,
                              const std::vector<double>& sample_weight, const LogisticHyper& hp,
                              std::vector<std::string>* warnings = nullptr,
                              double tol = 1e-8, std::size_t max_iter = 5000);

LogisticModel fit_logistic(const Eigen::MatrixXd& X, const std::vector<int>& y,
                           std::size_t n_classes, const LogisticHyper& hp);

// Per-class probabilities, one-vs-rest sigmoid scores normalized to sum 1.
Eigen::MatrixXd predict_proba(const LogisticModel& m, const Eigen::MatrixXd& X);

struct RidgeModel {
    Eigen::VectorXd w;
    double intercept = 0.0;
    double lambda = 0.0;
    bool fit_intercept = true;
};

RidgeModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                     bool fit_intercept = true);

// Whole regularization path from one eigendecomposition (primal or dual by
// shape); intended for cross-validation over the lambda grid.
std::vector<RidgeModel> fit_ridge_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       const std::vector<double>& lambdas,
                                       bool fit_intercept = true);

Eigen::VectorXd predict(const RidgeModel& m, const Eigen::MatrixXd& X);

struct LogisticGrid {
    std::vector<LogisticHyper> points;
    static LogisticGrid default_grid();
};

struct RidgeGrid {
    std::vector<double> lambdas;
    static RidgeGrid default_grid();
};

// Optional grid override file; missing keys fall back to the defaults.
// Layout: {"logistic": {"class_weight": [...], "penalty": [...], "C": [...]},
//          "ridge": {"lambda": [...]}}
void load_grids(const std::string& path, LogisticGrid& logistic, RidgeGrid& ridge);

// Deterministic fold assignment; stratified shuffles within each class and
// deals round-robin with a rolling counter so folds stay balanced.
std::vector<std::size_t> kfold_assignment(std::size_t n, std::size_t k, std::uint64_t seed);
std::vector<std::size_t> stratified_kfold_assignment(const std::vector<int>& y, std::size_t k,
                                                     std::uint64_t seed);

struct CvLogisticResult {
    LogisticHyper best;
    std::size_t best_index = 0;
    std::vector<double> mean_scores;  // per grid point, same order
    std::vector<std::string> warnings;
};

CvLogisticResult cv_select_logistic(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                    std::size_t n_classes, TaskKind kind,
                                    const LogisticGrid& grid, std::size_t k, std::uint64_t seed);

struct CvRidgeResult {
    double best_lambda = 0.0;
    std::size_t best_index = 0;
    std::vector<double> mean_scores;  // negative MAE, higher is better
};

CvRidgeResult cv_select_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const RidgeGrid& grid, std::size_t k, std::uint64_t seed);

void save_logistic_json(const LogisticModel& m, const std::string& path);
LogisticModel load_logistic_json(const std::string& path);
void save_ridge_json(const RidgeModel& m, const std::string& path);
RidgeModel load_ridge_json(const std::string& path);

}  // namespace epmd
