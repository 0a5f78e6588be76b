#include "epmd/linear_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"

#include "epmd/errors.hpp"
#include "epmd/metrics.hpp"
#include "epmd/rng.hpp"

namespace epmd {

std::string penalty_name(Penalty p) { return p == Penalty::l1 ? "l1" : "l2"; }
std::string class_weight_name(ClassWeight cw) {
    return cw == ClassWeight::balanced ? "balanced" : "none";
}

std::vector<double> class_balanced_weights(const std::vector<int>& y) {
    std::map<int, std::size_t> counts;
    for (int c : y) ++counts[c];
    const double n = static_cast<double>(y.size());
    const double k = static_cast<double>(counts.size());
    std::vector<double> w(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        w[i] = n / (k * static_cast<double>(counts[y[i]]));
    return w;
}

namespace {

double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp_rate(double r) { return std::min(1.0 - 1e-12, std::max(1e-12, r)); }

double logit(double r) { return std::log(r / (1.0 - r)); }

}  // namespace

double logistic_smooth(const Eigen::MatrixXd& X, const std::vector<int>& y01,
                       const std::vector<double>& sample_weight, const LogisticHyper& hp,
                       const Eigen::VectorXd& w, double b, Eigen::VectorXd* grad_w,
                       double* grad_b) {
    const auto n = X.rows();
    if (static_cast<std::size_t>(n) != y01.size() || y01.size() != sample_weight.size())
        throw DimensionMismatch("logistic: row/label/weight count mismatch");
    Eigen::VectorXd z = X * w;
    z.array() += b;
    double obj = 0.0;
    Eigen::VectorXd gz(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = sample_weight[static_cast<std::size_t>(i)];
        double y = y01[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
        obj += s * (softplus(z[i]) - y * z[i]);
        gz[i] = s * (sigmoid(z[i]) - y);
    }
    if (hp.penalty == Penalty::l2) obj += w.squaredNorm() / (2.0 * hp.C);
    if (grad_w) {
        *grad_w = X.transpose() * gz;
        if (hp.penalty == Penalty::l2) *grad_w += w / hp.C;
    }
    if (grad_b) *grad_b = gz.sum();
    return obj;
}

double logistic_objective(const Eigen::MatrixXd& X, const std::vector<int>& y01,
                          const std::vector<double>& sample_weight, const LogisticHyper& hp,
                          const Eigen::VectorXd& w, double b) {
    double obj = logistic_smooth(X, y01, sample_weight, hp, w, b, nullptr, nullptr);
    if (hp.penalty == Penalty::l1) obj += w.lpNorm<1>() / hp.C;
    return obj;
}

BinaryFit fit_logistic_binary(const Eigen::MatrixXd& X, const std::vector<int>& y01,
                              const std::vector<double>& sample_weight, const LogisticHyper& hp,
                              std::vector<std::string>* warnings, double tol,
                              std::size_t max_iter) {
    if (hp.C <= 0.0) throw InvalidConfig("logistic: C must be positive");
    BinaryFit fit;
    fit.w = Eigen::VectorXd::Zero(X.cols());

    bool any_pos = false, any_neg = false;
    double weighted_pos = 0.0, weighted_total = 0.0;
    for (std::size_t i = 0; i < y01.size(); ++i) {
        (y01[i] ? any_pos : any_neg) = true;
        weighted_total += sample_weight[i];
        if (y01[i]) weighted_pos += sample_weight[i];
    }
    if (!any_pos || !any_neg) {
        fit.constant = true;
        fit.b = logit(clamp_rate(weighted_total > 0.0 ? weighted_pos / weighted_total : 0.5));
        if (warnings)
            warnings->push_back("single-class training labels; constant-probability model");
        std::cerr << "warning: single-class training labels; fitting constant model\n";
        return fit;
    }

    const double thresh = 1.0 / hp.C;  // l1 soft-threshold scale
    Eigen::VectorXd grad_w(X.cols());
    double grad_b = 0.0;
    double obj = logistic_smooth(X, y01, sample_weight, hp, fit.w, fit.b, &grad_w, &grad_b);
    double full_obj = obj + (hp.penalty == Penalty::l1 ? fit.w.lpNorm<1>() / hp.C : 0.0);
    double eta = 1.0;

    Eigen::VectorXd w_new(X.cols());
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        ++fit.iterations;
        eta *= 2.0;
        double obj_new = 0.0, b_new = 0.0;
        for (int halvings = 0; halvings < 80; ++halvings) {
            w_new = fit.w - eta * grad_w;
            if (hp.penalty == Penalty::l1) {
                double t = eta * thresh;
                for (Eigen::Index j = 0; j < w_new.size(); ++j) {
                    double x = w_new[j];
                    w_new[j] = x > t ? x - t : (x < -t ? x + t : 0.0);
                }
            }
            b_new = fit.b - eta * grad_b;
            obj_new = logistic_smooth(X, y01, sample_weight, hp, w_new, b_new, nullptr, nullptr);
            Eigen::VectorXd dw = w_new - fit.w;
            double db = b_new - fit.b;
            double quad = obj + grad_w.dot(dw) + grad_b * db +
                          (dw.squaredNorm() + db * db) / (2.0 * eta);
            if (obj_new <= quad + 1e-12 * (1.0 + std::fabs(quad))) break;
            eta *= 0.5;
            if (halvings == 79)
                throw ExecutionError("logistic line search failed to find a valid step");
        }
        double full_new =
            obj_new + (hp.penalty == Penalty::l1 ? w_new.lpNorm<1>() / hp.C : 0.0);
        if (full_new > full_obj + 1e-9 * (1.0 + std::fabs(full_obj)))
            throw ExecutionError("logistic objective increased; line search invariant broken");
        double decrease = full_obj - full_new;
        fit.w.swap(w_new);
        fit.b = b_new;
        full_obj = full_new;
        if (decrease < tol) break;
        obj = logistic_smooth(X, y01, sample_weight, hp, fit.w, fit.b, &grad_w, &grad_b);
    }
    if (!fit.w.allFinite() || !std::isfinite(fit.b))
        throw ExecutionError("logistic fit produced non-finite weights");
    return fit;
}

LogisticModel fit_logistic(const Eigen::MatrixXd& X, const std::vector<int>& y,
                           std::size_t n_classes, const LogisticHyper& hp) {
    if (static_cast<std::size_t>(X.rows()) != y.size())
        throw DimensionMismatch("fit_logistic: rows/labels mismatch");
    if (n_classes < 2) throw InvalidConfig("fit_logistic: need at least 2 classes");
    for (int c : y)
        if (c < 0 || static_cast<std::size_t>(c) >= n_classes)
            throw ValidationError("fit_logistic: label out of range");
    if (!X.allFinite()) throw ValidationError("fit_logistic: non-finite feature value");

    LogisticModel m;
    m.n_features = static_cast<std::size_t>(X.cols());
    m.n_classes = n_classes;
    m.hyper = hp;
    std::vector<double> sw(y.size(), 1.0);
    if (hp.class_weight == ClassWeight::balanced) sw = class_balanced_weights(y);
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<int> ybin(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            ybin[i] = y[i] == static_cast<int>(c) ? 1 : 0;
        BinaryFit fit = fit_logistic_binary(X, ybin, sw, hp, &m.warnings);
        m.weights.push_back(std::move(fit.w));
        m.intercepts.push_back(fit.b);
        m.constant_class.push_back(fit.constant ? 1 : 0);
    }
    return m;
}

Eigen::MatrixXd predict_proba(const LogisticModel& m, const Eigen::MatrixXd& X) {
    if (static_cast<std::size_t>(X.cols()) != m.n_features)
        throw DimensionMismatch("predict_proba: feature count mismatch");
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(m.n_classes));
    for (std::size_t c = 0; c < m.n_classes; ++c) {
        Eigen::VectorXd z = X * m.weights[c];
        z.array() += m.intercepts[c];
        for (Eigen::Index i = 0; i < z.size(); ++i)
            out(i, static_cast<Eigen::Index>(c)) = sigmoid(z[i]);
    }
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        double s = out.row(i).sum();
        if (s > 0.0) out.row(i) /= s;
    }
    return out;
}

RidgeModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                     bool fit_intercept) {
    if (X.rows() != y.size()) throw DimensionMismatch("fit_ridge: rows/targets mismatch");
    if (lambda < 0.0) throw InvalidConfig("fit_ridge: lambda must be >= 0");
    RidgeModel m;
    m.lambda = lambda;
    m.fit_intercept = fit_intercept;

    Eigen::RowVectorXd xm = Eigen::RowVectorXd::Zero(X.cols());
    double ym = 0.0;
    Eigen::MatrixXd Xc = X;
    Eigen::VectorXd yc = y;
    if (fit_intercept) {
        xm = X.colwise().mean();
        ym = y.mean();
        Xc.rowwise() -= xm;
        yc.array() -= ym;
    }

    const bool primal = X.cols() <= X.rows();
    if (primal) {
        Eigen::MatrixXd A = Xc.transpose() * Xc;
        A.diagonal().array() += lambda;
        Eigen::VectorXd b = Xc.transpose() * yc;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        m.w = ldlt.solve(b);
        double resid = (A * m.w - b).norm();
        if (!m.w.allFinite() || resid > 1e-6 * (b.norm() + 1.0))
            throw SingularSystem("ridge system singular (lambda=" + std::to_string(lambda) + ")");
    } else {
        Eigen::MatrixXd G = Xc * Xc.transpose();
        G.diagonal().array() += lambda;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
        Eigen::VectorXd alpha = ldlt.solve(yc);
        double resid = (G * alpha - yc).norm();
        if (!alpha.allFinite() || resid > 1e-6 * (yc.norm() + 1.0))
            throw SingularSystem("ridge system singular (lambda=" + std::to_string(lambda) + ")");
        m.w = Xc.transpose() * alpha;
    }
    m.intercept = fit_intercept ? ym - xm * m.w : 0.0;
    return m;
}

std::vector<RidgeModel> fit_ridge_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       const std::vector<double>& lambdas, bool fit_intercept) {
    if (X.rows() != y.size()) throw DimensionMismatch("fit_ridge_path: rows/targets mismatch");
    Eigen::RowVectorXd xm = Eigen::RowVectorXd::Zero(X.cols());
    double ym = 0.0;
    Eigen::MatrixXd Xc = X;
    Eigen::VectorXd yc = y;
    if (fit_intercept) {
        xm = X.colwise().mean();
        ym = y.mean();
        Xc.rowwise() -= xm;
        yc.array() -= ym;
    }

    std::vector<RidgeModel> models;
    models.reserve(lambdas.size());
    const bool primal = X.cols() <= X.rows();
    if (primal) {
        Eigen::MatrixXd S = Xc.transpose() * Xc;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
        Eigen::VectorXd evals = eig.eigenvalues().cwiseMax(0.0);
        Eigen::VectorXd proj = eig.eigenvectors().transpose() * (Xc.transpose() * yc);
        for (double lambda : lambdas) {
            if (lambda <= 0.0) throw InvalidConfig("fit_ridge_path: lambda must be positive");
            RidgeModel m;
            m.lambda = lambda;
            m.fit_intercept = fit_intercept;
            Eigen::VectorXd scaled = proj.array() / (evals.array() + lambda);
            m.w = eig.eigenvectors() * scaled;
            m.intercept = fit_intercept ? ym - xm * m.w : 0.0;
            models.push_back(std::move(m));
        }
    } else {
        Eigen::MatrixXd G = Xc * Xc.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
        Eigen::VectorXd evals = eig.eigenvalues().cwiseMax(0.0);
        Eigen::VectorXd proj = eig.eigenvectors().transpose() * yc;
        for (double lambda : lambdas) {
            if (lambda <= 0.0) throw InvalidConfig("fit_ridge_path: lambda must be positive");
            RidgeModel m;
            m.lambda = lambda;
            m.fit_intercept = fit_intercept;
            Eigen::VectorXd scaled = proj.array() / (evals.array() + lambda);
            m.w = Xc.transpose() * (eig.eigenvectors() * scaled);
            m.intercept = fit_intercept ? ym - xm * m.w : 0.0;
            models.push_back(std::move(m));
        }
    }
    return models;
}

Eigen::VectorXd predict(const RidgeModel& m, const Eigen::MatrixXd& X) {
    if (X.cols() != m.w.size()) throw DimensionMismatch("ridge predict: feature count mismatch");
    Eigen::VectorXd out = X * m.w;
    out.array() += m.intercept;
    return out;
}

LogisticGrid LogisticGrid::default_grid() {
    LogisticGrid g;
    for (ClassWeight cw : {ClassWeight::balanced, ClassWeight::none})
        for (Penalty p : {Penalty::l1, Penalty::l2})
            for (double C : {1.0, 0.1, 0.01, 0.001, 0.0001})
                g.points.push_back({p, C, cw});
    return g;
}

RidgeGrid RidgeGrid::default_grid() {
    RidgeGrid g;
    for (int e = -6; e <= 7; ++e) g.lambdas.push_back(std::pow(10.0, e));
    return g;
}

void load_grids(const std::string& path, LogisticGrid& logistic, RidgeGrid& ridge) {
    logistic = LogisticGrid::default_grid();
    ridge = RidgeGrid::default_grid();
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open grid file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(std::string("grid file: ") + e.what());
    }
    if (j.contains("logistic")) {
        const auto& lj = j["logistic"];
        std::vector<ClassWeight> cws = {ClassWeight::balanced, ClassWeight::none};
        std::vector<Penalty> pens = {Penalty::l1, Penalty::l2};
        std::vector<double> cs = {1.0, 0.1, 0.01, 0.001, 0.0001};
        if (lj.contains("class_weight")) {
            cws.clear();
            for (const auto& s : lj["class_weight"]) {
                if (s == "balanced")
                    cws.push_back(ClassWeight::balanced);
                else if (s == "none")
                    cws.push_back(ClassWeight::none);
                else
                    throw InvalidConfig("grid: unknown class_weight " + s.get<std::string>());
            }
        }
        if (lj.contains("penalty")) {
            pens.clear();
            for (const auto& s : lj["penalty"]) {
                if (s == "l1")
                    pens.push_back(Penalty::l1);
                else if (s == "l2")
                    pens.push_back(Penalty::l2);
                else
                    throw InvalidConfig("grid: unknown penalty " + s.get<std::string>());
            }
        }
        if (lj.contains("C")) {
            cs.clear();
            for (const auto& v : lj["C"]) cs.push_back(v.get<double>());
        }
        logistic.points.clear();
        for (ClassWeight cw : cws)
            for (Penalty p : pens)
                for (double C : cs) logistic.points.push_back({p, C, cw});
    }
    if (j.contains("ridge") && j["ridge"].contains("lambda")) {
        ridge.lambdas.clear();
        for (const auto& v : j["ridge"]["lambda"]) ridge.lambdas.push_back(v.get<double>());
    }
    if (logistic.points.empty() || ridge.lambdas.empty())
        throw InvalidConfig("grid file produced an empty grid");
}

std::vector<std::size_t> kfold_assignment(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InvalidConfig("k-fold: k must be >= 2");
    if (n < k) throw TooFewSamples("k-fold: need at least k rows");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng::Engine eng(seed);
    rng::shuffle(idx, eng);
    std::vector<std::size_t> fold(n);
    for (std::size_t t = 0; t < n; ++t) fold[idx[t]] = t % k;
    return fold;
}

std::vector<std::size_t> stratified_kfold_assignment(const std::vector<int>& y, std::size_t k,
                                                     std::uint64_t seed) {
    if (k < 2) throw InvalidConfig("k-fold: k must be >= 2");
    if (y.size() < k) throw TooFewSamples("k-fold: need at least k rows");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
    rng::Engine eng(seed);
    std::vector<std::size_t> fold(y.size());
    std::size_t counter = 0;
    for (auto& [cls, members] : by_class) {
        rng::shuffle(members, eng);
        for (std::size_t m : members) fold[m] = counter++ % k;
    }
    return fold;
}

namespace {

struct FoldView {
    Eigen::MatrixXd Xtr, Xval;
    std::vector<std::size_t> tr_rows, val_rows;
};

FoldView split_fold(const Eigen::MatrixXd& X, const std::vector<std::size_t>& fold,
                    std::size_t f) {
    FoldView v;
    for (std::size_t i = 0; i < fold.size(); ++i)
        (fold[i] == f ? v.val_rows : v.tr_rows).push_back(i);
    v.Xtr.resize(static_cast<Eigen::Index>(v.tr_rows.size()), X.cols());
    v.Xval.resize(static_cast<Eigen::Index>(v.val_rows.size()), X.cols());
    for (std::size_t i = 0; i < v.tr_rows.size(); ++i)
        v.Xtr.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(v.tr_rows[i]));
    for (std::size_t i = 0; i < v.val_rows.size(); ++i)
        v.Xval.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(v.val_rows[i]));
    return v;
}

// AuROC family on one validation fold; degenerate folds score 0.5.
double fold_score(const Eigen::MatrixXd& proba, const std::vector<int>& yval, TaskKind kind,
                  std::vector<std::string>* warnings) {
    std::set<int> present(yval.begin(), yval.end());
    if (yval.empty() || present.size() < 2) {
        if (warnings) warnings->push_back("degenerate validation fold; scored as 0.5");
        std::cerr << "warning: degenerate validation fold; scoring 0.5\n";
        return 0.5;
    }
    if (kind == TaskKind::binary) {
        std::vector<double> s(yval.size());
        for (std::size_t i = 0; i < yval.size(); ++i)
            s[i] = proba(static_cast<Eigen::Index>(i), proba.cols() - 1);
        return auroc(s, yval);
    }
    std::vector<std::vector<double>> sm(yval.size());
    for (std::size_t i = 0; i < yval.size(); ++i) {
        sm[i].resize(static_cast<std::size_t>(proba.cols()));
        for (Eigen::Index c = 0; c < proba.cols(); ++c)
            sm[i][static_cast<std::size_t>(c)] = proba(static_cast<Eigen::Index>(i), c);
    }
    return mc_auroc(sm, yval);
}

}  // namespace

CvLogisticResult cv_select_logistic(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                    std::size_t n_classes, TaskKind kind,
                                    const LogisticGrid& grid, std::size_t k, std::uint64_t seed) {
    if (grid.points.empty()) throw InvalidConfig("cv: empty grid");
    auto fold = stratified_kfold_assignment(y, k, seed);
    CvLogisticResult result;
    result.mean_scores.assign(grid.points.size(), 0.0);
    for (std::size_t f = 0; f < k; ++f) {
        FoldView v = split_fold(X, fold, f);
        std::vector<int> ytr, yval;
        for (std::size_t i : v.tr_rows) ytr.push_back(y[i]);
        for (std::size_t i : v.val_rows) yval.push_back(y[i]);
        for (std::size_t gidx = 0; gidx < grid.points.size(); ++gidx) {
            LogisticModel m = fit_logistic(v.Xtr, ytr, n_classes, grid.points[gidx]);
            for (const auto& w : m.warnings) result.warnings.push_back(w);
            Eigen::MatrixXd proba = yval.empty()
                                        ? Eigen::MatrixXd(0, static_cast<Eigen::Index>(n_classes))
                                        : predict_proba(m, v.Xval);
            result.mean_scores[gidx] += fold_score(proba, yval, kind, &result.warnings);
        }
    }
    for (auto& s : result.mean_scores) s /= static_cast<double>(k);
    result.best_index = 0;
    for (std::size_t g = 1; g < grid.points.size(); ++g)
        if (result.mean_scores[g] > result.mean_scores[result.best_index]) result.best_index = g;
    result.best = grid.points[result.best_index];
    return result;
}

CvRidgeResult cv_select_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const RidgeGrid& grid, std::size_t k, std::uint64_t seed) {
    if (grid.lambdas.empty()) throw InvalidConfig("cv: empty grid");
    auto fold = kfold_assignment(static_cast<std::size_t>(X.rows()), k, seed);
    CvRidgeResult result;
    result.mean_scores.assign(grid.lambdas.size(), 0.0);
    for (std::size_t f = 0; f < k; ++f) {
        FoldView v = split_fold(X, fold, f);
        Eigen::VectorXd ytr(static_cast<Eigen::Index>(v.tr_rows.size()));
        std::vector<double> yval(v.val_rows.size());
        for (std::size_t i = 0; i < v.tr_rows.size(); ++i)
            ytr[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(v.tr_rows[i])];
        for (std::size_t i = 0; i < v.val_rows.size(); ++i)
            yval[i] = y[static_cast<Eigen::Index>(v.val_rows[i])];
        auto models = fit_ridge_path(v.Xtr, ytr, grid.lambdas);
        for (std::size_t gidx = 0; gidx < models.size(); ++gidx) {
            Eigen::VectorXd pred = predict(models[gidx], v.Xval);
            std::vector<double> pv(pred.data(), pred.data() + pred.size());
            result.mean_scores[gidx] += -mae(pv, yval);
        }
    }
    for (auto& s : result.mean_scores) s /= static_cast<double>(k);
    result.best_index = 0;
    for (std::size_t g = 1; g < grid.lambdas.size(); ++g)
        if (result.mean_scores[g] > result.mean_scores[result.best_index]) result.best_index = g;
    result.best_lambda = grid.lambdas[result.best_index];
    return result;
}

void save_logistic_json(const LogisticModel& m, const std::string& path) {
    nlohmann::json j;
    j["kind"] = "logistic";
    j["n_features"] = m.n_features;
    j["n_classes"] = m.n_classes;
    j["penalty"] = penalty_name(m.hyper.penalty);
    j["C"] = m.hyper.C;
    j["class_weight"] = class_weight_name(m.hyper.class_weight);
    j["intercepts"] = m.intercepts;
    j["constant_class"] = m.constant_class;
    std::vector<std::vector<double>> w;
    for (const auto& wc : m.weights) w.emplace_back(wc.data(), wc.data() + wc.size());
    j["weights"] = w;
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

LogisticModel load_logistic_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(std::string("model file: ") + e.what());
    }
    if (j.value("kind", "") != "logistic") throw MalformedRecord("model file: kind != logistic");
    LogisticModel m;
    m.n_features = j.at("n_features").get<std::size_t>();
    m.n_classes = j.at("n_classes").get<std::size_t>();
    m.hyper.penalty = j.at("penalty").get<std::string>() == "l1" ? Penalty::l1 : Penalty::l2;
    m.hyper.C = j.at("C").get<double>();
    m.hyper.class_weight = j.at("class_weight").get<std::string>() == "balanced"
                               ? ClassWeight::balanced
                               : ClassWeight::none;
    m.intercepts = j.at("intercepts").get<std::vector<double>>();
    m.constant_class = j.at("constant_class").get<std::vector<std::uint8_t>>();
    for (const auto& row : j.at("weights")) {
        auto vals = row.get<std::vector<double>>();
        m.weights.push_back(Eigen::Map<Eigen::VectorXd>(vals.data(),
                                                        static_cast<Eigen::Index>(vals.size())));
    }
    return m;
}

void save_ridge_json(const RidgeModel& m, const std::string& path) {
    nlohmann::json j;
    j["kind"] = "ridge";
    j["lambda"] = m.lambda;
    j["fit_intercept"] = m.fit_intercept;
    j["intercept"] = m.intercept;
    j["weights"] = std::vector<double>(m.w.data(), m.w.data() + m.w.size());
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

RidgeModel load_ridge_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(std::string("model file: ") + e.what());
    }
    if (j.value("kind", "") != "ridge") throw MalformedRecord("model file: kind != ridge");
    RidgeModel m;
    m.lambda = j.at("lambda").get<double>();
    m.fit_intercept = j.at("fit_intercept").get<bool>();
    m.intercept = j.at("intercept").get<double>();
    auto vals = j.at("weights").get<std::vector<double>>();
    m.w = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    return m;
}

}  // namespace epmd
