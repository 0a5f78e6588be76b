#include "epmd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "epmd/errors.hpp"

namespace epmd::stats {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    const int max_iter = 300;
    const double eps = 3e-15;
    const double fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw InvalidConfig("incomplete beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                    b * std::log1p(-x);
    double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double t_two_sided_p(double t, double dof) {
    if (dof <= 0.0) throw InvalidConfig("t test: dof must be positive");
    if (!std::isfinite(t)) return 0.0;
    double p = regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
    return std::min(1.0, std::max(0.0, p));
}

PairedTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("paired t: length mismatch");
    if (a.size() < 2) throw TooFewPairs("paired t: need at least 2 pairs");
    const std::size_t n = a.size();
    PairedTestResult res;
    res.n = n;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    res.mean_diff = mean;
    if (sd == 0.0) {
        if (mean == 0.0) {
            res.t = 0.0;
            res.p = 1.0;
        } else {
            res.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
            res.p = 1e-300;
        }
        return res;
    }
    res.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    res.p = t_two_sided_p(res.t, static_cast<double>(n - 1));
    return res;
}

std::vector<double> benjamini_hochberg(const std::vector<double>& pvalues) {
    const std::size_t m = pvalues.size();
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
    std::vector<double> adjusted(m, 0.0);
    double running = 1.0;
    for (std::size_t r = m; r-- > 0;) {
        double adj = pvalues[idx[r]] * static_cast<double>(m) / static_cast<double>(r + 1);
        running = std::min(running, adj);
        adjusted[idx[r]] = std::min(1.0, running);
    }
    return adjusted;
}

}  // namespace epmd::stats
