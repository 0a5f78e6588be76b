#include "epmd/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "epmd/errors.hpp"

namespace epmd {

MissingnessProfile missingness_error_profile(const std::vector<double>& err_embedded,
                                             const std::vector<double>& err_raw,
                                             const std::vector<std::size_t>& missing_counts,
                                             std::size_t num_types) {
    if (err_embedded.size() != err_raw.size() || err_embedded.size() != missing_counts.size())
        throw IdMisalignment("missingness profile: input lengths differ");
    MissingnessProfile p;
    p.count.assign(num_types + 1, 0);
    std::vector<double> sums(num_types + 1, 0.0);
    for (std::size_t i = 0; i < err_embedded.size(); ++i) {
        std::size_t bin = missing_counts[i];
        if (bin > num_types)
            throw IdMisalignment("missingness profile: count exceeds number of types");
        ++p.count[bin];
        sums[bin] += err_embedded[i] - err_raw[i];
    }
    p.mean_delta.resize(num_types + 1);
    for (std::size_t b = 0; b <= num_types; ++b)
        p.mean_delta[b] = p.count[b] > 0 ? sums[b] / static_cast<double>(p.count[b])
                                         : std::numeric_limits<double>::quiet_NaN();
    return p;
}

std::vector<AttributeFlag> attribute_observed_flags(const FeaturizedDataset& fd,
                                                    const std::vector<std::size_t>& rows,
                                                    const std::vector<std::string>& type_ids) {
    std::vector<AttributeFlag> flags;
    for (const auto& id : type_ids) {
        const FeaturizedType* ft = fd.type(id);
        if (!ft) throw UnknownAttribute("no featurized type named " + id);
        for (std::size_t a = 0; a < ft->attribute_names.size(); ++a) {
            AttributeFlag f;
            f.type_id = ft->type_id;
            f.attribute = ft->attribute_names[a];
            f.observed.reserve(rows.size());
            for (std::size_t r : rows)
                f.observed.push_back(ft->attribute_observed(r, a) ? 1 : 0);
            flags.push_back(std::move(f));
        }
    }
    return flags;
}

std::vector<AttributeFlag> type_observed_flags(const FeaturizedDataset& fd,
                                               const std::vector<std::size_t>& rows,
                                               const std::vector<std::string>& type_ids) {
    std::vector<AttributeFlag> flags;
    for (const auto& id : type_ids) {
        const FeaturizedType* ft = fd.type(id);
        if (!ft) throw UnknownAttribute("no featurized type named " + id);
        AttributeFlag f;
        f.type_id = ft->type_id;
        f.attribute = ft->type_id;
        f.observed.reserve(rows.size());
        for (std::size_t r : rows) f.observed.push_back(ft->type_missing(r) ? 0 : 1);
        flags.push_back(std::move(f));
    }
    return flags;
}

std::vector<std::size_t> missing_type_counts(const FeaturizedDataset& fd,
                                             const std::vector<std::size_t>& rows,
                                             const std::vector<std::string>& type_ids) {
    std::vector<std::size_t> counts(rows.size(), 0);
    for (const auto& id : type_ids) {
        const FeaturizedType* ft = fd.type(id);
        if (!ft) throw UnknownAttribute("no featurized type named " + id);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (ft->type_missing(rows[i])) ++counts[i];
    }
    return counts;
}

std::vector<FeatureDelta> feature_mae_delta(const std::vector<double>& errors,
                                            const std::vector<AttributeFlag>& flags) {
    double overall = 0.0;
    for (double e : errors) overall += e;
    overall = errors.empty() ? 0.0 : overall / static_cast<double>(errors.size());

    std::vector<FeatureDelta> out;
    for (const auto& f : flags) {
        if (f.observed.size() != errors.size())
            throw IdMisalignment("feature_mae_delta: flag length mismatch");
        FeatureDelta d;
        d.type_id = f.type_id;
        d.attribute = f.attribute;
        double sum_obs = 0.0, sum_miss = 0.0;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (f.observed[i]) {
                ++d.n_observed;
                sum_obs += errors[i];
            } else {
                ++d.n_missing;
                sum_miss += errors[i];
            }
        }
        d.pct_observed = errors.empty()
                             ? 0.0
                             : 100.0 * static_cast<double>(d.n_observed) /
                                   static_cast<double>(errors.size());
        if (d.n_observed > 0 && d.n_missing > 0 && overall > 0.0) {
            double mae_obs = sum_obs / static_cast<double>(d.n_observed);
            double mae_miss = sum_miss / static_cast<double>(d.n_missing);
            d.defined = true;
            d.delta = (mae_obs - mae_miss) / overall;
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<ContributionRow> feature_contribution(const RepresentationMatrix& rm,
                                                  const std::vector<std::size_t>& rows,
                                                  const Eigen::VectorXd& w,
                                                  const std::vector<AttributeFlag>& flags) {
    if (static_cast<std::size_t>(w.size()) != rm.columns.size())
        throw DimensionMismatch("feature_contribution: weight/column count mismatch");
    std::vector<ContributionRow> out;
    for (const auto& f : flags) {
        if (f.observed.size() != rows.size())
            throw IdMisalignment("feature_contribution: flag length mismatch");
        std::vector<Eigen::Index> cols;
        for (std::size_t j = 0; j < rm.columns.size(); ++j)
            if (rm.columns[j].type_id == f.type_id) cols.push_back(static_cast<Eigen::Index>(j));
        if (cols.empty())
            throw MissingProvenance("no columns with type_id " + f.type_id +
                                    " in the representation");
        ContributionRow row;
        row.feature = f.attribute;
        row.type_id = f.type_id;
        double sum_all = 0.0, sum_obs = 0.0, sum_miss = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double s = 0.0;
            for (Eigen::Index j : cols)
                s += rm.X(static_cast<Eigen::Index>(rows[i]), j) * w[j];
            double c = std::fabs(s);
            sum_all += c;
            if (f.observed[i]) {
                ++row.n_observed;
                sum_obs += c;
            } else {
                ++row.n_missing;
                sum_miss += c;
            }
        }
        row.mean_abs = rows.empty() ? 0.0 : sum_all / static_cast<double>(rows.size());
        row.mean_observed =
            row.n_observed > 0 ? sum_obs / static_cast<double>(row.n_observed) : 0.0;
        row.mean_missing = row.n_missing > 0 ? sum_miss / static_cast<double>(row.n_missing) : 0.0;
        if (row.n_observed > 0 && row.n_missing > 0 && row.mean_missing > 0.0) {
            row.ratio_defined = true;
            row.ratio = row.mean_observed / row.mean_missing;
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<double> signed_type_contributions(const RepresentationMatrix& rm, std::size_t row,
                                              const Eigen::VectorXd& w,
                                              const std::vector<std::string>& type_order) {
    if (static_cast<std::size_t>(w.size()) != rm.columns.size())
        throw DimensionMismatch("signed_type_contributions: weight/column count mismatch");
    std::vector<double> out;
    for (const auto& type_id : type_order) {
        double s = 0.0;
        bool any = false;
        for (std::size_t j = 0; j < rm.columns.size(); ++j) {
            if (rm.columns[j].type_id != type_id) continue;
            any = true;
            s += rm.X(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) *
                 w[static_cast<Eigen::Index>(j)];
        }
        if (!any) throw MissingProvenance("no columns with type_id " + type_id);
        out.push_back(s);
    }
    return out;
}

void save_missingness_profile(const MissingnessProfile& p, const std::string& error_definition,
                              const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << "# mean(error_embedded - error_raw) per count of missing attribute types\n";
    out << "# error definition: " << error_definition << '\n';
    out << "feature,stratum,value\n";
    char buf[64];
    for (std::size_t b = 0; b < p.count.size(); ++b) {
        out << "missing_types_" << b << ",count," << p.count[b] << '\n';
        if (p.count[b] > 0) {
            std::snprintf(buf, sizeof(buf), "%.17g", p.mean_delta[b]);
            out << "missing_types_" << b << ",mean_error_delta," << buf << '\n';
        } else {
            out << "missing_types_" << b << ",mean_error_delta,undefined\n";
        }
    }
}

void save_feature_deltas(const std::vector<FeatureDelta>& deltas, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << "# delta = (MAE over episodes with the attribute observed - MAE over episodes with it "
           "missing) / overall MAE\n";
    out << "# undefined when either stratum is empty\n";
    out << "feature,stratum,value\n";
    char buf[64];
    for (const auto& d : deltas) {
        std::string name = d.type_id + ":" + d.attribute;
        if (d.defined) {
            std::snprintf(buf, sizeof(buf), "%.17g", d.delta);
            out << name << ",normalized_mae_delta," << buf << '\n';
        } else {
            out << name << ",normalized_mae_delta,undefined\n";
        }
        std::snprintf(buf, sizeof(buf), "%.17g", d.pct_observed);
        out << name << ",pct_observed," << buf << '\n';
        out << name << ",n_observed," << d.n_observed << '\n';
        out << name << ",n_missing," << d.n_missing << '\n';
    }
}

void save_contributions(const std::vector<ContributionRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << "# contribution of feature f on an instance = |sum over f's columns of value * "
           "coefficient|\n";
    out << "# ratio = mean over instances with f observed / mean with f missing\n";
    out << "feature,stratum,value\n";
    char buf[64];
    auto emit = [&](const std::string& name, const char* stratum, double value) {
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out << name << ',' << stratum << ',' << buf << '\n';
    };
    for (const auto& r : rows) {
        std::string name = r.type_id + ":" + r.feature;
        emit(name, "mean_abs", r.mean_abs);
        emit(name, "mean_observed", r.mean_observed);
        emit(name, "mean_missing", r.mean_missing);
        if (r.ratio_defined)
            emit(name, "ratio_observed_over_missing", r.ratio);
        else
            out << name << ",ratio_observed_over_missing,undefined\n";
        out << name << ",n_observed," << r.n_observed << '\n';
        out << name << ",n_missing," << r.n_missing << '\n';
    }
}

}  // namespace epmd
