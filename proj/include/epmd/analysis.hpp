#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "epmd/featurize.hpp"
#include "epmd/representations.hpp"

namespace epmd {

// Errors vs. missingness: episodes binned by how many attribute types are
// missing (0..num_types); each bin reports mean(error_embedded - error_raw).
struct MissingnessProfile {
    std::vector<std::size_t> count;      // index = number of missing types
    std::vector<double> mean_delta;      // NaN for empty bins
};

MissingnessProfile missingness_error_profile(const std::vector<double>& err_embedded,
                                             const std::vector<double>& err_raw,
                                             const std::vector<std::size_t>& missing_counts,
                                             std::size_t num_types);

// Observed flags for a set of featurized rows, at attribute or type level.
struct AttributeFlag {
    std::string type_id;
    std::string attribute;
    std::vector<std::uint8_t> observed;  // aligned with the row subset
};

std::vector<AttributeFlag> attribute_observed_flags(const FeaturizedDataset& fd,
                                                    const std::vector<std::size_t>& rows,
                                                    const std::vector<std::string>& type_ids);
std::vector<AttributeFlag> type_observed_flags(const FeaturizedDataset& fd,
                                               const std::vector<std::size_t>& rows,
                                               const std::vector<std::string>& type_ids);
std::vector<std::size_t> missing_type_counts(const FeaturizedDataset& fd,
                                             const std::vector<std::size_t>& rows,
                                             const std::vector<std::string>& type_ids);

// (MAE observed - MAE missing) / overall MAE per attribute; undefined when a
// stratum is empty.
struct FeatureDelta {
    std::string type_id;
    std::string attribute;
    bool defined = false;
    double delta = 0.0;
    double pct_observed = 0.0;
    std::size_t n_observed = 0;
    std::size_t n_missing = 0;
};

std::vector<FeatureDelta> feature_mae_delta(const std::vector<double>& errors,
                                            const std::vector<AttributeFlag>& flags);

// Mean |sum over the feature's columns of value * weight| on a row subset,
// split by the feature's observed flag.
struct ContributionRow {
    std::string feature;
    std::string type_id;
    double mean_abs = 0.0;
    double mean_observed = 0.0;
    double mean_missing = 0.0;
    bool ratio_defined = false;
    double ratio = 0.0;  // observed / missing
    std::size_t n_observed = 0;
    std::size_t n_missing = 0;
};

std::vector<ContributionRow> feature_contribution(const RepresentationMatrix& rm,
                                                  const std::vector<std::size_t>& rows,
                                                  const Eigen::VectorXd& w,
                                                  const std::vector<AttributeFlag>& flags);

// Signed (pre-absolute-value) per-type contributions for one row; summing
// them and adding the intercept reproduces a linear model's prediction.
std::vector<double> signed_type_contributions(const RepresentationMatrix& rm, std::size_t row,
                                              const Eigen::VectorXd& w,
                                              const std::vector<std::string>& type_order);

void save_missingness_profile(const MissingnessProfile& p, const std::string& error_definition,
                              const std::string& path);
void save_feature_deltas(const std::vector<FeatureDelta>& deltas, const std::string& path);
void save_contributions(const std::vector<ContributionRow>& rows, const std::string& path);

}  // namespace epmd
