#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "epmd/dataset.hpp"

namespace epmd {

// Fixed-length numeric view of one attribute type for one episode.
// values[j] is forced to 0 wherever mask[j] is false.
struct FeatureVectorWithMask {
    std::vector<double> values;
    std::vector<std::uint8_t> mask;  // 1 = observed
};

struct SegmentStats {
    std::array<double, 9> values{};  // count,min,max,mean,std,skew,kurtosis,median,maxAD
    bool observed = false;
};

inline constexpr std::size_t kStatsPerSegment = 9;
inline constexpr std::size_t kSegmentsPerVariable = 7;
inline constexpr std::size_t kFeaturesPerVariable = kSegmentsPerVariable * kStatsPerSegment;

extern const std::array<const char*, kSegmentsPerVariable> kSegmentNames;
extern const std::array<const char*, kStatsPerSegment> kStatNames;

// Splits a series into [entire, first10, first25, first50, last10, last25,
// last50] by timestamp fraction of the window; boundaries are closed on both
// sides.
std::array<std::vector<double>, kSegmentsPerVariable> segment_series(
    const std::vector<SeriesPoint>& series, double window_hours);

// Population-moment statistics; empty input yields observed=false.
SegmentStats segment_stats(const std::vector<double>& values);

FeatureVectorWithMask build_timeseries_features(const Episode& episode,
                                                const std::vector<std::string>& variables,
                                                double window_hours);

struct Vocabulary {
    std::vector<std::string> tokens;          // lexicographic order
    std::vector<double> document_frequency;   // per token, fraction of documents
    std::size_t n_documents = 0;
    std::map<std::string, std::size_t> index;

    std::size_t size() const { return tokens.size(); }
};

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, double min_frac = 0.001,
                       double max_frac = 0.90);

FeatureVectorWithMask build_bow(const Episode& episode, const std::string& note_type,
                                const Vocabulary& vocab);

// One-hot encoder over category levels seen in the training split, plus an
// explicit "other" level per attribute for unseen values. Ages are bucketed
// into decades before encoding.
struct CategoricalEncoder {
    struct Attribute {
        std::string name;
        std::vector<std::string> levels;  // training levels + "other"
        std::map<std::string, std::size_t> index;
    };
    std::vector<Attribute> attributes;
    std::size_t dim = 0;

    FeatureVectorWithMask encode(const Episode& episode) const;
    std::vector<std::string> feature_names() const;
    // [begin, end) column span of each attribute's one-hot block.
    std::vector<std::pair<std::size_t, std::size_t>> attribute_spans() const;
};

std::string age_bucket(const std::string& raw_age);

CategoricalEncoder fit_categorical_encoder(const Dataset& ds,
                                           const std::vector<std::string>& attribute_names,
                                           const std::vector<std::string>& train_ids);

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;  // 1.0 where the feature is constant or unobserved

    void transform(FeatureVectorWithMask& fv) const;
};

Standardizer fit_standardizer(const std::vector<const FeatureVectorWithMask*>& train_rows);

// TF-IDF with smoothed idf = ln((1+N)/(1+df)) + 1 and L2 row normalization.
std::vector<double> tfidf_row(const FeatureVectorWithMask& counts, const Vocabulary& vocab);

// ---------------------------------------------------------------------------
// Whole-dataset featurization
// ---------------------------------------------------------------------------

struct FeaturizedType {
    std::string type_id;
    ModalityKind kind = ModalityKind::numeric_group;
    std::vector<std::string> attribute_names;
    std::vector<std::string> feature_names;
    // Column span of each attribute within this type's feature vector.
    std::vector<std::pair<std::size_t, std::size_t>> attribute_spans;
    std::vector<FeatureVectorWithMask> rows;  // aligned with dataset episode order
    Vocabulary vocab;                         // bag_of_words types only
    std::size_t dim = 0;

    bool attribute_observed(std::size_t row, std::size_t attr) const;
    bool type_missing(std::size_t row) const;  // any entry of the row masked
};

struct FeaturizedDataset {
    std::vector<std::string> episode_ids;
    std::vector<FeaturizedType> types;
    Standardizer standardizer;  // fitted on the numeric group

    const FeaturizedType* type(const std::string& type_id) const;  // nullptr if absent
};

// Fits vocabulary/levels/standardizer on the training split only, then
// featurizes every episode. Numeric features come out standardized.
FeaturizedDataset featurize_dataset(const Dataset& ds);

}  // namespace epmd
