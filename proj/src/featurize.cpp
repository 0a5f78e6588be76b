#include "epmd/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "epmd/errors.hpp"

namespace epmd {

const std::array<const char*, kSegmentsPerVariable> kSegmentNames = {
    "entire", "first10", "first25", "first50", "last10", "last25", "last50"};

const std::array<const char*, kStatsPerSegment> kStatNames = {
    "count", "min", "max", "mean", "std", "skew", "kurtosis", "median", "maxad"};

std::array<std::vector<double>, kSegmentsPerVariable> segment_series(
    const std::vector<SeriesPoint>& series, double window_hours) {
    std::array<std::vector<double>, kSegmentsPerVariable> out;
    const double fractions[3] = {0.10, 0.25, 0.50};
    for (const auto& p : series) {
        out[0].push_back(p.value);
        for (int f = 0; f < 3; ++f) {
            if (p.t <= fractions[f] * window_hours) out[1 + f].push_back(p.value);
            if (p.t >= (1.0 - fractions[f]) * window_hours) out[4 + f].push_back(p.value);
        }
    }
    return out;
}

SegmentStats segment_stats(const std::vector<double>& values) {
    SegmentStats s;
    if (values.empty()) return s;
    s.observed = true;

    const double n = static_cast<double>(values.size());
    double sum = 0.0, mn = values[0], mx = values[0];
    for (double v : values) {
        sum += v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    const double mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t half = sorted.size() / 2;
    const double median = sorted.size() % 2 == 1 ? sorted[half]
                                                 : 0.5 * (sorted[half - 1] + sorted[half]);
    double maxad = 0.0;
    for (double v : values) maxad = std::max(maxad, std::fabs(v - median));

    s.values[0] = n;
    s.values[1] = mn;
    s.values[2] = mx;
    s.values[3] = mean;
    s.values[4] = std::sqrt(m2);
    // Zero-variance convention: skew and excess kurtosis are defined as 0.
    s.values[5] = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.values[6] = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    s.values[7] = median;
    s.values[8] = maxad;
    return s;
}

FeatureVectorWithMask build_timeseries_features(const Episode& episode,
                                                const std::vector<std::string>& variables,
                                                double window_hours) {
    FeatureVectorWithMask fv;
    fv.values.assign(variables.size() * kFeaturesPerVariable, 0.0);
    fv.mask.assign(variables.size() * kFeaturesPerVariable, 0);
    static const std::vector<SeriesPoint> kNoPoints;
    for (std::size_t v = 0; v < variables.size(); ++v) {
        const auto it = episode.series.find(variables[v]);
        const auto& points = it != episode.series.end() ? it->second : kNoPoints;
        const auto segments = segment_series(points, window_hours);
        for (std::size_t seg = 0; seg < kSegmentsPerVariable; ++seg) {
            const SegmentStats stats = segment_stats(segments[seg]);
            if (!stats.observed) continue;
            const std::size_t base = (v * kSegmentsPerVariable + seg) * kStatsPerSegment;
            for (std::size_t k = 0; k < kStatsPerSegment; ++k) {
                fv.values[base + k] = stats.values[k];
                fv.mask[base + k] = 1;
            }
        }
    }
    return fv;
}

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, double min_frac,
                       double max_frac) {
    if (corpus.empty()) throw EmptyCorpus("vocabulary requires a non-empty corpus");
    if (!(min_frac >= 0.0 && min_frac < max_frac && max_frac <= 1.0))
        throw InvalidConfig("vocabulary bounds must satisfy 0 <= min < max <= 1");

    std::map<std::string, std::size_t> doc_count;
    for (const auto& doc : corpus) {
        std::set<std::string> uniq(doc.begin(), doc.end());
        for (const auto& tok : uniq) ++doc_count[tok];
    }
    Vocabulary vocab;
    vocab.n_documents = corpus.size();
    const double n = static_cast<double>(corpus.size());
    for (const auto& [tok, cnt] : doc_count) {
        const double freq = static_cast<double>(cnt) / n;
        // Strict bounds: boundary tokens are discarded.
        if (freq > min_frac && freq < max_frac) {
            vocab.index[tok] = vocab.tokens.size();
            vocab.tokens.push_back(tok);
            vocab.document_frequency.push_back(freq);
        }
    }
    return vocab;
}

FeatureVectorWithMask build_bow(const Episode& episode, const std::string& note_type,
                                const Vocabulary& vocab) {
    FeatureVectorWithMask fv;
    fv.values.assign(vocab.size(), 0.0);
    fv.mask.assign(vocab.size(), 0);
    const auto it = episode.notes.find(note_type);
    if (it == episode.notes.end()) return fv;  // note type missing: all-false mask
    std::fill(fv.mask.begin(), fv.mask.end(), 1);
    for (const auto& tok : it->second) {
        const auto v = vocab.index.find(tok);
        if (v != vocab.index.end()) fv.values[v->second] += 1.0;
    }
    return fv;
}

std::string age_bucket(const std::string& raw_age) {
    try {
        const double age = std::stod(raw_age);
        const int decade = std::clamp(static_cast<int>(age / 10.0), 0, 9);
        if (decade == 9) return "90+";
        return std::to_string(decade * 10) + "-" + std::to_string(decade * 10 + 9);
    } catch (...) {
        return raw_age;  // falls through to the "other" level
    }
}

FeatureVectorWithMask CategoricalEncoder::encode(const Episode& episode) const {
    FeatureVectorWithMask fv;
    fv.values.assign(dim, 0.0);
    fv.mask.assign(dim, 0);
    std::size_t offset = 0;
    for (const auto& attr : attributes) {
        const auto it = episode.categoricals.find(attr.name);
        if (it != episode.categoricals.end()) {
            std::string value = attr.name == "age" ? age_bucket(it->second) : it->second;
            auto lv = attr.index.find(value);
            if (lv == attr.index.end()) lv = attr.index.find("other");
            fv.values[offset + lv->second] = 1.0;
            for (std::size_t j = 0; j < attr.levels.size(); ++j) fv.mask[offset + j] = 1;
        }
        offset += attr.levels.size();
    }
    return fv;
}

std::vector<std::string> CategoricalEncoder::feature_names() const {
    std::vector<std::string> names;
    for (const auto& attr : attributes)
        for (const auto& lv : attr.levels) names.push_back(attr.name + "=" + lv);
    return names;
}

std::vector<std::pair<std::size_t, std::size_t>> CategoricalEncoder::attribute_spans() const {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t offset = 0;
    for (const auto& attr : attributes) {
        spans.emplace_back(offset, offset + attr.levels.size());
        offset += attr.levels.size();
    }
    return spans;
}

CategoricalEncoder fit_categorical_encoder(const Dataset& ds,
                                           const std::vector<std::string>& attribute_names,
                                           const std::vector<std::string>& train_ids) {
    std::set<std::string> train(train_ids.begin(), train_ids.end());
    CategoricalEncoder enc;
    for (const auto& name : attribute_names) {
        std::set<std::string> levels;
        for (const auto& ep : ds.episodes) {
            if (!train.count(ep.id)) continue;
            const auto it = ep.categoricals.find(name);
            if (it == ep.categoricals.end()) continue;
            levels.insert(name == "age" ? age_bucket(it->second) : it->second);
        }
        CategoricalEncoder::Attribute attr;
        attr.name = name;
        attr.levels.assign(levels.begin(), levels.end());
        attr.levels.push_back("other");
        for (std::size_t j = 0; j < attr.levels.size(); ++j) attr.index[attr.levels[j]] = j;
        enc.dim += attr.levels.size();
        enc.attributes.push_back(std::move(attr));
    }
    return enc;
}

Standardizer fit_standardizer(const std::vector<const FeatureVectorWithMask*>& train_rows) {
    Standardizer st;
    if (train_rows.empty()) return st;
    const std::size_t dim = train_rows.front()->values.size();
    st.mean.assign(dim, 0.0);
    st.stddev.assign(dim, 1.0);
    std::vector<double> sum(dim, 0.0), sumsq(dim, 0.0);
    std::vector<std::size_t> count(dim, 0);
    for (const auto* row : train_rows) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (!row->mask[j]) continue;
            sum[j] += row->values[j];
            ++count[j];
        }
    }
    for (std::size_t j = 0; j < dim; ++j)
        if (count[j] > 0) st.mean[j] = sum[j] / static_cast<double>(count[j]);
    for (const auto* row : train_rows)
        for (std::size_t j = 0; j < dim; ++j)
            if (row->mask[j]) {
                const double d = row->values[j] - st.mean[j];
                sumsq[j] += d * d;
            }
    for (std::size_t j = 0; j < dim; ++j) {
        if (count[j] == 0) continue;
        const double var = sumsq[j] / static_cast<double>(count[j]);
        if (var > 0.0) st.stddev[j] = std::sqrt(var);
    }
    return st;
}

void Standardizer::transform(FeatureVectorWithMask& fv) const {
    for (std::size_t j = 0; j < fv.values.size(); ++j) {
        if (!fv.mask[j]) {
            fv.values[j] = 0.0;  // masked-out convention
            continue;
        }
        fv.values[j] = (fv.values[j] - mean[j]) / stddev[j];
    }
}

std::vector<double> tfidf_row(const FeatureVectorWithMask& counts, const Vocabulary& vocab) {
    std::vector<double> row(counts.values.size(), 0.0);
    const double n = static_cast<double>(vocab.n_documents);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (counts.values[j] <= 0.0) continue;
        const double df = vocab.document_frequency[j] * n;
        const double idf = std::log((1.0 + n) / (1.0 + df)) + 1.0;
        row[j] = counts.values[j] * idf;
        norm2 += row[j] * row[j];
    }
    if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : row) v *= inv;
    }
    return row;
}

bool FeaturizedType::attribute_observed(std::size_t row, std::size_t attr) const {
    const auto [begin, end] = attribute_spans[attr];
    const auto& mask = rows[row].mask;
    for (std::size_t j = begin; j < end; ++j)
        if (mask[j]) return true;
    return false;
}

bool FeaturizedType::type_missing(std::size_t row) const {
    const auto& mask = rows[row].mask;
    if (mask.empty()) return true;
    for (auto m : mask)
        if (!m) return true;
    return false;
}

const FeaturizedType* FeaturizedDataset::type(const std::string& type_id) const {
    for (const auto& t : types)
        if (t.type_id == type_id) return &t;
    return nullptr;
}

FeaturizedDataset featurize_dataset(const Dataset& ds) {
    FeaturizedDataset out;
    for (const auto& ep : ds.episodes) out.episode_ids.push_back(ep.id);
    const auto train_ids = ds.ids_in_split(Split::train);
    std::set<std::string> train(train_ids.begin(), train_ids.end());

    for (const auto& schema : ds.schema) {
        FeaturizedType ft;
        ft.type_id = schema.type_id;
        ft.kind = schema.kind;
        ft.attribute_names = schema.attribute_names;

        switch (schema.kind) {
            case ModalityKind::numeric_group: {
                for (const auto& ep : ds.episodes)
                    ft.rows.push_back(
                        build_timeseries_features(ep, schema.attribute_names, ds.window_hours));
                ft.dim = schema.attribute_names.size() * kFeaturesPerVariable;
                for (std::size_t v = 0; v < schema.attribute_names.size(); ++v) {
                    ft.attribute_spans.emplace_back(v * kFeaturesPerVariable,
                                                    (v + 1) * kFeaturesPerVariable);
                    for (std::size_t seg = 0; seg < kSegmentsPerVariable; ++seg)
                        for (std::size_t k = 0; k < kStatsPerSegment; ++k)
                            ft.feature_names.push_back(schema.attribute_names[v] + "|" +
                                                       kSegmentNames[seg] + "|" + kStatNames[k]);
                }
                std::vector<const FeatureVectorWithMask*> train_rows;
                for (std::size_t i = 0; i < ds.episodes.size(); ++i)
                    if (train.count(ds.episodes[i].id)) train_rows.push_back(&ft.rows[i]);
                out.standardizer = fit_standardizer(train_rows);
                for (auto& row : ft.rows) out.standardizer.transform(row);
                break;
            }
            case ModalityKind::bag_of_words: {
                const std::string& note_type = schema.attribute_names.front();
                std::vector<std::vector<std::string>> corpus;
                for (const auto& ep : ds.episodes) {
                    if (!train.count(ep.id)) continue;
                    const auto it = ep.notes.find(note_type);
                    if (it != ep.notes.end()) corpus.push_back(it->second);
                }
                if (corpus.empty()) corpus.push_back({});  // degenerate: empty vocabulary
                ft.vocab = build_vocab(corpus);
                ft.dim = ft.vocab.size();
                ft.attribute_spans.emplace_back(0, ft.dim);
                for (const auto& tok : ft.vocab.tokens)
                    ft.feature_names.push_back(note_type + "|" + tok);
                for (const auto& ep : ds.episodes)
                    ft.rows.push_back(build_bow(ep, note_type, ft.vocab));
                break;
            }
            case ModalityKind::categorical_group: {
                const auto enc = fit_categorical_encoder(ds, schema.attribute_names, train_ids);
                ft.dim = enc.dim;
                ft.feature_names = enc.feature_names();
                ft.attribute_spans = enc.attribute_spans();
                for (const auto& ep : ds.episodes) ft.rows.push_back(enc.encode(ep));
                break;
            }
        }
        out.types.push_back(std::move(ft));
    }
    return out;
}

}  // namespace epmd
