#include "epmd/representations.hpp"

#include <cstdio>
#include <fstream>

#include "epmd/errors.hpp"

namespace epmd {

std::string repr_flavor_name(ReprFlavor f) {
    switch (f) {
        case ReprFlavor::raw: return "raw";
        case ReprFlavor::embedded: return "embedded";
        case ReprFlavor::combined: return "combined";
    }
    return "raw";
}

ReprFlavor parse_repr_flavor(const std::string& s) {
    if (s == "raw") return ReprFlavor::raw;
    if (s == "embedded") return ReprFlavor::embedded;
    if (s == "combined") return ReprFlavor::combined;
    throw InvalidConfig("unknown representation: " + s);
}

RepresentationMatrix embedded_repr(const EncoderParams& params, const EncoderInputs& inputs) {
    RepresentationMatrix rm;
    rm.flavor = ReprFlavor::embedded;
    rm.episode_ids = inputs.episode_ids;
    const std::size_t n = inputs.episode_ids.size();
    std::size_t width = 0;
    for (const auto& tp : params.types) width += tp.d;
    rm.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
    std::size_t col = 0;
    for (const auto& tp : params.types) {
        const TypeInputs* ti = inputs.find(tp.type_id);
        if (!ti) throw UnknownAttribute("no encoder inputs for type " + tp.type_id);
        if (ti->rows.size() != n) throw DimensionMismatch("embedded_repr: row count mismatch");
        for (std::size_t v = 0; v < n; ++v) {
            auto h = encode_row(ti->rows[v], v, tp);
            for (std::size_t j = 0; j < tp.d; ++j)
                rm.X(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(col + j)) = h[j];
        }
        for (std::size_t j = 0; j < tp.d; ++j) rm.columns.push_back({tp.type_id, "embedding", j});
        col += tp.d;
    }
    return rm;
}

RepresentationMatrix raw_repr(const FeaturizedDataset& fd,
                              const std::vector<std::string>& type_ids) {
    RepresentationMatrix rm;
    rm.flavor = ReprFlavor::raw;
    rm.episode_ids = fd.episode_ids;
    const std::size_t n = fd.episode_ids.size();

    std::vector<const FeaturizedType*> types;
    std::size_t width = 0;
    for (const auto& id : type_ids) {
        const FeaturizedType* ft = fd.type(id);
        if (!ft) throw UnknownAttribute("no featurized type named " + id);
        types.push_back(ft);
        width += ft->dim;
    }

    rm.X.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
    std::size_t col = 0;
    for (const FeaturizedType* ft : types) {
        for (std::size_t v = 0; v < n; ++v) {
            const FeatureVectorWithMask& fv = ft->rows[v];
            if (ft->kind == ModalityKind::bag_of_words) {
                auto row = tfidf_row(fv.values, ft->vocab);
                for (std::size_t j = 0; j < ft->dim; ++j)
                    rm.X(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(col + j)) =
                        row[j];
            } else {
                // numeric: standardized, masked entries already 0 = train
                // mean; categorical: one-hot, missing block all-zero
                for (std::size_t j = 0; j < ft->dim; ++j)
                    rm.X(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(col + j)) =
                        fv.values[j];
            }
        }
        for (std::size_t j = 0; j < ft->dim; ++j) rm.columns.push_back({ft->type_id, "raw", j});
        col += ft->dim;
    }
    return rm;
}

RepresentationMatrix combined_repr(const RepresentationMatrix& embedded,
                                   const RepresentationMatrix& raw) {
    if (embedded.episode_ids != raw.episode_ids)
        throw IdMisalignment("combined_repr: episode id mismatch");
    RepresentationMatrix rm;
    rm.flavor = ReprFlavor::combined;
    rm.episode_ids = embedded.episode_ids;
    rm.X.resize(embedded.X.rows(), embedded.X.cols() + raw.X.cols());
    rm.X << embedded.X, raw.X;
    rm.columns = embedded.columns;
    rm.columns.insert(rm.columns.end(), raw.columns.begin(), raw.columns.end());
    return rm;
}

void save_representation(const RepresentationMatrix& rm, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << "# col,type_id,source,index\n";
    for (std::size_t j = 0; j < rm.columns.size(); ++j)
        out << "# " << j << ',' << rm.columns[j].type_id << ',' << rm.columns[j].source << ','
            << rm.columns[j].index << '\n';
    out << "episode_id";
    for (std::size_t j = 0; j < rm.columns.size(); ++j) out << ",c" << j;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < rm.episode_ids.size(); ++i) {
        out << rm.episode_ids[i];
        for (Eigen::Index j = 0; j < rm.X.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), ",%.17g", rm.X(static_cast<Eigen::Index>(i), j));
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace epmd
