#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "epmd/epmd.hpp"
#include "epmd/featurize.hpp"

namespace epmd {

enum class ReprFlavor { raw, embedded, combined };

std::string repr_flavor_name(ReprFlavor f);
ReprFlavor parse_repr_flavor(const std::string& s);

struct ColumnProvenance {
    std::string type_id;
    std::string source;  // "raw" or "embedding"
    std::size_t index = 0;
};

struct RepresentationMatrix {
    ReprFlavor flavor = ReprFlavor::raw;
    std::vector<std::string> episode_ids;
    Eigen::MatrixXd X;
    std::vector<ColumnProvenance> columns;
};

// Concatenated per-type encodings, type order = params order.
RepresentationMatrix embedded_repr(const EncoderParams& params, const EncoderInputs& inputs);

// Hand-crafted baseline: standardized mean-imputed numeric features, TF-IDF
// text blocks, one-hot categorical blocks (missing -> zero block). type_ids
// selects which featurized types participate, in order.
RepresentationMatrix raw_repr(const FeaturizedDataset& fd,
                              const std::vector<std::string>& type_ids);

RepresentationMatrix combined_repr(const RepresentationMatrix& embedded,
                                   const RepresentationMatrix& raw);

// CSV with provenance comment lines ("# col,type_id,source,index") before the
// data header.
void save_representation(const RepresentationMatrix& rm, const std::string& path);

}  // namespace epmd
