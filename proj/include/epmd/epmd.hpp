#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epmd/featurize.hpp"
#include "epmd/graph.hpp"
#include "epmd/rng.hpp"

namespace epmd {

// Per-attribute-type encoder weights. Encoding of node v for a type is
//   h = x1^T W1 + x2^T W2
// where x1 is the (masked) feature vector and x2 is one-hot(v) when the type
// has anything missing for v, else the zero vector.
struct TypeParams {
    std::string type_id;
    std::size_t domain_dim = 0;
    std::size_t d = 0;
    std::vector<double> W1;  // domain_dim x d, row-major
    std::vector<double> W2;  // num_nodes x d, row-major
};

struct EncoderParams {
    std::size_t d = 0;
    std::size_t num_nodes = 0;
    std::vector<TypeParams> types;

    const TypeParams* find(const std::string& type_id) const;
};

// Sparse encoder input for one (node, type): nonzero x1 entries plus the
// type-level missing flag that switches the x2 branch on.
struct SparseRow {
    std::vector<std::pair<std::uint32_t, double>> entries;
    bool missing = false;
};

struct TypeInputs {
    std::string type_id;
    ModalityKind kind = ModalityKind::numeric_group;
    std::size_t domain_dim = 0;
    std::vector<SparseRow> rows;  // one per node, dataset order
};

struct EncoderInputs {
    std::vector<std::string> episode_ids;
    std::vector<TypeInputs> types;

    const TypeInputs* find(const std::string& type_id) const;
};

// Identity attribute type: empty x1, x2 always on (pure node lookup).
inline constexpr const char* kIdentityType = "identity";

SparseRow to_encoder_input(const FeatureVectorWithMask& fv, ModalityKind kind);

// type_ids select featurized types to expose to the encoders; when
// add_identity is set an extra zero-width "identity" type is appended.
EncoderInputs build_encoder_inputs(const FeaturizedDataset& fd,
                                   const std::vector<std::string>& type_ids, bool add_identity);

struct TrainConfig {
    std::size_t iterations = 200;  // full passes over the node set
    std::size_t batch_size = 256;
    std::size_t dim = 32;
    double margin = 5.0;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double init_scale = 1.0;  // multiplier on the 1/sqrt(fan) ranges
    std::uint64_t seed = 1;
    double distance_epsilon = 1e-8;
    bool self_loops = false;
};

std::vector<double> encode_row(const SparseRow& row, std::size_t v, const TypeParams& tp);
std::vector<double> encode_type(const FeatureVectorWithMask& fv, ModalityKind kind, std::size_t v,
                                const TypeParams& tp);
std::vector<double> reconstruct(std::size_t v, const TypeInputs& ti, const AffinityGraph& g,
                                const TypeParams& tp);  // throws NoNeighbors

double margin_loss(const std::vector<double>& ht, const std::vector<double>& hv,
                   const std::vector<double>& hu, double gamma);

// Returns the loss and fills gradients w.r.t. the three encodings; all zero
// when the hinge is inactive. distance_epsilon guards the r/||r|| direction.
double margin_loss_grad(const std::vector<double>& ht, const std::vector<double>& hv,
                        const std::vector<double>& hu, double gamma, double distance_epsilon,
                        std::vector<double>& g_ht, std::vector<double>& g_hv,
                        std::vector<double>& g_hu);

// Full contrastive loss for one (v, u) pair summed over types; used directly
// by training and by finite-difference checks.
double node_loss(const EncoderInputs& in, const AffinityGraph& g, const EncoderParams& p,
                 std::size_t v, std::size_t u, double gamma, double distance_epsilon);

// Analytic parameter gradients of node_loss, shaped like the params (W1/W2
// hold the gradients). Shares the accumulation path with train_encoders.
EncoderParams node_loss_grad(const EncoderInputs& in, const AffinityGraph& g,
                             const EncoderParams& p, std::size_t v, std::size_t u, double gamma,
                             double distance_epsilon);

EncoderParams init_params(const EncoderInputs& in, std::size_t dim, std::size_t num_nodes,
                          double init_scale, rng::Engine& eng);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t t = 0;
};

void adam_step(std::vector<double>& theta, const std::vector<double>& grad, AdamState& state,
               double lr, double beta1, double beta2, double eps);

struct TrainResult {
    EncoderParams params;
    std::vector<double> epoch_mean_loss;
    std::size_t isolated_nodes = 0;
    std::size_t skipped_terms = 0;
    std::size_t total_terms = 0;
    double skipped_fraction = 0.0;
};

TrainResult train_encoders(const EncoderInputs& in, const AffinityGraph& g,
                           const TrainConfig& config);

// All-node encodings for one type, dataset order.
std::vector<std::vector<double>> encode_all(const TypeInputs& ti, const TypeParams& tp);

// params.bin: "EPMD" magic, u32 version, u64 d, u64 num_nodes, u32 num_types,
// then per type: u32 name length, name, u64 domain_dim, u64 d, W1, u64 V, W2
// (doubles, little-endian, row-major).
void save_params(const EncoderParams& p, const std::string& path);
EncoderParams load_params(const std::string& path);

void save_embeddings_csv(const std::vector<std::string>& ids,
                         const std::vector<std::vector<double>>& rows, const std::string& path);

}  // namespace epmd
