#include "epmd/epmd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>

#include "epmd/errors.hpp"

namespace epmd {

const TypeParams* EncoderParams::find(const std::string& type_id) const {
    for (const auto& tp : types)
        if (tp.type_id == type_id) return &tp;
    return nullptr;
}

const TypeInputs* EncoderInputs::find(const std::string& type_id) const {
    for (const auto& ti : types)
        if (ti.type_id == type_id) return &ti;
    return nullptr;
}

SparseRow to_encoder_input(const FeatureVectorWithMask& fv, ModalityKind kind) {
    SparseRow row;
    row.missing = fv.values.empty();
    for (std::uint8_t m : fv.mask)
        if (!m) row.missing = true;
    if (kind == ModalityKind::bag_of_words) {
        double total = 0.0;
        for (double x : fv.values) total += x;
        if (total > 0.0)
            for (std::uint32_t i = 0; i < fv.values.size(); ++i)
                if (fv.values[i] != 0.0) row.entries.emplace_back(i, fv.values[i] / total);
    } else {
        for (std::uint32_t i = 0; i < fv.values.size(); ++i)
            if (fv.values[i] != 0.0) row.entries.emplace_back(i, fv.values[i]);
    }
    return row;
}

EncoderInputs build_encoder_inputs(const FeaturizedDataset& fd,
                                   const std::vector<std::string>& type_ids, bool add_identity) {
    EncoderInputs in;
    in.episode_ids = fd.episode_ids;
    for (const auto& id : type_ids) {
        const FeaturizedType* ft = fd.type(id);
        if (!ft) throw UnknownAttribute("no featurized type named " + id);
        TypeInputs ti;
        ti.type_id = ft->type_id;
        ti.kind = ft->kind;
        ti.domain_dim = ft->dim;
        ti.rows.reserve(ft->rows.size());
        for (const auto& fv : ft->rows) ti.rows.push_back(to_encoder_input(fv, ft->kind));
        in.types.push_back(std::move(ti));
    }
    if (add_identity) {
        TypeInputs ti;
        ti.type_id = kIdentityType;
        ti.kind = ModalityKind::categorical_group;
        ti.domain_dim = 0;
        SparseRow row;
        row.missing = true;  // x2 always on: pure per-node lookup
        ti.rows.assign(fd.episode_ids.size(), row);
        in.types.push_back(std::move(ti));
    }
    return in;
}

std::vector<double> encode_row(const SparseRow& row, std::size_t v, const TypeParams& tp) {
    std::vector<double> h(tp.d, 0.0);
    for (auto [col, val] : row.entries) {
        if (col >= tp.domain_dim) throw DimensionMismatch("encode: column beyond domain_dim");
        const double* w = &tp.W1[static_cast<std::size_t>(col) * tp.d];
        for (std::size_t j = 0; j < tp.d; ++j) h[j] += val * w[j];
    }
    if (row.missing) {
        if ((v + 1) * tp.d > tp.W2.size()) throw DimensionMismatch("encode: node beyond W2");
        const double* w = &tp.W2[v * tp.d];
        for (std::size_t j = 0; j < tp.d; ++j) h[j] += w[j];
    }
    return h;
}

std::vector<double> encode_type(const FeatureVectorWithMask& fv, ModalityKind kind, std::size_t v,
                                const TypeParams& tp) {
    if (fv.values.size() != tp.domain_dim)
        throw DimensionMismatch("encode: input length " + std::to_string(fv.values.size()) +
                                " != domain_dim " + std::to_string(tp.domain_dim));
    return encode_row(to_encoder_input(fv, kind), v, tp);
}

std::vector<double> reconstruct(std::size_t v, const TypeInputs& ti, const AffinityGraph& g,
                                const TypeParams& tp) {
    const auto& nbrs = g.adjacency[v];
    if (nbrs.empty()) throw NoNeighbors("node " + g.node_ids[v] + " has no neighbors");
    std::vector<double> h(tp.d, 0.0);
    for (std::size_t u : nbrs) {
        auto hu = encode_row(ti.rows[u], u, tp);
        for (std::size_t j = 0; j < tp.d; ++j) h[j] += hu[j];
    }
    for (auto& x : h) x /= static_cast<double>(nbrs.size());
    return h;
}

namespace {

double euclidean(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double diff = a[j] - b[j];
        s += diff * diff;
    }
    return std::sqrt(s);
}

}  // namespace

double margin_loss(const std::vector<double>& ht, const std::vector<double>& hv,
                   const std::vector<double>& hu, double gamma) {
    if (ht.size() != hv.size() || ht.size() != hu.size())
        throw DimensionMismatch("margin_loss: dimension mismatch");
    double d1 = euclidean(ht.data(), hv.data(), ht.size());
    double d2 = euclidean(ht.data(), hu.data(), ht.size());
    return std::max(0.0, gamma + d1 - d2);
}

double margin_loss_grad(const std::vector<double>& ht, const std::vector<double>& hv,
                        const std::vector<double>& hu, double gamma, double distance_epsilon,
                        std::vector<double>& g_ht, std::vector<double>& g_hv,
                        std::vector<double>& g_hu) {
    const std::size_t n = ht.size();
    g_ht.assign(n, 0.0);
    g_hv.assign(n, 0.0);
    g_hu.assign(n, 0.0);
    double d1 = euclidean(ht.data(), hv.data(), n);
    double d2 = euclidean(ht.data(), hu.data(), n);
    double loss = gamma + d1 - d2;
    if (loss <= 0.0) return 0.0;
    double s1 = 1.0 / std::max(d1, distance_epsilon);
    double s2 = 1.0 / std::max(d2, distance_epsilon);
    for (std::size_t j = 0; j < n; ++j) {
        double r1 = (ht[j] - hv[j]) * s1;
        double r2 = (ht[j] - hu[j]) * s2;
        g_ht[j] = r1 - r2;
        g_hv[j] = -r1;
        g_hu[j] = r2;
    }
    return loss;
}

namespace {

// Static per-node aggregates for one type: summed sparse x1 rows of each
// node's neighbors and the list of neighbors whose x2 branch is active.
// Neighbor structure never changes during training, so these are built once.
struct TypeContext {
    std::vector<std::pair<std::uint32_t, double>> neighbor_sum;
    std::vector<std::size_t> sum_offset;  // node -> [offset, next offset)
    std::vector<std::uint32_t> missing_neighbors;
    std::vector<std::size_t> miss_offset;
};

TypeContext build_type_context(const TypeInputs& ti, const AffinityGraph& g) {
    TypeContext ctx;
    const std::size_t V = ti.rows.size();
    ctx.sum_offset.assign(V + 1, 0);
    ctx.miss_offset.assign(V + 1, 0);
    std::vector<double> dense(ti.domain_dim, 0.0);
    std::vector<std::uint32_t> touched;
    for (std::size_t v = 0; v < V; ++v) {
        touched.clear();
        for (std::size_t u : g.adjacency[v]) {
            for (auto [col, val] : ti.rows[u].entries) {
                if (dense[col] == 0.0) touched.push_back(col);
                dense[col] += val;
            }
            if (ti.rows[u].missing) ctx.missing_neighbors.push_back(static_cast<std::uint32_t>(u));
        }
        std::sort(touched.begin(), touched.end());
        for (std::uint32_t col : touched) {
            if (dense[col] != 0.0) ctx.neighbor_sum.emplace_back(col, dense[col]);
            dense[col] = 0.0;
        }
        ctx.sum_offset[v + 1] = ctx.neighbor_sum.size();
        ctx.miss_offset[v + 1] = ctx.missing_neighbors.size();
    }
    return ctx;
}

struct FlatLayout {
    std::vector<std::size_t> w1_off;
    std::vector<std::size_t> w2_off;
    std::size_t total = 0;
};

FlatLayout make_layout(const EncoderParams& p) {
    FlatLayout lay;
    std::size_t off = 0;
    for (const auto& tp : p.types) {
        lay.w1_off.push_back(off);
        off += tp.W1.size();
        lay.w2_off.push_back(off);
        off += tp.W2.size();
    }
    lay.total = off;
    return lay;
}

void flatten(const EncoderParams& p, std::vector<double>& theta) {
    std::size_t off = 0;
    for (const auto& tp : p.types) {
        std::copy(tp.W1.begin(), tp.W1.end(), theta.begin() + static_cast<long>(off));
        off += tp.W1.size();
        std::copy(tp.W2.begin(), tp.W2.end(), theta.begin() + static_cast<long>(off));
        off += tp.W2.size();
    }
}

void unflatten(const std::vector<double>& theta, EncoderParams& p) {
    std::size_t off = 0;
    for (auto& tp : p.types) {
        std::copy(theta.begin() + static_cast<long>(off),
                  theta.begin() + static_cast<long>(off + tp.W1.size()), tp.W1.begin());
        off += tp.W1.size();
        std::copy(theta.begin() + static_cast<long>(off),
                  theta.begin() + static_cast<long>(off + tp.W2.size()), tp.W2.begin());
        off += tp.W2.size();
    }
}

struct PairScratch {
    std::vector<double> ht, hv, hu, g_ht, g_hv, g_hu;
    std::vector<std::pair<std::uint32_t, double>> agg;

    explicit PairScratch(std::size_t d)
        : ht(d), hv(d), hu(d), g_ht(d), g_hv(d), g_hu(d) {}
};

void encode_flat(const double* W1, const double* W2,
                 const std::vector<std::pair<std::uint32_t, double>>& entries, bool missing,
                 std::size_t node, std::size_t d, double* out) {
    std::fill(out, out + d, 0.0);
    for (auto [col, val] : entries) {
        const double* w = W1 + static_cast<std::size_t>(col) * d;
        for (std::size_t j = 0; j < d; ++j) out[j] += val * w[j];
    }
    if (missing) {
        const double* w = W2 + node * d;
        for (std::size_t j = 0; j < d; ++j) out[j] += w[j];
    }
}

void backprop_flat(double* G1, double* G2,
                   const std::vector<std::pair<std::uint32_t, double>>& entries, bool missing,
                   std::size_t node, std::size_t d, const double* gh, double scale) {
    for (auto [col, val] : entries) {
        double* gw = G1 + static_cast<std::size_t>(col) * d;
        double f = val * scale;
        for (std::size_t j = 0; j < d; ++j) gw[j] += f * gh[j];
    }
    if (missing) {
        double* gw = G2 + node * d;
        for (std::size_t j = 0; j < d; ++j) gw[j] += scale * gh[j];
    }
}

// Loss of the (v, u) contrastive pair summed over types; accumulates
// parameter gradients into grad (flat layout). This is the exact gradient
// path the trainer uses.
double pair_loss_grad(const EncoderInputs& in, const AffinityGraph& g,
                      const std::vector<TypeContext>& ctx, const FlatLayout& lay,
                      const std::vector<double>& theta, std::size_t d, std::size_t v,
                      std::size_t u, double gamma, double distance_epsilon,
                      std::vector<double>* grad, PairScratch& s) {
    const double inv_deg = 1.0 / static_cast<double>(g.adjacency[v].size());
    double total = 0.0;
    for (std::size_t t = 0; t < in.types.size(); ++t) {
        const TypeInputs& ti = in.types[t];
        const TypeContext& tc = ctx[t];
        const double* W1 = &theta[lay.w1_off[t]];
        const double* W2 = &theta[lay.w2_off[t]];
        s.agg.assign(tc.neighbor_sum.begin() + static_cast<long>(tc.sum_offset[v]),
                     tc.neighbor_sum.begin() + static_cast<long>(tc.sum_offset[v + 1]));
        encode_flat(W1, W2, s.agg, false, 0, d, s.ht.data());
        for (std::size_t k = tc.miss_offset[v]; k < tc.miss_offset[v + 1]; ++k) {
            const double* w = W2 + static_cast<std::size_t>(tc.missing_neighbors[k]) * d;
            for (std::size_t j = 0; j < d; ++j) s.ht[j] += w[j];
        }
        for (std::size_t j = 0; j < d; ++j) s.ht[j] *= inv_deg;
        encode_flat(W1, W2, ti.rows[v].entries, ti.rows[v].missing, v, d, s.hv.data());
        encode_flat(W1, W2, ti.rows[u].entries, ti.rows[u].missing, u, d, s.hu.data());
        double loss = margin_loss_grad(s.ht, s.hv, s.hu, gamma, distance_epsilon, s.g_ht, s.g_hv,
                                       s.g_hu);
        total += loss;
        if (loss <= 0.0 || grad == nullptr) continue;
        double* G1 = &(*grad)[lay.w1_off[t]];
        double* G2 = &(*grad)[lay.w2_off[t]];
        backprop_flat(G1, G2, ti.rows[v].entries, ti.rows[v].missing, v, d, s.g_hv.data(), 1.0);
        backprop_flat(G1, G2, ti.rows[u].entries, ti.rows[u].missing, u, d, s.g_hu.data(), 1.0);
        backprop_flat(G1, G2, s.agg, false, 0, d, s.g_ht.data(), inv_deg);
        for (std::size_t k = tc.miss_offset[v]; k < tc.miss_offset[v + 1]; ++k) {
            double* gw = G2 + static_cast<std::size_t>(tc.missing_neighbors[k]) * d;
            for (std::size_t j = 0; j < d; ++j) gw[j] += inv_deg * s.g_ht[j];
        }
    }
    return total;
}

void check_inputs(const EncoderInputs& in, const AffinityGraph& g) {
    const std::size_t V = in.episode_ids.size();
    if (g.num_nodes() != V) throw DimensionMismatch("graph/input node count mismatch");
    for (const auto& ti : in.types)
        if (ti.rows.size() != V)
            throw DimensionMismatch("type " + ti.type_id + ": row count mismatch");
}

}  // namespace

double node_loss(const EncoderInputs& in, const AffinityGraph& g, const EncoderParams& p,
                 std::size_t v, std::size_t u, double gamma, double distance_epsilon) {
    (void)distance_epsilon;
    double total = 0.0;
    for (const auto& ti : in.types) {
        const TypeParams* tp = p.find(ti.type_id);
        if (!tp) throw UnknownAttribute("no params for type " + ti.type_id);
        auto ht = reconstruct(v, ti, g, *tp);
        auto hv = encode_row(ti.rows[v], v, *tp);
        auto hu = encode_row(ti.rows[u], u, *tp);
        total += margin_loss(ht, hv, hu, gamma);
    }
    return total;
}

EncoderParams node_loss_grad(const EncoderInputs& in, const AffinityGraph& g,
                             const EncoderParams& p, std::size_t v, std::size_t u, double gamma,
                             double distance_epsilon) {
    check_inputs(in, g);
    if (g.adjacency[v].empty())
        throw NoNeighbors("node " + g.node_ids[v] + " has no neighbors");
    std::vector<TypeContext> ctx;
    ctx.reserve(in.types.size());
    for (const auto& ti : in.types) ctx.push_back(build_type_context(ti, g));
    FlatLayout lay = make_layout(p);
    std::vector<double> theta(lay.total);
    flatten(p, theta);
    std::vector<double> grad(lay.total, 0.0);
    PairScratch scratch(p.d);
    pair_loss_grad(in, g, ctx, lay, theta, p.d, v, u, gamma, distance_epsilon, &grad, scratch);
    EncoderParams out = p;
    unflatten(grad, out);
    return out;
}

EncoderParams init_params(const EncoderInputs& in, std::size_t dim, std::size_t num_nodes,
                          double init_scale, rng::Engine& eng) {
    if (dim == 0) throw InvalidConfig("embedding dim must be positive");
    EncoderParams p;
    p.d = dim;
    p.num_nodes = num_nodes;
    for (const auto& ti : in.types) {
        TypeParams tp;
        tp.type_id = ti.type_id;
        tp.domain_dim = ti.domain_dim;
        tp.d = dim;
        tp.W1.resize(ti.domain_dim * dim);
        if (ti.domain_dim > 0) {
            double scale = init_scale / std::sqrt(static_cast<double>(ti.domain_dim));
            for (auto& w : tp.W1) w = rng::uniform(eng, -scale, scale);
        }
        tp.W2.resize(num_nodes * dim);
        double scale2 = init_scale / std::sqrt(static_cast<double>(dim));
        for (auto& w : tp.W2) w = rng::uniform(eng, -scale2, scale2);
        // The lookup branch must be able to tell observed zeros from missing
        // values; an all-zero table would collapse the two.
        double mx = 0.0;
        for (double w : tp.W2) mx = std::max(mx, std::fabs(w));
        if (num_nodes > 0 && init_scale > 0.0 && mx == 0.0)
            throw ExecutionError("degenerate W2 initialization for type " + tp.type_id);
        p.types.push_back(std::move(tp));
    }
    return p;
}

void adam_step(std::vector<double>& theta, const std::vector<double>& grad, AdamState& state,
               double lr, double beta1, double beta2, double eps) {
    if (theta.size() != grad.size()) throw DimensionMismatch("adam_step: size mismatch");
    if (state.m.empty()) {
        state.m.assign(theta.size(), 0.0);
        state.v.assign(theta.size(), 0.0);
    }
    ++state.t;
    double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
    double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
        double mhat = state.m[i] / bc1;
        double vhat = state.v[i] / bc2;
        theta[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

TrainResult train_encoders(const EncoderInputs& in, const AffinityGraph& graph,
                           const TrainConfig& config) {
    const std::size_t V = in.episode_ids.size();
    if (V == 0) throw EmptyGraph("train: no nodes");
    check_inputs(in, graph);
    if (config.batch_size == 0) throw InvalidConfig("batch_size must be >= 1");
    if (config.margin <= 0.0) throw InvalidConfig("margin must be positive");
    const AffinityGraph g = config.self_loops ? with_self_loops(graph) : graph;

    rng::Engine eng(config.seed);
    TrainResult result;
    result.params = init_params(in, config.dim, V, config.init_scale, eng);
    result.isolated_nodes = g.num_isolated();

    const std::size_t d = config.dim;
    std::vector<TypeContext> ctx;
    ctx.reserve(in.types.size());
    for (const auto& ti : in.types) ctx.push_back(build_type_context(ti, g));

    FlatLayout lay = make_layout(result.params);
    std::vector<double> theta(lay.total);
    flatten(result.params, theta);
    std::vector<double> grad(lay.total, 0.0);
    AdamState adam;
    PairScratch scratch(d);

    std::vector<std::size_t> order(V);
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 0; epoch < config.iterations; ++epoch) {
        rng::shuffle(order, eng);
        double epoch_loss = 0.0;
        std::size_t epoch_active = 0;
        for (std::size_t start = 0; start < V; start += config.batch_size) {
            std::size_t stop = std::min(V, start + config.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            std::size_t contributing = 0;
            for (std::size_t b = start; b < stop; ++b) {
                std::size_t v = order[b];
                ++result.total_terms;
                if (g.adjacency[v].empty() || V < 2) {
                    ++result.skipped_terms;
                    continue;
                }
                std::size_t u = v;
                while (u == v) u = rng::below(eng, V);
                epoch_loss += pair_loss_grad(in, g, ctx, lay, theta, d, v, u, config.margin,
                                             config.distance_epsilon, &grad, scratch);
                ++contributing;
                ++epoch_active;
            }
            if (contributing > 0) {
                double inv = 1.0 / static_cast<double>(contributing);
                for (auto& x : grad) x *= inv;
            }
            adam_step(theta, grad, adam, config.learning_rate, config.beta1, config.beta2,
                      config.adam_epsilon);
        }
        result.epoch_mean_loss.push_back(
            epoch_active > 0 ? epoch_loss / static_cast<double>(epoch_active) : 0.0);
    }

    unflatten(theta, result.params);
    result.skipped_fraction =
        result.total_terms > 0
            ? static_cast<double>(result.skipped_terms) / static_cast<double>(result.total_terms)
            : 0.0;
    if (result.skipped_terms > 0)
        std::cerr << "warning: skipped " << result.skipped_terms << "/" << result.total_terms
                  << " contrastive terms (" << result.isolated_nodes << " isolated nodes)\n";
    return result;
}

std::vector<std::vector<double>> encode_all(const TypeInputs& ti, const TypeParams& tp) {
    std::vector<std::vector<double>> out;
    out.reserve(ti.rows.size());
    for (std::size_t v = 0; v < ti.rows.size(); ++v) out.push_back(encode_row(ti.rows[v], v, tp));
    return out;
}

namespace {

template <typename T>
void write_pod(std::ofstream& out, const T& x) {
    out.write(reinterpret_cast<const char*>(&x), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& x) {
    in.read(reinterpret_cast<char*>(&x), sizeof(T));
    if (!in) throw MalformedRecord("params file truncated");
}

}  // namespace

void save_params(const EncoderParams& p, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out.write("EPMD", 4);
    write_pod(out, std::uint32_t{1});
    write_pod(out, std::uint64_t{p.d});
    write_pod(out, std::uint64_t{p.num_nodes});
    write_pod(out, static_cast<std::uint32_t>(p.types.size()));
    for (const auto& tp : p.types) {
        write_pod(out, static_cast<std::uint32_t>(tp.type_id.size()));
        out.write(tp.type_id.data(), static_cast<long>(tp.type_id.size()));
        write_pod(out, std::uint64_t{tp.domain_dim});
        write_pod(out, std::uint64_t{tp.d});
        out.write(reinterpret_cast<const char*>(tp.W1.data()),
                  static_cast<long>(tp.W1.size() * sizeof(double)));
        write_pod(out, static_cast<std::uint64_t>(
                           tp.d > 0 ? tp.W2.size() / tp.d : 0));
        out.write(reinterpret_cast<const char*>(tp.W2.data()),
                  static_cast<long>(tp.W2.size() * sizeof(double)));
    }
}

EncoderParams load_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open params file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "EPMD", 4) != 0) throw MalformedRecord("params file: bad magic");
    std::uint32_t version = 0;
    read_pod(in, version);
    if (version != 1) throw MalformedRecord("params file: unsupported version");
    EncoderParams p;
    std::uint64_t d = 0, nodes = 0;
    std::uint32_t ntypes = 0;
    read_pod(in, d);
    read_pod(in, nodes);
    read_pod(in, ntypes);
    p.d = d;
    p.num_nodes = nodes;
    for (std::uint32_t i = 0; i < ntypes; ++i) {
        TypeParams tp;
        std::uint32_t len = 0;
        read_pod(in, len);
        tp.type_id.resize(len);
        in.read(tp.type_id.data(), len);
        std::uint64_t dd = 0, td = 0, V = 0;
        read_pod(in, dd);
        read_pod(in, td);
        tp.domain_dim = dd;
        tp.d = td;
        tp.W1.resize(dd * td);
        in.read(reinterpret_cast<char*>(tp.W1.data()),
                static_cast<long>(tp.W1.size() * sizeof(double)));
        read_pod(in, V);
        tp.W2.resize(V * td);
        in.read(reinterpret_cast<char*>(tp.W2.data()),
                static_cast<long>(tp.W2.size() * sizeof(double)));
        if (!in) throw MalformedRecord("params file truncated");
        p.types.push_back(std::move(tp));
    }
    return p;
}

void save_embeddings_csv(const std::vector<std::string>& ids,
                         const std::vector<std::vector<double>>& rows, const std::string& path) {
    if (ids.size() != rows.size()) throw DimensionMismatch("embeddings: ids/rows mismatch");
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    std::size_t d = rows.empty() ? 0 : rows[0].size();
    out << "episode_id";
    for (std::size_t j = 0; j < d; ++j) out << ",e" << j;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i];
        for (double x : rows[i]) {
            std::snprintf(buf, sizeof(buf), ",%.17g", x);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace epmd
