#include "epmd/skipgram.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "epmd/errors.hpp"
#include "epmd/rng.hpp"

namespace epmd {

std::vector<std::string> tokenize_lower(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<AdmissionDocument> admission_documents(const Dataset& ds) {
    std::vector<AdmissionDocument> docs;
    docs.reserve(ds.episodes.size());
    for (const auto& ep : ds.episodes) {
        AdmissionDocument doc;
        doc.episode_id = ep.id;
        std::string text;
        for (const auto& attr : kAdmissionAttributes) {
            auto it = ep.categoricals.find(attr);
            if (it == ep.categoricals.end()) continue;
            if (!text.empty()) text += ' ';
            text += it->second;
        }
        doc.tokens = tokenize_lower(text);
        docs.push_back(std::move(doc));
    }
    return docs;
}

const std::vector<double>* WordVectors::find(const std::string& token) const {
    auto it = index.find(token);
    if (it == index.end()) return nullptr;
    return &vectors[it->second];
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Deterministic draw from the unigram^0.75 distribution via cumulative table.
std::size_t draw_negative(const std::vector<double>& cumulative, rng::Engine& eng) {
    double u = rng::next_unit(eng) * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    if (idx >= cumulative.size()) idx = cumulative.size() - 1;
    return idx;
}

}  // namespace

WordVectors train_skipgram(const std::vector<AdmissionDocument>& documents,
                           const SkipgramConfig& config) {
    if (documents.empty()) throw EmptyCorpus("skipgram: no documents");
    if (config.dim == 0) throw InvalidConfig("skipgram: dim must be positive");

    std::map<std::string, std::size_t> counts;
    for (const auto& doc : documents)
        for (const auto& tok : doc.tokens) ++counts[tok];

    struct VocabEntry {
        std::string token;
        std::size_t count;
    };
    std::vector<VocabEntry> vocab;
    for (const auto& [tok, c] : counts)
        if (c >= config.min_count) vocab.push_back({tok, c});
    if (vocab.empty()) throw EmptyCorpus("skipgram: vocabulary empty after min_count filter");
    std::sort(vocab.begin(), vocab.end(), [](const VocabEntry& a, const VocabEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.token < b.token;
    });

    WordVectors wv;
    wv.dim = config.dim;
    wv.tokens.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        wv.tokens.push_back(vocab[i].token);
        wv.index[vocab[i].token] = i;
    }
    const std::size_t V = vocab.size();
    const std::size_t D = config.dim;

    std::vector<double> cumulative(V);
    double acc = 0.0;
    for (std::size_t i = 0; i < V; ++i) {
        acc += std::pow(static_cast<double>(vocab[i].count), 0.75);
        cumulative[i] = acc;
    }

    rng::Engine eng(config.seed);
    std::vector<double> syn0(V * D);
    std::vector<double> syn1(V * D, 0.0);
    const double half = 0.5 / static_cast<double>(D);
    for (auto& w : syn0) w = rng::uniform(eng, -half, half);

    // Encode documents as vocabulary indices once; out-of-vocabulary tokens
    // are dropped from the training stream.
    std::vector<std::vector<std::size_t>> stream;
    std::size_t total_words = 0;
    stream.reserve(documents.size());
    for (const auto& doc : documents) {
        std::vector<std::size_t> ids;
        for (const auto& tok : doc.tokens) {
            auto it = wv.index.find(tok);
            if (it != wv.index.end()) ids.push_back(it->second);
        }
        total_words += ids.size();
        stream.push_back(std::move(ids));
    }

    const double total_sched = static_cast<double>(config.epochs * total_words) + 1.0;
    std::size_t processed = 0;
    std::vector<double> grad_in(D);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (const auto& ids : stream) {
            for (std::size_t pos = 0; pos < ids.size(); ++pos) {
                ++processed;
                double alpha = config.learning_rate *
                               std::max(1e-4, 1.0 - static_cast<double>(processed) / total_sched);
                std::size_t center = ids[pos];
                std::size_t lo = pos >= config.window ? pos - config.window : 0;
                std::size_t hi = std::min(ids.size() - 1, pos + config.window);
                for (std::size_t cpos = lo; cpos <= hi; ++cpos) {
                    if (cpos == pos) continue;
                    std::size_t context = ids[cpos];
                    double* vin = &syn0[center * D];
                    std::fill(grad_in.begin(), grad_in.end(), 0.0);
                    for (std::size_t k = 0; k <= config.negatives; ++k) {
                        std::size_t target;
                        double label;
                        if (k == 0) {
                            target = context;
                            label = 1.0;
                        } else {
                            target = draw_negative(cumulative, eng);
                            if (target == context) continue;
                            label = 0.0;
                        }
                        double* vout = &syn1[target * D];
                        double dot = 0.0;
                        for (std::size_t j = 0; j < D; ++j) dot += vin[j] * vout[j];
                        double g = (label - sigmoid(dot)) * alpha;
                        for (std::size_t j = 0; j < D; ++j) {
                            grad_in[j] += g * vout[j];
                            vout[j] += g * vin[j];
                        }
                    }
                    for (std::size_t j = 0; j < D; ++j) vin[j] += grad_in[j];
                }
            }
        }
    }

    wv.vectors.assign(V, std::vector<double>(D));
    for (std::size_t i = 0; i < V; ++i)
        for (std::size_t j = 0; j < D; ++j) wv.vectors[i][j] = syn0[i * D + j];
    return wv;
}

std::vector<double> sentence_vector(const AdmissionDocument& doc, const WordVectors& wv) {
    std::vector<double> out(wv.dim, 0.0);
    std::size_t hits = 0;
    for (const auto& tok : doc.tokens) {
        const auto* vec = wv.find(tok);
        if (!vec) continue;
        double norm = 0.0;
        for (double x : *vec) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        for (std::size_t j = 0; j < wv.dim; ++j) out[j] += (*vec)[j] / norm;
        ++hits;
    }
    if (hits > 0)
        for (auto& x : out) x /= static_cast<double>(hits);
    return out;
}

void save_word_vectors(const WordVectors& wv, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << wv.tokens.size() << ' ' << wv.dim << '\n';
    char buf[64];
    for (std::size_t i = 0; i < wv.tokens.size(); ++i) {
        out << wv.tokens[i];
        for (double x : wv.vectors[i]) {
            std::snprintf(buf, sizeof(buf), " %.17g", x);
            out << buf;
        }
        out << '\n';
    }
}

WordVectors load_word_vectors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open word vectors: " + path);
    std::size_t n = 0, d = 0;
    std::string header;
    if (!std::getline(in, header)) throw MalformedRecord("word vectors: empty file " + path);
    {
        std::istringstream hs(header);
        if (!(hs >> n >> d)) throw MalformedRecord("word vectors: bad header in " + path);
    }
    WordVectors wv;
    wv.dim = d;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) throw MalformedRecord("word vectors: bad row in " + path);
        std::vector<double> vec(d);
        for (std::size_t j = 0; j < d; ++j)
            if (!(ls >> vec[j]))
                throw MalformedRecord("word vectors: expected " + std::to_string(d) +
                                      " values for token " + tok);
        if (wv.index.count(tok)) throw MalformedRecord("word vectors: duplicate token " + tok);
        wv.index[tok] = wv.tokens.size();
        wv.tokens.push_back(tok);
        wv.vectors.push_back(std::move(vec));
    }
    if (wv.tokens.size() != n)
        throw MalformedRecord("word vectors: header count mismatch in " + path);
    return wv;
}

}  // namespace epmd
