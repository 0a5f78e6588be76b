#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "epmd/dataset.hpp"

namespace epmd {

// Admission-text document used for graph construction: the concatenated
// admission type, admission location and diagnosis fields, lowercased and
// whitespace-split.
struct AdmissionDocument {
    std::string episode_id;
    std::vector<std::string> tokens;
};

std::vector<std::string> tokenize_lower(const std::string& text);
std::vector<AdmissionDocument> admission_documents(const Dataset& ds);

struct WordVectors {
    std::size_t dim = 0;
    std::vector<std::string> tokens;
    std::vector<std::vector<double>> vectors;
    std::map<std::string, std::size_t> index;

    const std::vector<double>* find(const std::string& token) const;
};

struct SkipgramConfig {
    std::size_t dim = 50;
    std::size_t window = 5;
    std::size_t negatives = 5;
    std::size_t epochs = 5;
    std::size_t min_count = 1;
    double learning_rate = 0.025;  // linearly decayed
    std::uint64_t seed = 1;
};

// Skipgram with negative sampling (unigram^0.75 noise distribution),
// deterministic per seed, sequential updates.
WordVectors train_skipgram(const std::vector<AdmissionDocument>& documents,
                           const SkipgramConfig& config);

// Mean of the L2-normalized vectors of in-vocabulary tokens; zero vector for
// documents with no known tokens.
std::vector<double> sentence_vector(const AdmissionDocument& doc, const WordVectors& wv);

// Text format: first line "N d", then "token v1 ... v_d".
void save_word_vectors(const WordVectors& wv, const std::string& path);
WordVectors load_word_vectors(const std::string& path);

}  // namespace epmd
