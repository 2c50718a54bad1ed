#pragma once

#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/dive.hpp"
#include "wsi/types.hpp"

namespace wsi::sgns {

struct DenseEmbedding {
    Matrix word_vecs;
    Matrix ctx_vecs;

    Eigen::Index dims() const { return word_vecs.cols(); }
    Eigen::Index vocab() const { return word_vecs.rows(); }
};

struct SgnsConfig {
    int dims = 300;
    int window = 5;   // effective window per center drawn uniformly from 1..window
    int negatives = 5;
    double neg_exponent = 0.75;
    int epochs = 5;
    double lr_start = 0.025;
    double lr_end = 1e-4;
    uint64_t seed = 1;
    int threads = 1;  // 1 = deterministic single-worker mode

    void validate() const;
};

// Gradient of log(sigmoid(+-u.v)) with respect to both rows; the same math the
// training loop applies in place.
dive::PairGradient pair_gradient(const Vector& word_row, const Vector& ctx_row, bool is_positive);

// Skip-gram with negative sampling over sliding windows. `freqs` is the
// corpus frequency per word id and feeds the unigram^exponent negative table.
// Out-of-vocabulary gaps in the stream occupy positions but never train.
DenseEmbedding train_sgns(const corpus::TokenStream& tokens, const std::vector<int64_t>& freqs,
                          const SgnsConfig& cfg);

// Same trainer, but word id i starts from row warm_rows[i] of `warm` instead
// of the cold init (kNoWord entries keep the cold init).
DenseEmbedding train_sgns_warm(const corpus::TokenStream& tokens,
                               const std::vector<int64_t>& freqs, const SgnsConfig& cfg,
                               const DenseEmbedding& warm, const std::vector<WordId>& warm_rows);

// Arithmetic mean of the word vectors of in-vocabulary tokens. Throws
// EmptyContextError when nothing is in vocabulary.
Vector context_embedding(const std::vector<WordId>& sentence_tokens, const DenseEmbedding& emb);

}  // namespace wsi::sgns
