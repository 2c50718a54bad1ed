#pragma once

#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/types.hpp"

namespace wsi::dive {

// Non-negative word/context matrices; each column (basis index) acts as a
// topic.
struct DiveEmbedding {
    Matrix word_vecs;
    Matrix ctx_vecs;

    Eigen::Index dims() const { return word_vecs.cols(); }
    Eigen::Index vocab() const { return word_vecs.rows(); }
};

struct DiveTrainConfig {
    int dims = 100;
    double k_i = 1.0;           // negative-term constant
    int epochs = 10;
    double lr_start = 0.025;
    double lr_end = 1e-4;
    int negatives = 5;          // samples approximating the expectation per positive
    double neg_exponent = 0.75; // unigram distortion of the negative distribution
    uint64_t seed = 1;
    int threads = 1;            // 1 = deterministic single-worker mode
    // Pair draws per epoch; 0 means one draw per unit of co-occurrence mass.
    uint64_t pairs_per_epoch = 0;
    double init_scale = 0.1;    // init uniform in [0, init_scale / dims]
    // Evaluate the exact objective after every epoch (small corpora only).
    bool track_objective = false;

    void validate() const;
};

struct TrainTrace {
    std::vector<double> objective;  // one entry per epoch when track_objective is set
};

// Projected stochastic ascent on the DIVE objective: pairs are drawn
// proportionally to #(w,c), every row update is followed by clamping negative
// components to zero. Throws TrainingError with the epoch index when the
// parameters stop being finite.
DiveEmbedding train_dive(const corpus::CooccurrenceTable& cooc, const DiveTrainConfig& cfg,
                         TrainTrace* trace = nullptr);

// Exact objective value; the expectation over the negative distribution is the
// full sum over the vocabulary.
double dive_objective(const DiveEmbedding& emb, const corpus::CooccurrenceTable& cooc,
                      const DiveTrainConfig& cfg);

struct PairGradient {
    Vector wrt_word;
    Vector wrt_ctx;
};

// Gradient of weight * log(sigmoid(+-w.c)) with respect to both rows.
PairGradient dive_gradient(const Vector& w_row, const Vector& c_row, bool is_positive,
                           double weight);

// Normalized negative-sampling distribution: weights[i]^exponent / sum.
std::vector<double> negative_distribution(const std::vector<double>& weights, double exponent);

}  // namespace wsi::dive
