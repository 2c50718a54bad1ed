#pragma once

#include <vector>

#include "wsi/types.hpp"

namespace wsi::egograph {

struct RelevantBases {
    std::vector<int> nodes;  // basis indexes with w_q[b] > threshold, ascending
    double threshold;        // T = 1% of the mean non-zero entry of w_q
};

// Throws NoSensesError when the query row is all zero.
RelevantBases relevant_bases(const Matrix& word_vecs, WordId query);

// The n words with the largest value in basis column `basis`, descending,
// ties broken by word id.
std::vector<WordId> top_words(const Matrix& word_vecs, int basis, int n);

// Ranked per-basis word lists shared across queries.
struct TopWordsCache {
    int capacity = 0;
    std::vector<std::vector<WordId>> ranked;  // per basis, length min(capacity, vocab)

    static TopWordsCache build(const Matrix& word_vecs, int capacity, int threads = 1);
};

struct FeatureConfig {
    int top_n = 100;
    // The query's own row is left out of the per-basis word lists so that
    // rescaling the query row rescales every feature uniformly.
    bool include_query = false;
};

// Concatenation over all bases j of [w[b_i] * w_q[b_j] for w in B_j(n)];
// blocks are aligned across different b_i for the same query.
Vector basis_feature(const Matrix& word_vecs, const TopWordsCache& cache, int basis, WordId query,
                     const FeatureConfig& cfg);

// cos(f_i, f_j) * log(min(w_q[b_i], w_q[b_j]) / T); zero when either feature
// vector is all zero.
double basis_similarity(const Matrix& word_vecs, const TopWordsCache& cache, int basis_i,
                        int basis_j, WordId query, const FeatureConfig& cfg);

struct EgoNetwork {
    WordId query;
    double threshold;
    std::vector<int> nodes;
    Matrix adjacency;  // symmetric, non-negative, zero diagonal
};

// Complete weighted graph over the query's relevant bases.
EgoNetwork build_ego_network(const Matrix& word_vecs, const TopWordsCache& cache, WordId query,
                             const FeatureConfig& cfg);

}  // namespace wsi::egograph
