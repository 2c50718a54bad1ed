#pragma once

#include <string>
#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/egograph.hpp"
#include "wsi/sgns.hpp"
#include "wsi/speccluster.hpp"
#include "wsi/types.hpp"

namespace wsi::senses {

struct TopicEmbedding {
    int basis;
    Vector vec;
};

// Weighted average of the dense embeddings of the top m words of the basis
// column: values are normalized to mean 1 over the contributing words and
// exponentiated. `to_dense` maps a word id of the sparse model to a row of the
// dense embedding (kNoWord = missing, skipped before normalization).
TopicEmbedding topic_embedding(const Matrix& dive_words, const egograph::TopWordsCache& cache,
                               const sgns::DenseEmbedding& dense,
                               const std::vector<WordId>& to_dense, int basis, int m);

// Topic embeddings for every basis, parallel over columns.
std::vector<TopicEmbedding> all_topic_embeddings(const Matrix& dive_words,
                                                 const egograph::TopWordsCache& cache,
                                                 const sgns::DenseEmbedding& dense,
                                                 const std::vector<WordId>& to_dense, int m,
                                                 int threads = 1);

struct SenseCluster {
    std::vector<int> bases;
    std::vector<double> relevance;  // w_q[b] per basis
};

struct SenseModel {
    std::string word;
    std::vector<SenseCluster> clusters;
    std::vector<Vector> sense_vecs;
    std::vector<bool> stale;  // refined sense kept its previous vector (no mentions)
    enum class Provenance { initial, refined } provenance = Provenance::initial;
};

// Relevance-weighted average of the topic embeddings inside each cluster;
// weights are exp of the query row normalized to mean 1 over the ego nodes.
// `topic_vecs` is indexed by basis. Clusters that end up empty are dropped.
SenseModel sense_embeddings(const Matrix& dive_words, const std::vector<Vector>& topic_vecs,
                            const speccluster::ClusterAssignment& assignment,
                            const egograph::EgoNetwork& net, const std::string& word);

// Top `top_k` inventory words per sense, scored by the relevance-weighted sum
// of the word's values over the sense's bases. One word list per sense.
std::vector<std::vector<std::string>> sense_inventory(const SenseModel& model,
                                                      const Matrix& dive_words,
                                                      const corpus::Vocabulary& vocab,
                                                      int top_k = 20);

}  // namespace wsi::senses
