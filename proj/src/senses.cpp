#include "wsi/senses.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <iostream>

namespace wsi::senses {

TopicEmbedding topic_embedding(const Matrix& dive_words, const egograph::TopWordsCache& cache,
                               const sgns::DenseEmbedding& dense,
                               const std::vector<WordId>& to_dense, int basis, int m) {
    if (basis < 0 || basis >= dive_words.cols()) {
        throw ContractError("topic_embedding: basis index out of range");
    }
    const auto& ranked = cache.ranked[static_cast<size_t>(basis)];
    size_t take = std::min<size_t>(static_cast<size_t>(m), ranked.size());

    std::vector<WordId> dense_rows;
    std::vector<double> values;
    double sum = 0.0;
    for (size_t i = 0; i < take; ++i) {
        WordId w = ranked[i];
        WordId row = to_dense[static_cast<size_t>(w)];
        if (row == kNoWord) continue;
        dense_rows.push_back(row);
        values.push_back(dive_words(w, basis));
        sum += values.back();
    }
    if (dense_rows.empty() || sum <= 0.0) {
        throw ContractError("topic_embedding: basis column has no usable mass");
    }
    double mean = sum / static_cast<double>(values.size());

    TopicEmbedding topic;
    topic.basis = basis;
    topic.vec = Vector::Zero(dense.dims());
    double weight_sum = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        double weight = std::exp(values[i] / mean);
        topic.vec += weight * dense.word_vecs.row(dense_rows[i]).transpose();
        weight_sum += weight;
    }
    topic.vec /= weight_sum;
    return topic;
}

std::vector<TopicEmbedding> all_topic_embeddings(const Matrix& dive_words,
                                                 const egograph::TopWordsCache& cache,
                                                 const sgns::DenseEmbedding& dense,
                                                 const std::vector<WordId>& to_dense, int m,
                                                 int threads) {
    std::vector<TopicEmbedding> topics(static_cast<size_t>(dive_words.cols()));
#pragma omp parallel for num_threads(std::max(1, threads)) schedule(dynamic)
    for (Eigen::Index b = 0; b < dive_words.cols(); ++b) {
        topics[static_cast<size_t>(b)] =
            topic_embedding(dive_words, cache, dense, to_dense, static_cast<int>(b), m);
    }
    return topics;
}

SenseModel sense_embeddings(const Matrix& dive_words, const std::vector<Vector>& topic_vecs,
                            const speccluster::ClusterAssignment& assignment,
                            const egograph::EgoNetwork& net, const std::string& word) {
    if (assignment.labels.size() != net.nodes.size()) {
        throw ContractError("sense_embeddings: assignment does not match the ego network");
    }
    for (int b : net.nodes) {
        if (static_cast<size_t>(b) >= topic_vecs.size() || topic_vecs[static_cast<size_t>(b)].size() == 0) {
            throw ContractError("sense_embeddings: missing topic embedding for basis " +
                                std::to_string(b));
        }
    }
    // Normalize the query row to mean 1 over the ego nodes.
    double sum = 0.0;
    for (int b : net.nodes) sum += dive_words(net.query, b);
    if (sum <= 0.0) {
        throw ContractError("sense_embeddings: ego nodes carry no relevance mass");
    }
    double mean = sum / static_cast<double>(net.nodes.size());

    SenseModel model;
    model.word = word;
    const Eigen::Index dims =
        net.nodes.empty() ? 0 : topic_vecs[static_cast<size_t>(net.nodes.front())].size();
    int k = assignment.used_clusters();
    for (int c = 0; c < k; ++c) {
        SenseCluster cluster;
        Vector vec = Vector::Zero(dims);
        double weight_sum = 0.0;
        for (size_t i = 0; i < net.nodes.size(); ++i) {
            if (assignment.labels[i] != c) continue;
            int b = net.nodes[i];
            double relevance = dive_words(net.query, b);
            double weight = std::exp(relevance / mean);
            cluster.bases.push_back(b);
            cluster.relevance.push_back(relevance);
            vec += weight * topic_vecs[static_cast<size_t>(b)];
            weight_sum += weight;
        }
        if (cluster.bases.empty()) {
            std::cerr << "[senses] dropping empty cluster " << c << " for '" << word << "'\n";
            continue;
        }
        model.clusters.push_back(std::move(cluster));
        model.sense_vecs.push_back(vec / weight_sum);
        model.stale.push_back(false);
    }
    model.provenance = SenseModel::Provenance::initial;
    return model;
}

std::vector<std::vector<std::string>> sense_inventory(const SenseModel& model,
                                                      const Matrix& dive_words,
                                                      const corpus::Vocabulary& vocab,
                                                      int top_k) {
    // Weights mirror the sense-embedding combination: exp of relevance
    // normalized to mean 1 over all ego nodes of the model.
    double sum = 0.0;
    size_t nodes = 0;
    for (const auto& c : model.clusters) {
        for (double r : c.relevance) {
            sum += r;
            ++nodes;
        }
    }
    double mean = nodes > 0 ? sum / static_cast<double>(nodes) : 1.0;

    std::vector<std::vector<std::string>> out;
    for (const auto& cluster : model.clusters) {
        std::vector<std::pair<double, WordId>> scored(static_cast<size_t>(dive_words.rows()));
        for (Eigen::Index w = 0; w < dive_words.rows(); ++w) {
            double score = 0.0;
            for (size_t i = 0; i < cluster.bases.size(); ++i) {
                score += std::exp(cluster.relevance[i] / mean) * dive_words(w, cluster.bases[i]);
            }
            scored[static_cast<size_t>(w)] = {score, static_cast<WordId>(w)};
        }
        size_t keep = std::min<size_t>(static_cast<size_t>(top_k), scored.size());
        std::partial_sort(scored.begin(), scored.begin() + static_cast<ptrdiff_t>(keep),
                          scored.end(), [](const auto& a, const auto& b) {
                              if (a.first != b.first) return a.first > b.first;
                              return a.second < b.second;
                          });
        std::vector<std::string> words;
        for (size_t i = 0; i < keep; ++i) {
            words.push_back(vocab.words[static_cast<size_t>(scored[i].second)]);
        }
        out.push_back(std::move(words));
    }
    return out;
}

}  // namespace wsi::senses
