#include "wsi/egograph.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace wsi::egograph {

RelevantBases relevant_bases(const Matrix& word_vecs, WordId query) {
    if (query < 0 || query >= word_vecs.rows()) {
        throw ContractError("relevant_bases: query id out of range");
    }
    double sum = 0.0;
    int nonzero = 0;
    for (Eigen::Index b = 0; b < word_vecs.cols(); ++b) {
        double v = word_vecs(query, b);
        if (v > 0.0) {
            sum += v;
            ++nonzero;
        }
    }
    if (nonzero == 0) {
        throw NoSensesError("relevant_bases: query row is all zero");
    }
    RelevantBases out;
    out.threshold = 0.01 * sum / static_cast<double>(nonzero);
    for (Eigen::Index b = 0; b < word_vecs.cols(); ++b) {
        if (word_vecs(query, b) > out.threshold) {
            out.nodes.push_back(static_cast<int>(b));
        }
    }
    return out;
}

namespace {

std::vector<WordId> ranked_column(const Matrix& word_vecs, int basis, int n) {
    std::vector<WordId> ids(static_cast<size_t>(word_vecs.rows()));
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<WordId>(i);
    auto better = [&](WordId a, WordId b) {
        double va = word_vecs(a, basis);
        double vb = word_vecs(b, basis);
        if (va != vb) return va > vb;
        return a < b;
    };
    size_t keep = std::min<size_t>(static_cast<size_t>(n), ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<ptrdiff_t>(keep), ids.end(), better);
    ids.resize(keep);
    return ids;
}

}  // namespace

std::vector<WordId> top_words(const Matrix& word_vecs, int basis, int n) {
    if (basis < 0 || basis >= word_vecs.cols()) {
        throw ContractError("top_words: basis index out of range");
    }
    if (n < 1 || n > word_vecs.rows()) {
        throw ContractError("top_words: n must be in [1, vocab]");
    }
    return ranked_column(word_vecs, basis, n);
}

TopWordsCache TopWordsCache::build(const Matrix& word_vecs, int capacity, int threads) {
    TopWordsCache cache;
    cache.capacity = capacity;
    cache.ranked.resize(static_cast<size_t>(word_vecs.cols()));
#pragma omp parallel for num_threads(std::max(1, threads)) schedule(dynamic)
    for (Eigen::Index b = 0; b < word_vecs.cols(); ++b) {
        cache.ranked[static_cast<size_t>(b)] = ranked_column(word_vecs, static_cast<int>(b), capacity);
    }
    return cache;
}

namespace {

// Writes the feature for one basis into `out`; returns squared norm.
double fill_feature(const Matrix& word_vecs, const TopWordsCache& cache, int basis, WordId query,
                    const FeatureConfig& cfg, double* out) {
    const auto dims = word_vecs.cols();
    double norm2 = 0.0;
    size_t pos = 0;
    for (Eigen::Index j = 0; j < dims; ++j) {
        double q_weight = word_vecs(query, j);
        const auto& ranked = cache.ranked[static_cast<size_t>(j)];
        int taken = 0;
        for (WordId w : ranked) {
            if (taken == cfg.top_n) break;
            if (!cfg.include_query && w == query) continue;
            double value = word_vecs(w, basis) * q_weight;
            out[pos++] = value;
            norm2 += value * value;
            ++taken;
        }
        // Vocabularies smaller than top_n leave the block short; pad so blocks
        // of different bases stay aligned.
        for (; taken < cfg.top_n; ++taken) out[pos++] = 0.0;
    }
    return norm2;
}

size_t check_cache(const Matrix& word_vecs, const TopWordsCache& cache, const FeatureConfig& cfg) {
    size_t need = static_cast<size_t>(cfg.top_n) + (cfg.include_query ? 0 : 1);
    if (cache.ranked.size() != static_cast<size_t>(word_vecs.cols()) ||
        (static_cast<size_t>(cache.capacity) < need &&
         static_cast<size_t>(cache.capacity) < static_cast<size_t>(word_vecs.rows()))) {
        throw ContractError("top-words cache is too small for the requested feature size");
    }
    return need;
}

}  // namespace

Vector basis_feature(const Matrix& word_vecs, const TopWordsCache& cache, int basis, WordId query,
                     const FeatureConfig& cfg) {
    check_cache(word_vecs, cache, cfg);
    Vector f(word_vecs.cols() * cfg.top_n);
    fill_feature(word_vecs, cache, basis, query, cfg, f.data());
    return f;
}

double basis_similarity(const Matrix& word_vecs, const TopWordsCache& cache, int basis_i,
                        int basis_j, WordId query, const FeatureConfig& cfg) {
    RelevantBases rel = relevant_bases(word_vecs, query);
    auto relevant = [&](int b) {
        return std::binary_search(rel.nodes.begin(), rel.nodes.end(), b);
    };
    if (basis_i == basis_j || !relevant(basis_i) || !relevant(basis_j)) {
        throw ContractError("basis_similarity: bases must be distinct relevant bases of the query");
    }
    Vector fi = basis_feature(word_vecs, cache, basis_i, query, cfg);
    Vector fj = basis_feature(word_vecs, cache, basis_j, query, cfg);
    double ni = fi.norm();
    double nj = fj.norm();
    if (ni == 0.0 || nj == 0.0) return 0.0;
    double scale = std::log(std::min(word_vecs(query, basis_i), word_vecs(query, basis_j)) /
                            rel.threshold);
    return fi.dot(fj) / (ni * nj) * scale;
}

EgoNetwork build_ego_network(const Matrix& word_vecs, const TopWordsCache& cache, WordId query,
                             const FeatureConfig& cfg) {
    RelevantBases rel = relevant_bases(word_vecs, query);
    EgoNetwork net;
    net.query = query;
    net.threshold = rel.threshold;
    net.nodes = rel.nodes;
    const size_t n = net.nodes.size();
    net.adjacency = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (n < 2) return net;

    check_cache(word_vecs, cache, cfg);
    const size_t flen = static_cast<size_t>(word_vecs.cols()) * static_cast<size_t>(cfg.top_n);
    std::vector<double> features(n * flen);
    std::vector<double> norms(n);
    for (size_t i = 0; i < n; ++i) {
        norms[i] = std::sqrt(
            fill_feature(word_vecs, cache, net.nodes[i], query, cfg, features.data() + i * flen));
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double value = 0.0;
            if (norms[i] > 0.0 && norms[j] > 0.0) {
                const double* fi = features.data() + i * flen;
                const double* fj = features.data() + j * flen;
                double dot = 0.0;
                for (size_t k = 0; k < flen; ++k) dot += fi[k] * fj[k];
                double wi = word_vecs(query, net.nodes[i]);
                double wj = word_vecs(query, net.nodes[j]);
                value = dot / (norms[i] * norms[j]) *
                        std::log(std::min(wi, wj) / net.threshold);
            }
            net.adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
            net.adjacency(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
        }
    }
    return net;
}

}  // namespace wsi::egograph
