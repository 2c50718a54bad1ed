#include "wsi/sgns.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "wsi/rng.hpp"

namespace wsi::sgns {

void SgnsConfig::validate() const {
    if (dims < 1) throw ContractError("sgns: dims must be >= 1");
    if (window < 1) throw ContractError("sgns: window must be >= 1");
    if (negatives < 1) throw ContractError("sgns: negatives must be >= 1");
    if (neg_exponent < 0.0 || neg_exponent > 1.0)
        throw ContractError("sgns: neg_exponent must be in [0, 1]");
    if (epochs < 0) throw ContractError("sgns: epochs must be >= 0");
    if (lr_start <= 0.0 || lr_end <= 0.0) throw ContractError("sgns: learning rates must be > 0");
}

dive::PairGradient pair_gradient(const Vector& word_row, const Vector& ctx_row, bool is_positive) {
    return dive::dive_gradient(word_row, ctx_row, is_positive, 1.0);
}

namespace {

void check_finite(const DenseEmbedding& emb, int epoch) {
    if (!emb.word_vecs.allFinite() || !emb.ctx_vecs.allFinite()) {
        throw TrainingError(epoch, "sgns parameters diverged (non-finite values)");
    }
}

}  // namespace

namespace {

DenseEmbedding train_sgns_impl(const corpus::TokenStream& tokens,
                               const std::vector<int64_t>& freqs, const SgnsConfig& cfg,
                               const DenseEmbedding* warm, const std::vector<WordId>* warm_rows);

}  // namespace

DenseEmbedding train_sgns(const corpus::TokenStream& tokens, const std::vector<int64_t>& freqs,
                          const SgnsConfig& cfg) {
    return train_sgns_impl(tokens, freqs, cfg, nullptr, nullptr);
}

DenseEmbedding train_sgns_warm(const corpus::TokenStream& tokens,
                               const std::vector<int64_t>& freqs, const SgnsConfig& cfg,
                               const DenseEmbedding& warm, const std::vector<WordId>& warm_rows) {
    if (warm_rows.size() != freqs.size()) {
        throw ContractError("train_sgns_warm: warm_rows must match the vocabulary");
    }
    return train_sgns_impl(tokens, freqs, cfg, &warm, &warm_rows);
}

namespace {

DenseEmbedding train_sgns_impl(const corpus::TokenStream& tokens,
                               const std::vector<int64_t>& freqs, const SgnsConfig& cfg,
                               const DenseEmbedding* warm, const std::vector<WordId>* warm_rows) {
    cfg.validate();
    if (tokens.ids.empty()) {
        throw ContractError("train_sgns: empty token stream");
    }
    const auto vocab = static_cast<Eigen::Index>(freqs.size());
    if (vocab == 0) {
        throw ContractError("train_sgns: empty vocabulary");
    }
    const int dims = cfg.dims;

    DenseEmbedding emb;
    emb.word_vecs.resize(vocab, dims);
    emb.ctx_vecs.setZero(vocab, dims);
    {
        // word2vec-style init: word vectors small uniform, context vectors zero.
        Rng rng(cfg.seed);
        double hi = 0.5 / static_cast<double>(dims);
        for (Eigen::Index i = 0; i < vocab; ++i)
            for (int d = 0; d < dims; ++d) emb.word_vecs(i, d) = rng.uniform(-hi, hi);
    }
    if (warm != nullptr) {
        if (warm->dims() != dims) {
            throw ContractError("train_sgns_warm: dimension mismatch");
        }
        for (Eigen::Index i = 0; i < vocab; ++i) {
            WordId r = (*warm_rows)[static_cast<size_t>(i)];
            if (r == kNoWord) continue;
            emb.word_vecs.row(i) = warm->word_vecs.row(r);
            emb.ctx_vecs.row(i) = warm->ctx_vecs.row(r);
        }
    }
    if (cfg.epochs == 0) return emb;

    std::vector<double> weights(freqs.size());
    for (size_t i = 0; i < freqs.size(); ++i) weights[i] = static_cast<double>(freqs[i]);
    AliasTable neg_alias(dive::negative_distribution(weights, cfg.neg_exponent));

    const size_t n = tokens.ids.size();
    const int threads = std::max(1, cfg.threads);
    double* W = emb.word_vecs.data();
    double* C = emb.ctx_vecs.data();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
#pragma omp parallel num_threads(threads)
        {
            int tid = omp_get_thread_num();
            int nt = omp_get_num_threads();
            size_t chunk = (n + static_cast<size_t>(nt) - 1) / static_cast<size_t>(nt);
            size_t lo = static_cast<size_t>(tid) * chunk;
            size_t hi = std::min(n, lo + chunk);
            Rng rng(cfg.seed + 0x9E3779B97F4A7C15ull * (static_cast<uint64_t>(epoch) * nt + tid + 1));
            std::vector<double> grad_w(dims);

            for (size_t d_idx = 0; d_idx < tokens.docs(); ++d_idx) {
                auto [dlo, dhi] = tokens.doc_range(d_idx);
                size_t a = std::max(lo, dlo);
                size_t b = std::min(hi, dhi);
                for (size_t i = a; i < b; ++i) {
                    WordId w = tokens.ids[i];
                    if (w == kNoWord) continue;
                    double progress =
                        (static_cast<double>(epoch) +
                         static_cast<double>(i - lo) / static_cast<double>(hi - lo)) /
                        static_cast<double>(cfg.epochs);
                    double lr = cfg.lr_start + (cfg.lr_end - cfg.lr_start) * progress;
                    size_t reduced = 1 + rng.index(static_cast<size_t>(cfg.window));
                    size_t left = i - dlo >= reduced ? i - reduced : dlo;
                    size_t right = std::min(dhi, i + reduced + 1);
                    double* wrow = W + static_cast<size_t>(w) * dims;
                    for (size_t j = left; j < right; ++j) {
                        if (j == i) continue;
                        WordId c = tokens.ids[j];
                        if (c == kNoWord) continue;
                        double* crow = C + static_cast<size_t>(c) * dims;
                        double dot = 0.0;
                        for (int d = 0; d < dims; ++d) dot += wrow[d] * crow[d];
                        double g = sigmoid(-dot);
                        for (int d = 0; d < dims; ++d) {
                            grad_w[d] = g * crow[d];
                            crow[d] += lr * g * wrow[d];
                        }
                        for (int s = 0; s < cfg.negatives; ++s) {
                            size_t v = neg_alias.sample(rng);
                            if (static_cast<WordId>(v) == c) continue;
                            double* vrow = C + v * dims;
                            double dotn = 0.0;
                            for (int d = 0; d < dims; ++d) dotn += wrow[d] * vrow[d];
                            double gn = -sigmoid(dotn);
                            for (int d = 0; d < dims; ++d) {
                                grad_w[d] += gn * vrow[d];
                                vrow[d] += lr * gn * wrow[d];
                            }
                        }
                        for (int d = 0; d < dims; ++d) wrow[d] += lr * grad_w[d];
                    }
                }
            }
        }
        check_finite(emb, epoch);
    }
    return emb;
}

}  // namespace

Vector context_embedding(const std::vector<WordId>& sentence_tokens, const DenseEmbedding& emb) {
    Vector sum = Vector::Zero(emb.dims());
    size_t used = 0;
    for (WordId id : sentence_tokens) {
        if (id == kNoWord || id < 0 || id >= emb.vocab()) continue;
        sum += emb.word_vecs.row(id).transpose();
        ++used;
    }
    if (used == 0) {
        throw EmptyContextError("context_embedding: no in-vocabulary token in the sentence");
    }
    return sum / static_cast<double>(used);
}

}  // namespace wsi::sgns
