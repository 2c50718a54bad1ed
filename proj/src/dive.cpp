#include "wsi/dive.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "wsi/rng.hpp"

namespace wsi::dive {

void DiveTrainConfig::validate() const {
    if (dims < 1) throw ContractError("dive: dims must be >= 1");
    if (k_i <= 0.0) throw ContractError("dive: k_i must be > 0");
    if (epochs < 0) throw ContractError("dive: epochs must be >= 0");
    if (lr_start <= 0.0 || lr_end <= 0.0) throw ContractError("dive: learning rates must be > 0");
    if (negatives < 1) throw ContractError("dive: negatives must be >= 1");
    if (neg_exponent < 0.0 || neg_exponent > 1.0)
        throw ContractError("dive: neg_exponent must be in [0, 1]");
    if (init_scale <= 0.0) throw ContractError("dive: init_scale must be > 0");
}

std::vector<double> negative_distribution(const std::vector<double>& weights, double exponent) {
    std::vector<double> pd(weights.size());
    double total = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        pd[i] = weights[i] > 0.0 ? std::pow(weights[i], exponent) : 0.0;
        total += pd[i];
    }
    if (total <= 0.0) {
        throw ContractError("negative distribution has no mass");
    }
    for (double& p : pd) p /= total;
    return pd;
}

PairGradient dive_gradient(const Vector& w_row, const Vector& c_row, bool is_positive,
                           double weight) {
    double dot = w_row.dot(c_row);
    double g = is_positive ? weight * sigmoid(-dot) : -weight * sigmoid(dot);
    PairGradient grad;
    grad.wrt_word = g * c_row;
    grad.wrt_ctx = g * w_row;
    return grad;
}

double dive_objective(const DiveEmbedding& emb, const corpus::CooccurrenceTable& cooc,
                      const DiveTrainConfig& cfg) {
    if (emb.word_vecs.rows() != static_cast<Eigen::Index>(cooc.vocab_size()) ||
        emb.ctx_vecs.rows() != emb.word_vecs.rows() || emb.ctx_vecs.cols() != emb.word_vecs.cols()) {
        throw ContractError("dive_objective: embedding shape does not match the table");
    }
    const std::vector<double> pd = negative_distribution(cooc.word_totals, cfg.neg_exponent);
    const auto vocab = static_cast<Eigen::Index>(cooc.vocab_size());
    double value = 0.0;
    for (Eigen::Index w = 0; w < vocab; ++w) {
        for (size_t k = cooc.offsets[w]; k < cooc.offsets[w + 1]; ++k) {
            double dot = emb.word_vecs.row(w).dot(emb.ctx_vecs.row(cooc.ctx[k]));
            value += static_cast<double>(cooc.cnt[k]) * log_sigmoid(dot);
        }
        double total = cooc.word_totals[w];
        if (total <= 0.0) continue;
        double expectation = 0.0;
        for (Eigen::Index v = 0; v < vocab; ++v) {
            if (pd[v] == 0.0) continue;
            double dot = emb.word_vecs.row(w).dot(emb.ctx_vecs.row(v));
            expectation += pd[v] * log_sigmoid(-dot);
        }
        value += cfg.k_i * (cooc.z / total) * total * expectation;
    }
    return value;
}

namespace {

void check_finite(const DiveEmbedding& emb, int epoch) {
    if (!emb.word_vecs.allFinite() || !emb.ctx_vecs.allFinite()) {
        throw TrainingError(epoch, "dive parameters diverged (non-finite values)");
    }
}

void clamp_nonnegative(Matrix& m) {
    double* p = m.data();
    for (Eigen::Index i = 0, n = m.size(); i < n; ++i) {
        if (p[i] < 0.0) p[i] = 0.0;
    }
}

struct PairSampler {
    std::vector<WordId> row_of;  // nnz -> word id
    AliasTable alias;

    explicit PairSampler(const corpus::CooccurrenceTable& cooc)
        : alias(weights(cooc)) {
        row_of.resize(cooc.nnz());
        for (size_t w = 0; w < cooc.vocab_size(); ++w) {
            for (size_t k = cooc.offsets[w]; k < cooc.offsets[w + 1]; ++k) {
                row_of[k] = static_cast<WordId>(w);
            }
        }
    }

    static std::vector<double> weights(const corpus::CooccurrenceTable& cooc) {
        std::vector<double> w(cooc.nnz());
        for (size_t k = 0; k < cooc.nnz(); ++k) w[k] = static_cast<double>(cooc.cnt[k]);
        return w;
    }
};

}  // namespace

DiveEmbedding train_dive(const corpus::CooccurrenceTable& cooc, const DiveTrainConfig& cfg,
                         TrainTrace* trace) {
    cfg.validate();
    if (cooc.nnz() == 0) {
        throw ContractError("train_dive: empty co-occurrence table");
    }
    const auto vocab = static_cast<Eigen::Index>(cooc.vocab_size());
    const int dims = cfg.dims;

    DiveEmbedding emb;
    emb.word_vecs.resize(vocab, dims);
    emb.ctx_vecs.resize(vocab, dims);
    {
        Rng rng(cfg.seed);
        double hi = cfg.init_scale / static_cast<double>(dims);
        for (Eigen::Index i = 0; i < vocab; ++i)
            for (int d = 0; d < dims; ++d) emb.word_vecs(i, d) = rng.uniform(0.0, hi);
        for (Eigen::Index i = 0; i < vocab; ++i)
            for (int d = 0; d < dims; ++d) emb.ctx_vecs(i, d) = rng.uniform(0.0, hi);
    }
    clamp_nonnegative(emb.word_vecs);
    clamp_nonnegative(emb.ctx_vecs);
    if (cfg.epochs == 0) return emb;

    PairSampler pairs(cooc);
    AliasTable neg_alias(negative_distribution(cooc.word_totals, cfg.neg_exponent));

    // Per-word weight of one negative draw: k_I * Z / #(w), split over the
    // draws that estimate the expectation.
    std::vector<double> neg_coef(cooc.vocab_size(), 0.0);
    for (size_t w = 0; w < cooc.vocab_size(); ++w) {
        if (cooc.word_totals[w] > 0.0) {
            neg_coef[w] = cfg.k_i * cooc.z / cooc.word_totals[w] / cfg.negatives;
        }
    }

    double mass = 0.0;
    for (double t : cooc.word_totals) mass += t;
    const uint64_t draws =
        cfg.pairs_per_epoch > 0 ? cfg.pairs_per_epoch : static_cast<uint64_t>(mass);
    const int threads = std::max(1, cfg.threads);

    double* W = emb.word_vecs.data();
    double* C = emb.ctx_vecs.data();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
#pragma omp parallel num_threads(threads)
        {
            int tid = omp_get_thread_num();
            int nt = omp_get_num_threads();
            uint64_t local = draws / nt + (static_cast<uint64_t>(tid) < draws % nt ? 1 : 0);
            Rng rng(cfg.seed + 0x9E3779B97F4A7C15ull * (static_cast<uint64_t>(epoch) * nt + tid + 1));
            std::vector<double> grad_w(dims);
            for (uint64_t step = 0; step < local; ++step) {
                double progress =
                    (static_cast<double>(epoch) + static_cast<double>(step) / static_cast<double>(local)) /
                    static_cast<double>(cfg.epochs);
                double lr = cfg.lr_start + (cfg.lr_end - cfg.lr_start) * progress;

                size_t k = pairs.alias.sample(rng);
                WordId w = pairs.row_of[k];
                WordId c = cooc.ctx[k];
                double* wrow = W + static_cast<size_t>(w) * dims;
                double* crow = C + static_cast<size_t>(c) * dims;

                double dot = 0.0;
                for (int d = 0; d < dims; ++d) dot += wrow[d] * crow[d];
                double g = sigmoid(-dot);
                for (int d = 0; d < dims; ++d) {
                    grad_w[d] = g * crow[d];
                    double nc = crow[d] + lr * g * wrow[d];
                    crow[d] = nc < 0.0 ? 0.0 : nc;
                }
                double coef = neg_coef[w];
                for (int s = 0; s < cfg.negatives; ++s) {
                    size_t v = neg_alias.sample(rng);
                    double* vrow = C + v * dims;
                    double dotn = 0.0;
                    for (int d = 0; d < dims; ++d) dotn += wrow[d] * vrow[d];
                    double gn = -coef * sigmoid(dotn);
                    for (int d = 0; d < dims; ++d) {
                        grad_w[d] += gn * vrow[d];
                        double nv = vrow[d] + lr * gn * wrow[d];
                        vrow[d] = nv < 0.0 ? 0.0 : nv;
                    }
                }
                for (int d = 0; d < dims; ++d) {
                    double nw = wrow[d] + lr * grad_w[d];
                    wrow[d] = nw < 0.0 ? 0.0 : nw;
                }
            }
        }
        // Bounded-staleness contract: races may only lose updates, every store
        // is clamped, so a re-clamp plus finite check closes the epoch.
        clamp_nonnegative(emb.word_vecs);
        clamp_nonnegative(emb.ctx_vecs);
        check_finite(emb, epoch);
        if (cfg.track_objective) {
            double value = dive_objective(emb, cooc, cfg);
            if (!std::isfinite(value)) {
                throw TrainingError(epoch, "dive objective is not finite");
            }
            if (trace) trace->objective.push_back(value);
        }
    }
    return emb;
}

}  // namespace wsi::dive
