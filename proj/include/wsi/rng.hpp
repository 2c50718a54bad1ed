#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wsi/types.hpp"

namespace wsi {

// Deterministic RNG wrapper. Scaling from raw engine output is done by hand so
// that sequences do not depend on the standard library's distribution
// implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0, n).
    size_t index(size_t n) {
        size_t i = static_cast<size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 engine_;
};

// Walker alias method for O(1) sampling from a fixed discrete distribution.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights) {
        if (weights.empty()) {
            throw ContractError("alias table needs at least one weight");
        }
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0 || !std::isfinite(w)) {
                throw ContractError("alias table weights must be finite and non-negative");
            }
            total += w;
        }
        if (total <= 0.0) {
            throw ContractError("alias table weights must not all be zero");
        }
        size_t n = weights.size();
        prob_.resize(n);
        alias_.assign(n, 0);
        std::vector<double> scaled(n);
        for (size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] / total * static_cast<double>(n);
        }
        std::vector<uint32_t> small, large;
        small.reserve(n);
        large.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            uint32_t s = small.back();
            small.pop_back();
            uint32_t l = large.back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = scaled[l] + scaled[s] - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (uint32_t i : large) prob_[i] = 1.0;
        for (uint32_t i : small) prob_[i] = 1.0;
    }

    size_t sample(Rng& rng) const {
        size_t i = rng.index(prob_.size());
        return rng.uniform() < prob_[i] ? i : alias_[i];
    }

    size_t size() const { return prob_.size(); }

private:
    std::vector<double> prob_;
    std::vector<uint32_t> alias_;
};

}  // namespace wsi
