#pragma once

#include <cstdint>
#include <vector>

#include "wsi/types.hpp"

namespace wsi::speccluster {

struct ClusterAssignment {
    std::vector<int> labels;  // node index -> cluster id in 0..k-1
    int k = 0;                // requested cluster count

    int used_clusters() const;
};

// Normalized spectral clustering on a symmetric non-negative adjacency:
// L_sym = I - D^{-1/2} A D^{-1/2} (isolated nodes get degree 1e-12),
// eigenvectors of the k smallest eigenvalues, row-normalized, then seeded
// k-means with 20 restarts keeping the best inertia (ties by first
// occurrence). Nodes <= k fall back to singleton clusters. Labels are
// canonicalized so cluster 0 contains the lowest node index.
ClusterAssignment spectral_cluster(const Matrix& adjacency, int k, uint64_t seed);

// Sum over clusters of cut(S, complement) / vol(S); empty-volume clusters
// contribute zero. The diagonal is ignored.
double normalized_cut(const Matrix& adjacency, const std::vector<int>& labels, int k);

}  // namespace wsi::speccluster
