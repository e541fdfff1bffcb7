#pragma once

#include "colink/networks.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace colink {

struct ClusteredNetwork {
    CoOccurrenceMatrix matrix;
    // cluster_of[i] is the 1-based cluster of node i. Cluster 1 is the
    // largest; equal sizes are ordered by their lowest node index.
    std::vector<std::uint32_t> cluster_of;
    double resolution = 1.0;
    std::uint64_t seed = 0;
    double quality = 0.0;

    std::uint32_t cluster_count() const;
};

// Modularity with a resolution parameter:
//   Q = 1/(2m) * sum_ij [A_ij - resolution * k_i k_j / (2m)] [c_i == c_j]
// Returns 0 for a graph without edges.
double modularity(const CoOccurrenceMatrix& matrix, std::span<const std::uint32_t> cluster_of, double resolution);

// Multi-level local-moving modularity optimisation (Louvain scheme). Each
// restart visits nodes in a freshly shuffled order; the highest-quality
// partition wins, with earlier restarts winning ties. Output depends only
// on (matrix, resolution, seed, restarts). Nodes only ever join a
// neighbour's cluster, so for any resolution > 0 disconnected components
// never share a cluster.
//
// Throws Error(empty_network) for a matrix without nodes and
// Error(invalid_config) for resolution <= 0 or restarts == 0.
ClusteredNetwork cluster_network(const CoOccurrenceMatrix& matrix, double resolution, std::uint64_t seed,
                                 unsigned restarts);

} // namespace colink
