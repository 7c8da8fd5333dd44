#pragma once

#include "xwf/workload.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace xwf {

/// One predicate as a point: its matrix column over the queries.
struct PredicateVector {
    std::string predicate_id;
    std::vector<std::uint8_t> coords;
};

struct Cluster {
    std::vector<double> centroid;
    std::vector<std::string> members; // predicate ids, matrix order
};

struct ClusterSet {
    int k_requested = 0;
    std::vector<Cluster> clusters; // nonempty clusters only
    int iterations = 0;
    double total_variance = 0.0;
    /// Objective after each assign/update round; non-increasing.
    std::vector<double> variance_trace;
};

/**
 * Lloyd iteration over the matrix columns with squared-Euclidean distance.
 *
 * Seeding is deterministic farthest-first: the first centroid is the
 * lexicographically smallest column, each next one the column with the
 * largest distance to the centroids chosen so far; ties break in predicate
 * order. Assignment ties go to the lowest cluster index, and a cluster left
 * empty is refilled with the point farthest from its current centroid when
 * such a point exists. `seed` is accepted for a future randomized mode and
 * ignored by the default deterministic one.
 */
ClusterSet kmeans(const QueryPredicateMatrix& matrix, int k, int max_iters = 100,
                  std::uint64_t seed = 0);

/// Total intra-cluster variance of `cs` with centroids recomputed from the
/// member columns (stored centroids are not trusted).
double intra_cluster_variance(const ClusterSet& cs, const QueryPredicateMatrix& matrix);

/// Globally variance-minimal partition into at most `k` clusters, by
/// exhaustive enumeration. Only for instances with at most 12 predicates.
ClusterSet exhaustive_best_partition(const QueryPredicateMatrix& matrix, int k);

} // namespace xwf
