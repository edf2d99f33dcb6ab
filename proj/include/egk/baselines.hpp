#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "egk/core.hpp"

namespace egk {

enum class InitMethod { RandomPoints, KmeansPP, Provided };
enum class EmptyClusterPolicy { ReseedFarthest, Drop };

struct LloydConfig {
    std::size_t k = 1;
    std::size_t max_iterations = 100;
    double convergence_tol = 1e-6;  // on the largest centroid displacement
    std::uint64_t seed = 0;
    InitMethod init = InitMethod::RandomPoints;
    EmptyClusterPolicy empty_cluster_policy = EmptyClusterPolicy::ReseedFarthest;
    // Tag stamped on the result; defaults follow init (PROVIDED -> KMEANS_RANDOM).
    std::optional<Technique> technique;
};

std::size_t distinct_point_count(const Dataset& dataset);

// k distinct points, uniformly without replacement.
std::vector<Centroid> random_init(const Dataset& dataset, std::size_t k, std::uint64_t seed);

// D^2 seeding. Falls back to a uniform pick among unchosen rows when every weight is zero.
std::vector<Centroid> kmeanspp_init(const Dataset& dataset, std::size_t k, std::uint64_t seed);

ClusteringResult lloyd(const Dataset& dataset, const LloydConfig& config,
                       const std::optional<std::vector<Centroid>>& provided = std::nullopt);

std::vector<Centroid> cluster_means(const Dataset& dataset,
                                    const std::vector<std::size_t>& assignments, std::size_t k);

}  // namespace egk
