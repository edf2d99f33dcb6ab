#pragma once

#include <cstddef>
#include <vector>

#include "egk/core.hpp"

namespace egk {

struct MetricsReport {
    double db_index = 0.0;
    double sse = 0.0;
    std::size_t empty_clusters = 0;
    std::size_t k_effective = 0;  // nonempty clusters
    std::vector<std::size_t> outlier_ids;
};

// Davies-Bouldin over the nonempty clusters, with centroids recomputed as
// member means and scatter as mean member-to-mean distance.
// Throws MetricUndefinedError for < 2 nonempty clusters or coincident means.
double db_index(const Dataset& dataset, const ClusteringResult& result);

// Squared distance of every point to the centroid it is assigned to.
double sse(const Dataset& dataset, const ClusteringResult& result);

std::size_t empty_cluster_count(const ClusteringResult& result);

// Flags points whose distance to their cluster mean exceeds the cluster's
// mean distance plus threshold_sigma population standard deviations.
// Clusters with two or fewer members flag nothing.
std::vector<std::size_t> detect_outliers(const Dataset& dataset, const ClusteringResult& result,
                                         double threshold_sigma = 3.0);

MetricsReport evaluate(const Dataset& dataset, const ClusteringResult& result,
                       double threshold_sigma = 3.0);

}  // namespace egk
