#include "egk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "egk/error.hpp"

namespace egk {
namespace {

void check_assignments(const Dataset& dataset, const ClusteringResult& result) {
    if (result.assignments().size() != dataset.size()) {
        throw UsageError("result has " + std::to_string(result.assignments().size()) +
                         " assignments for " + std::to_string(dataset.size()) + " points");
    }
}

struct ClusterGeometry {
    std::vector<std::vector<std::size_t>> members;  // row indices per cluster
    std::vector<std::vector<double>> means;         // empty vector for empty clusters
};

ClusterGeometry geometry(const Dataset& dataset, const ClusteringResult& result) {
    ClusterGeometry g;
    g.members.resize(result.k());
    g.means.resize(result.k());
    for (std::size_t i = 0; i < dataset.size(); ++i) g.members[result.assignments()[i]].push_back(i);
    for (std::size_t c = 0; c < result.k(); ++c) {
        if (g.members[c].empty()) continue;
        std::vector<double> mean(dataset.dim, 0.0);
        for (std::size_t i : g.members[c]) {
            for (std::size_t f = 0; f < dataset.dim; ++f) mean[f] += dataset.points[i].features[f];
        }
        for (double& v : mean) v /= static_cast<double>(g.members[c].size());
        g.means[c] = std::move(mean);
    }
    return g;
}

}  // namespace

double db_index(const Dataset& dataset, const ClusteringResult& result) {
    check_assignments(dataset, result);
    const auto g = geometry(dataset, result);

    std::vector<std::size_t> live;
    std::vector<double> scatter;
    for (std::size_t c = 0; c < result.k(); ++c) {
        if (g.members[c].empty()) continue;
        double s = 0.0;
        for (std::size_t i : g.members[c]) s += euclidean_distance(dataset.points[i].features, g.means[c]);
        live.push_back(c);
        scatter.push_back(s / static_cast<double>(g.members[c].size()));
    }
    if (live.size() < 2) {
        throw MetricUndefinedError("DB index needs at least 2 nonempty clusters, found " +
                                   std::to_string(live.size()));
    }

    double total = 0.0;
    for (std::size_t a = 0; a < live.size(); ++a) {
        double worst = 0.0;
        for (std::size_t b = 0; b < live.size(); ++b) {
            if (a == b) continue;
            const double sep = euclidean_distance(g.means[live[a]], g.means[live[b]]);
            if (sep == 0.0) {
                throw MetricUndefinedError("clusters " + std::to_string(live[a]) + " and " +
                                           std::to_string(live[b]) + " have coincident centroids");
            }
            worst = std::max(worst, (scatter[a] + scatter[b]) / sep);
        }
        total += worst;
    }
    return total / static_cast<double>(live.size());
}

double sse(const Dataset& dataset, const ClusteringResult& result) {
    check_assignments(dataset, result);
    double s = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        s += squared_distance(dataset.points[i].features,
                              result.centroids()[result.assignments()[i]].coords);
    }
    return s;
}

std::size_t empty_cluster_count(const ClusteringResult& result) {
    const auto sizes = result.cluster_sizes();
    return static_cast<std::size_t>(std::count(sizes.begin(), sizes.end(), std::size_t{0}));
}

std::vector<std::size_t> detect_outliers(const Dataset& dataset, const ClusteringResult& result,
                                         double threshold_sigma) {
    check_assignments(dataset, result);
    if (!(threshold_sigma > 0.0)) throw UsageError("outlier threshold must be positive");
    const auto g = geometry(dataset, result);

    std::vector<std::size_t> flagged;
    for (std::size_t c = 0; c < result.k(); ++c) {
        const auto& members = g.members[c];
        if (members.size() <= 2) continue;
        std::vector<double> dist;
        dist.reserve(members.size());
        for (std::size_t i : members) dist.push_back(euclidean_distance(dataset.points[i].features, g.means[c]));
        const double n = static_cast<double>(dist.size());
        double mean = 0.0;
        for (double d : dist) mean += d;
        mean /= n;
        double var = 0.0;
        for (double d : dist) var += (d - mean) * (d - mean);
        const double cutoff = mean + threshold_sigma * std::sqrt(var / n);
        for (std::size_t m = 0; m < members.size(); ++m) {
            if (dist[m] > cutoff) flagged.push_back(dataset.points[members[m]].id);
        }
    }
    std::sort(flagged.begin(), flagged.end());
    return flagged;
}

MetricsReport evaluate(const Dataset& dataset, const ClusteringResult& result, double threshold_sigma) {
    MetricsReport r;
    r.db_index = db_index(dataset, result);
    r.sse = sse(dataset, result);
    r.empty_clusters = empty_cluster_count(result);
    r.k_effective = result.k() - r.empty_clusters;
    r.outlier_ids = detect_outliers(dataset, result, threshold_sigma);
    return r;
}

}  // namespace egk
