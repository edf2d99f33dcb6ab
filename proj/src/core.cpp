#include "egk/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "egk/error.hpp"

namespace egk {

void Dataset::validate() const {
    if (dim == 0 && !points.empty()) {
        throw UsageError("dataset '" + name + "' has zero dimensionality");
    }
    for (const auto& p : points) {
        if (p.features.size() != dim) {
            throw UsageError("dataset '" + name + "': point " + std::to_string(p.id) + " has " +
                             std::to_string(p.features.size()) + " features, expected " +
                             std::to_string(dim));
        }
        for (double v : p.features) {
            if (!std::isfinite(v)) {
                throw UsageError("dataset '" + name + "': point " + std::to_string(p.id) +
                                 " has a non-finite feature");
            }
        }
    }
    if (labels && labels->size() != points.size()) {
        throw UsageError("dataset '" + name + "': label count does not match point count");
    }
}

Dataset Dataset::from_rows(std::string name, const std::vector<std::vector<double>>& rows) {
    Dataset d;
    d.name = std::move(name);
    d.dim = rows.empty() ? 0 : rows.front().size();
    d.points.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d.points.push_back(DataPoint{i, rows[i]});
    }
    for (std::size_t c = 0; c < d.dim; ++c) d.feature_names.push_back("x" + std::to_string(c));
    d.validate();
    return d;
}

std::string_view to_string(Technique t) {
    switch (t) {
        case Technique::EgKmeans: return "EG_KMEANS";
        case Technique::KmeansRandom: return "KMEANS_RANDOM";
        case Technique::KmeansPP: return "KMEANS_PP";
    }
    return "UNKNOWN";
}

Technique technique_from_string(std::string_view s) {
    if (s == "EG_KMEANS" || s == "eg") return Technique::EgKmeans;
    if (s == "KMEANS_RANDOM" || s == "kmeans") return Technique::KmeansRandom;
    if (s == "KMEANS_PP" || s == "kmeanspp") return Technique::KmeansPP;
    throw UsageError("unknown technique '" + std::string(s) + "'");
}

ClusteringResult::ClusteringResult(Technique technique, std::vector<std::size_t> assignments,
                                   std::vector<Centroid> centroids,
                                   std::optional<std::uint64_t> seed, std::size_t iterations,
                                   std::optional<DivisorTrace> trace,
                                   std::vector<double> sse_history)
    : technique_(technique),
      assignments_(std::move(assignments)),
      centroids_(std::move(centroids)),
      seed_(seed),
      iterations_(iterations),
      trace_(std::move(trace)),
      sse_history_(std::move(sse_history)) {
    if (centroids_.empty()) throw InvariantViolation("clustering result with k = 0");
    const std::size_t dim = centroids_.front().coords.size();
    for (const auto& c : centroids_) {
        if (c.coords.size() != dim) throw InvariantViolation("centroids of mixed dimensionality");
        for (double v : c.coords) {
            if (!std::isfinite(v)) throw InvariantViolation("non-finite centroid coordinate");
        }
    }
    for (std::size_t a : assignments_) {
        if (a >= centroids_.size()) {
            throw InvariantViolation("assignment " + std::to_string(a) + " out of range for k = " +
                                     std::to_string(centroids_.size()));
        }
    }
    if (technique_ == Technique::EgKmeans) {
        const auto sizes = cluster_sizes();
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            if (sizes[c] == 0) {
                throw InvariantViolation("EG K-MEANS produced empty cluster " + std::to_string(c));
            }
        }
    }
}

std::vector<std::size_t> ClusteringResult::cluster_sizes() const {
    std::vector<std::size_t> sizes(centroids_.size(), 0);
    for (std::size_t a : assignments_) ++sizes[a];
    return sizes;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw UsageError("distance between vectors of dimension " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

template <class Key>
std::vector<Keyed<Key>> stable_sort_points(std::vector<Keyed<Key>> items) {
    std::stable_sort(items.begin(), items.end(),
                     [](const Keyed<Key>& a, const Keyed<Key>& b) { return a.key < b.key; });
    return items;
}

template <class Key>
std::vector<Keyed<Key>> insertion_sort_points(std::vector<Keyed<Key>> items) {
    for (std::size_t i = 1; i < items.size(); ++i) {
        Keyed<Key> current = items[i];
        std::size_t j = i;
        // strict comparison keeps equal keys in input order
        while (j > 0 && current.key < items[j - 1].key) {
            items[j] = items[j - 1];
            --j;
        }
        items[j] = current;
    }
    return items;
}

template std::vector<Keyed<double>> stable_sort_points(std::vector<Keyed<double>>);
template std::vector<Keyed<std::int64_t>> stable_sort_points(std::vector<Keyed<std::int64_t>>);
template std::vector<Keyed<double>> insertion_sort_points(std::vector<Keyed<double>>);
template std::vector<Keyed<std::int64_t>> insertion_sort_points(std::vector<Keyed<std::int64_t>>);

}  // namespace egk
