#include "egk/baselines.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "egk/egkmeans.hpp"
#include "egk/error.hpp"
#include "egk/rng.hpp"

namespace egk {
namespace {

double total_sse(const Dataset& d, const std::vector<std::size_t>& labels,
                 const std::vector<Centroid>& centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        s += squared_distance(d.points[i].features, centroids[labels[i]].coords);
    }
    return s;
}

void check_k(const Dataset& d, std::size_t k) {
    if (k == 0) throw UsageError("k must be positive");
    if (k > d.size()) {
        throw UsageError("k = " + std::to_string(k) + " exceeds the " + std::to_string(d.size()) +
                         " points of '" + d.name + "'");
    }
}

// Moves each empty cluster's centroid onto the point farthest from its own
// centroid, then reassigns, until no cluster is empty. Each move drops that
// point's cost to zero, so SSE strictly decreases and the loop terminates.
void reseed_empty(const Dataset& d, std::vector<std::size_t>& labels,
                  std::vector<Centroid>& centroids) {
    const std::size_t k = centroids.size();
    for (std::size_t round = 0; round <= d.size() + k; ++round) {
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t l : labels) ++sizes[l];
        std::vector<std::size_t> empty;
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] == 0) empty.push_back(c);
        }
        if (empty.empty()) return;

        std::vector<bool> taken(d.size(), false);
        for (std::size_t c : empty) {
            std::optional<std::size_t> far;
            double far_d = -1.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (taken[i] || sizes[labels[i]] < 2) continue;
                const double dist = squared_distance(d.points[i].features, centroids[labels[i]].coords);
                if (dist > far_d) {
                    far_d = dist;
                    far = i;
                }
            }
            if (!far) throw InvariantViolation("no point available to reseed an empty cluster");
            taken[*far] = true;
            --sizes[labels[*far]];
            centroids[c].coords = d.points[*far].features;
        }
        labels = nearest_centroid(d, centroids);
    }
    throw InvariantViolation("empty-cluster repair did not settle");
}

void drop_empty(std::vector<std::size_t>& labels, std::vector<Centroid>& centroids) {
    std::vector<std::size_t> sizes(centroids.size(), 0);
    for (std::size_t l : labels) ++sizes[l];
    if (std::find(sizes.begin(), sizes.end(), 0) == sizes.end()) return;
    std::vector<std::size_t> remap(centroids.size(), 0);
    std::vector<Centroid> kept;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        if (sizes[c] == 0) continue;
        remap[c] = kept.size();
        kept.push_back(std::move(centroids[c]));
    }
    for (auto& l : labels) l = remap[l];
    centroids = std::move(kept);
}

}  // namespace

std::size_t distinct_point_count(const Dataset& dataset) {
    std::vector<const std::vector<double>*> rows;
    rows.reserve(dataset.size());
    for (const auto& p : dataset.points) rows.push_back(&p.features);
    std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return *a < *b; });
    const auto last = std::unique(rows.begin(), rows.end(), [](auto* a, auto* b) { return *a == *b; });
    return static_cast<std::size_t>(last - rows.begin());
}

std::vector<Centroid> random_init(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
    check_k(dataset, k);
    const std::size_t distinct = distinct_point_count(dataset);
    if (k > distinct) {
        throw UsageError("k = " + std::to_string(k) + " exceeds the " + std::to_string(distinct) +
                         " distinct points of '" + dataset.name + "'");
    }
    Xorshift64Star rng(seed);
    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<Centroid> out;
    for (std::size_t i = 0; i < order.size() && out.size() < k; ++i) {
        const std::size_t j = i + rng.below(order.size() - i);
        std::swap(order[i], order[j]);
        const auto& f = dataset.points[order[i]].features;
        const bool dup = std::any_of(out.begin(), out.end(), [&](const Centroid& c) { return c.coords == f; });
        if (!dup) out.push_back(Centroid{f});
    }
    return out;
}

std::vector<Centroid> kmeanspp_init(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
    check_k(dataset, k);
    Xorshift64Star rng(seed);
    const std::size_t n = dataset.size();
    std::vector<bool> chosen(n, false);
    std::vector<double> weight(n, std::numeric_limits<double>::infinity());
    std::vector<Centroid> out;

    auto take = [&](std::size_t i) {
        chosen[i] = true;
        out.push_back(Centroid{dataset.points[i].features});
        for (std::size_t j = 0; j < n; ++j) {
            weight[j] = chosen[j] ? 0.0
                                  : std::min(weight[j], squared_distance(dataset.points[j].features,
                                                                         out.back().coords));
        }
    };

    take(rng.below(n));
    while (out.size() < k) {
        double total = 0.0;
        for (double w : weight) total += w;
        std::optional<std::size_t> pick;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double cumulative = 0.0;
            std::size_t last_positive = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (weight[i] <= 0.0) continue;
                last_positive = i;
                cumulative += weight[i];
                if (cumulative > target) {
                    pick = i;
                    break;
                }
            }
            if (!pick) pick = last_positive;
        } else {
            std::vector<std::size_t> remaining;
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) remaining.push_back(i);
            }
            pick = remaining[rng.below(remaining.size())];
        }
        take(*pick);
    }
    return out;
}

std::vector<Centroid> cluster_means(const Dataset& dataset,
                                    const std::vector<std::size_t>& assignments, std::size_t k) {
    std::vector<Centroid> means(k, Centroid{std::vector<double>(dataset.dim, 0.0)});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const std::size_t c = assignments.at(i);
        ++counts.at(c);
        for (std::size_t f = 0; f < dataset.dim; ++f) means[c].coords[f] += dataset.points[i].features[f];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) throw UsageError("mean of empty cluster " + std::to_string(c));
        for (double& v : means[c].coords) v /= static_cast<double>(counts[c]);
    }
    return means;
}

ClusteringResult lloyd(const Dataset& dataset, const LloydConfig& config,
                       const std::optional<std::vector<Centroid>>& provided) {
    dataset.validate();
    check_k(dataset, config.k);
    if (config.max_iterations == 0) throw UsageError("max_iterations must be positive");
    if (!(config.convergence_tol >= 0.0)) throw UsageError("convergence_tol must be nonnegative");

    std::vector<Centroid> centroids;
    switch (config.init) {
        case InitMethod::RandomPoints: centroids = random_init(dataset, config.k, config.seed); break;
        case InitMethod::KmeansPP: centroids = kmeanspp_init(dataset, config.k, config.seed); break;
        case InitMethod::Provided:
            if (!provided || provided->size() != config.k) {
                throw UsageError("PROVIDED init needs exactly k = " + std::to_string(config.k) +
                                 " centroids");
            }
            for (const auto& c : *provided) {
                if (c.coords.size() != dataset.dim) throw UsageError("provided centroid dimension mismatch");
            }
            centroids = *provided;
            break;
    }

    const bool reseed = config.empty_cluster_policy == EmptyClusterPolicy::ReseedFarthest;
    auto assign_step = [&](std::vector<std::size_t>& labels) {
        labels = nearest_centroid(dataset, centroids);
        if (reseed) {
            reseed_empty(dataset, labels, centroids);
        } else {
            drop_empty(labels, centroids);
        }
    };

    std::vector<std::size_t> labels;
    assign_step(labels);
    std::vector<double> history{total_sse(dataset, labels, centroids)};

    std::size_t iterations = 0;
    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
        auto means = cluster_means(dataset, labels, centroids.size());
        double displacement = 0.0;
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            displacement = std::max(displacement, euclidean_distance(means[c].coords, centroids[c].coords));
        }
        centroids = std::move(means);
        assign_step(labels);
        history.push_back(total_sse(dataset, labels, centroids));
        assert(history.back() <= history[history.size() - 2] * (1.0 + 1e-12) + 1e-12);
        iterations = it;
        if (displacement < config.convergence_tol || displacement == 0.0) break;
    }

    Technique tag = config.technique.value_or(
        config.init == InitMethod::KmeansPP ? Technique::KmeansPP : Technique::KmeansRandom);
    std::optional<std::uint64_t> seed;
    if (config.init != InitMethod::Provided) seed = config.seed;
    return ClusteringResult(tag, std::move(labels), std::move(centroids), seed, iterations,
                            std::nullopt, std::move(history));
}

}  // namespace egk
