#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace egk {

// Absolute tolerance used by invariant checks throughout the library.
inline constexpr double kTolerance = 1e-9;

struct DataPoint {
    std::size_t id = 0;
    std::vector<double> features;

    bool operator==(const DataPoint&) const = default;
};

// Rows of finite feature vectors sharing one dimensionality. Labels, when
// present, are carried through for reporting only and never drive clustering.
struct Dataset {
    std::string name;
    std::size_t dim = 0;
    std::vector<DataPoint> points;
    std::vector<std::string> feature_names;
    std::optional<std::vector<std::string>> labels;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    // Throws UsageError on ragged rows, non-finite values or label count mismatch.
    void validate() const;

    // Builds a dataset from raw rows; ids are assigned 0..n-1.
    static Dataset from_rows(std::string name, const std::vector<std::vector<double>>& rows);
};

struct Centroid {
    std::vector<double> coords;

    bool operator==(const Centroid&) const = default;
};

enum class Technique { EgKmeans, KmeansRandom, KmeansPP };

std::string_view to_string(Technique t);
Technique technique_from_string(std::string_view s);

// Intermediate artifacts of the EG K-selection and seeding stages.
struct DivisorTrace {
    std::size_t total_points = 0;     // rows entering the pipeline
    std::size_t t_s = 0;              // distinct sort keys, the divisor base count
    std::vector<std::size_t> d_even;  // ceil(t_s / i), i = 2, 4, 6, ...
    std::vector<std::size_t> d_odd;   // ceil(t_s / j), j = 3, 5, 7, ...
    std::vector<std::size_t> k_candidates;  // ascending
    std::size_t k_f = 0;
    bool fallback_used = false;
    bool k_overridden = false;
    std::size_t position_p = 2;
    std::size_t seed_rank = 0;  // N, 1-based position inside each reversed chunk
    std::vector<std::size_t> chunk_sizes;
    std::vector<std::size_t> seed_point_ids;

    bool operator==(const DivisorTrace&) const = default;
};

// Immutable outcome of any clustering technique. The constructor enforces
// the structural invariants: assignments index into [0, k), centroids share
// one dimensionality, and EG results have no empty clusters.
class ClusteringResult {
public:
    ClusteringResult(Technique technique, std::vector<std::size_t> assignments,
                     std::vector<Centroid> centroids, std::optional<std::uint64_t> seed,
                     std::size_t iterations, std::optional<DivisorTrace> trace = std::nullopt,
                     std::vector<double> sse_history = {});

    std::size_t k() const { return centroids_.size(); }
    Technique technique() const { return technique_; }
    const std::vector<std::size_t>& assignments() const { return assignments_; }
    const std::vector<Centroid>& centroids() const { return centroids_; }
    std::optional<std::uint64_t> seed() const { return seed_; }
    std::size_t iterations() const { return iterations_; }
    const std::optional<DivisorTrace>& trace() const { return trace_; }
    // SSE after every assignment pass of a Lloyd loop; empty for single-pass results.
    const std::vector<double>& sse_history() const { return sse_history_; }

    std::vector<std::size_t> cluster_sizes() const;

    bool operator==(const ClusteringResult&) const = default;

private:
    Technique technique_;
    std::vector<std::size_t> assignments_;
    std::vector<Centroid> centroids_;
    std::optional<std::uint64_t> seed_;
    std::size_t iterations_;
    std::optional<DivisorTrace> trace_;
    std::vector<double> sse_history_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

template <class Key>
struct Keyed {
    Key key{};
    std::size_t index = 0;  // row position in the owning Dataset

    bool operator==(const Keyed&) const = default;
};

// Ascending by key; equal keys keep their input order.
template <class Key>
std::vector<Keyed<Key>> stable_sort_points(std::vector<Keyed<Key>> items);

// Literal insertion sort with the same contract as stable_sort_points.
template <class Key>
std::vector<Keyed<Key>> insertion_sort_points(std::vector<Keyed<Key>> items);

}  // namespace egk
