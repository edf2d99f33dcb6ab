#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "egk/core.hpp"

namespace egk {

enum class SortKey { Value1D, L2Norm, FeatureSum };
enum class CentroidIndexPolicy { ClampToChunk, Error };
enum class Parity { Even, Odd };

std::string_view to_string(SortKey k);
SortKey sort_key_from_string(std::string_view s);

struct EgConfig {
    // A_c: scale applied to fractional keys of magnitude < 10. Positive multiple of 10.
    std::int64_t arbitrary_constant = 10;
    // Unset means VALUE_1D for one-dimensional data and L2_NORM otherwise.
    std::optional<SortKey> sort_key;
    CentroidIndexPolicy centroid_index_policy = CentroidIndexPolicy::ClampToChunk;
    // 0 keeps the single assignment pass; >0 runs that many Lloyd rounds afterwards.
    std::size_t refinement_iterations = 0;
    std::optional<std::size_t> k_override;
    // Applied to the dataset before anything else. Identity when empty.
    std::function<Dataset(const Dataset&)> preprocess;

    void validate() const;
    SortKey resolved_sort_key(std::size_t dim) const;
};

struct SortedKeyedData {
    std::vector<Keyed<std::int64_t>> entries;  // every point, ascending by key
    std::vector<std::int64_t> dedup_keys;      // strictly increasing
};

using Chunk = std::vector<Keyed<std::int64_t>>;

struct CentroidSelection {
    std::size_t rank = 0;                    // N, 1-based
    std::vector<std::size_t> point_indices;  // dataset rows used as seeds
    std::vector<Centroid> centroids;
};

double compute_sort_key(const DataPoint& point, SortKey mode);

std::vector<std::int64_t> integerize(std::span<const double> keys, std::int64_t a_c);

SortedKeyedData sort_and_dedup(std::vector<Keyed<std::int64_t>> keyed);

// ceil(t_s / i) over i = 2, 4, ... or 3, 5, ...; stops at the first repeated value.
std::vector<std::size_t> divisor_sequence(std::size_t t_s, Parity parity);

struct KSelection {
    std::size_t k_f = 0;
    bool fallback_used = false;
    std::vector<std::size_t> candidates;  // ascending intersection, 1 removed
};

// Smallest common value of the two sequences (1 excluded); smallest of d_odd
// when there is none. distinct_points bounds the result.
KSelection select_k(std::span<const std::size_t> d_even, std::span<const std::size_t> d_odd,
                    std::optional<std::size_t> distinct_points = std::nullopt);

// floor(n / k_f) rows per chunk, the last chunk takes the remainder; each chunk reversed.
std::vector<Chunk> partition_and_reverse(const SortedKeyedData& sorted, std::size_t k_f);

// Seed of each chunk is the row at 1-based position N = second-smallest of
// d_even. Seeds whose coordinates repeat an earlier seed move to the nearest
// following (then preceding) row with distinct coordinates.
CentroidSelection select_centroids(const std::vector<Chunk>& chunks,
                                   std::span<const std::size_t> d_even,
                                   CentroidIndexPolicy policy, const Dataset& dataset);

// Nearest centroid in full feature space, ties to the lowest index; one pass.
std::vector<std::size_t> nearest_centroid(const Dataset& dataset,
                                          const std::vector<Centroid>& centroids);

ClusteringResult assign(const Dataset& dataset, const std::vector<Centroid>& centroids);

ClusteringResult eg_kmeans(const Dataset& dataset, const EgConfig& config = {});

// Multi-line, human-readable rendering of a trace for --explain.
std::string format_trace(const DivisorTrace& trace, const Dataset& dataset);

}  // namespace egk
