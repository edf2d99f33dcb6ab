#include "egk/egkmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "egk/baselines.hpp"
#include "egk/error.hpp"

namespace egk {
namespace {

std::vector<std::size_t> without_ones(std::span<const std::size_t> seq) {
    std::vector<std::size_t> out;
    for (std::size_t v : seq) {
        if (v != 1) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ", ";
        os << values[i];
    }
    os << ']';
    return os.str();
}

const DataPoint* find_point(const Dataset& d, std::size_t id) {
    if (id < d.points.size() && d.points[id].id == id) return &d.points[id];
    for (const auto& p : d.points) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

}  // namespace

std::string_view to_string(SortKey k) {
    switch (k) {
        case SortKey::Value1D: return "VALUE_1D";
        case SortKey::L2Norm: return "L2_NORM";
        case SortKey::FeatureSum: return "FEATURE_SUM";
    }
    return "UNKNOWN";
}

SortKey sort_key_from_string(std::string_view s) {
    if (s == "VALUE_1D" || s == "value") return SortKey::Value1D;
    if (s == "L2_NORM" || s == "l2") return SortKey::L2Norm;
    if (s == "FEATURE_SUM" || s == "sum") return SortKey::FeatureSum;
    throw UsageError("unknown sort key '" + std::string(s) + "'");
}

void EgConfig::validate() const {
    if (arbitrary_constant < 10 || arbitrary_constant % 10 != 0) {
        throw UsageError("arbitrary constant must be a positive multiple of 10, got " +
                         std::to_string(arbitrary_constant));
    }
    if (k_override && *k_override == 0) throw UsageError("k override must be positive");
}

SortKey EgConfig::resolved_sort_key(std::size_t dim) const {
    if (sort_key) return *sort_key;
    return dim == 1 ? SortKey::Value1D : SortKey::L2Norm;
}

double compute_sort_key(const DataPoint& point, SortKey mode) {
    const auto& f = point.features;
    switch (mode) {
        case SortKey::Value1D:
            if (f.size() != 1) {
                throw UsageError("VALUE_1D sort key needs one feature, point has " +
                                 std::to_string(f.size()));
            }
            return f.front();
        case SortKey::L2Norm: {
            double ss = 0.0;
            for (double v : f) ss += v * v;
            return std::sqrt(ss);
        }
        case SortKey::FeatureSum: {
            double sum = 0.0;
            for (double v : f) sum += v;
            return sum;
        }
    }
    throw UsageError("unknown sort key");
}

std::vector<std::int64_t> integerize(std::span<const double> keys, std::int64_t a_c) {
    if (a_c < 10 || a_c % 10 != 0) {
        throw UsageError("arbitrary constant must be a positive multiple of 10");
    }
    constexpr double kLimit = 9.0e18;
    std::vector<std::int64_t> out;
    out.reserve(keys.size());
    for (double v : keys) {
        if (!std::isfinite(v)) throw UsageError("non-finite sort key");
        double r = v;
        if (v != std::floor(v)) {
            r = std::abs(v) < 10.0 ? std::floor(v * static_cast<double>(a_c)) : std::floor(v);
        }
        if (std::abs(r) > kLimit) throw UsageError("sort key too large to integerize");
        out.push_back(static_cast<std::int64_t>(r));
    }
    return out;
}

SortedKeyedData sort_and_dedup(std::vector<Keyed<std::int64_t>> keyed) {
    SortedKeyedData out;
    out.entries = stable_sort_points(std::move(keyed));
    for (const auto& e : out.entries) {
        if (out.dedup_keys.empty() || out.dedup_keys.back() != e.key) out.dedup_keys.push_back(e.key);
    }
    return out;
}

std::vector<std::size_t> divisor_sequence(std::size_t t_s, Parity parity) {
    if (t_s < 2) {
        throw DegenerateInputError("divisor sequence needs at least 2 distinct keys, got " +
                                   std::to_string(t_s));
    }
    std::vector<std::size_t> seq;
    for (std::size_t i = parity == Parity::Even ? 2 : 3;; i += 2) {
        const std::size_t v = (t_s + i - 1) / i;
        if (!seq.empty() && seq.back() == v) break;
        seq.push_back(v);
    }
    return seq;
}

KSelection select_k(std::span<const std::size_t> d_even, std::span<const std::size_t> d_odd,
                    std::optional<std::size_t> distinct_points) {
    const auto even = without_ones(d_even);
    const auto odd = without_ones(d_odd);
    KSelection sel;
    std::set_intersection(even.begin(), even.end(), odd.begin(), odd.end(),
                          std::back_inserter(sel.candidates));
    sel.candidates.erase(std::unique(sel.candidates.begin(), sel.candidates.end()),
                         sel.candidates.end());
    if (!sel.candidates.empty()) {
        sel.k_f = sel.candidates.front();
    } else if (!odd.empty()) {
        sel.k_f = odd.front();
        sel.fallback_used = true;
    } else {
        throw DegenerateInputError(
            "no cluster count available: divisor sequences hold nothing but 1" +
            (distinct_points ? " (dataset has " + std::to_string(*distinct_points) + " distinct keys)"
                             : std::string()));
    }
    if (distinct_points && sel.k_f > *distinct_points) {
        throw DegenerateInputError("selected K = " + std::to_string(sel.k_f) + " exceeds the " +
                                   std::to_string(*distinct_points) + " distinct points");
    }
    return sel;
}

std::vector<Chunk> partition_and_reverse(const SortedKeyedData& sorted, std::size_t k_f) {
    const std::size_t n = sorted.entries.size();
    if (k_f == 0 || k_f > n) {
        throw DegenerateInputError("cannot split " + std::to_string(n) + " points into " +
                                   std::to_string(k_f) + " chunks");
    }
    const std::size_t base = n / k_f;
    std::vector<Chunk> chunks;
    chunks.reserve(k_f);
    for (std::size_t c = 0; c < k_f; ++c) {
        const std::size_t begin = c * base;
        const std::size_t end = c + 1 == k_f ? n : begin + base;
        Chunk chunk(sorted.entries.begin() + static_cast<std::ptrdiff_t>(begin),
                    sorted.entries.begin() + static_cast<std::ptrdiff_t>(end));
        std::reverse(chunk.begin(), chunk.end());
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

CentroidSelection select_centroids(const std::vector<Chunk>& chunks,
                                   std::span<const std::size_t> d_even,
                                   CentroidIndexPolicy policy, const Dataset& dataset) {
    if (d_even.size() < 2) {
        throw DegenerateInputError("d_even has " + std::to_string(d_even.size()) +
                                   " element(s); the seed position needs its second smallest");
    }
    if (chunks.empty()) throw DegenerateInputError("no chunks to seed from");
    std::vector<std::size_t> ascending(d_even.begin(), d_even.end());
    std::sort(ascending.begin(), ascending.end());

    CentroidSelection sel;
    sel.rank = ascending[1];

    auto already_used = [&](std::size_t row) {
        const auto& f = dataset.points.at(row).features;
        return std::any_of(sel.centroids.begin(), sel.centroids.end(),
                           [&](const Centroid& c) { return c.coords == f; });
    };

    for (std::size_t c = 0; c < chunks.size(); ++c) {
        const auto& chunk = chunks[c];
        if (chunk.empty()) throw DegenerateInputError("chunk " + std::to_string(c + 1) + " is empty");
        std::size_t pos = sel.rank - 1;
        if (sel.rank > chunk.size()) {
            if (policy == CentroidIndexPolicy::Error) {
                throw CentroidIndexError("seed position " + std::to_string(sel.rank) +
                                             " exceeds chunk " + std::to_string(c + 1) +
                                             " of length " + std::to_string(chunk.size()),
                                         c + 1);
            }
            pos = chunk.size() - 1;
        }
        std::optional<std::size_t> pick;
        if (!already_used(chunk[pos].index)) {
            pick = pos;
        } else {
            for (std::size_t j = pos + 1; j < chunk.size() && !pick; ++j) {
                if (!already_used(chunk[j].index)) pick = j;
            }
            for (std::size_t j = pos; j-- > 0 && !pick;) {
                if (!already_used(chunk[j].index)) pick = j;
            }
        }
        if (!pick) {
            throw DegenerateInputError("chunk " + std::to_string(c + 1) +
                                       " holds only points identical to earlier seeds");
        }
        const std::size_t row = chunk[*pick].index;
        sel.point_indices.push_back(row);
        sel.centroids.push_back(Centroid{dataset.points.at(row).features});
    }
    return sel;
}

std::vector<std::size_t> nearest_centroid(const Dataset& dataset,
                                          const std::vector<Centroid>& centroids) {
    if (centroids.empty()) throw UsageError("no centroids to assign to");
    std::vector<std::size_t> labels(dataset.size(), 0);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& f = dataset.points[i].features;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            const double d = squared_distance(f, centroids[c].coords);
            if (d < best) {
                best = d;
                labels[i] = c;
            }
        }
    }
    return labels;
}

ClusteringResult assign(const Dataset& dataset, const std::vector<Centroid>& centroids) {
    return ClusteringResult(Technique::EgKmeans, nearest_centroid(dataset, centroids), centroids,
                            std::nullopt, 0);
}

ClusteringResult eg_kmeans(const Dataset& input, const EgConfig& config) {
    config.validate();
    const Dataset data = config.preprocess ? config.preprocess(input) : input;
    data.validate();
    if (data.size() < 4) {
        throw DegenerateInputError("EG K-MEANS needs at least 4 points, dataset '" + data.name +
                                   "' has " + std::to_string(data.size()));
    }

    const SortKey mode = config.resolved_sort_key(data.dim);
    std::vector<double> raw_keys;
    raw_keys.reserve(data.size());
    for (const auto& p : data.points) raw_keys.push_back(compute_sort_key(p, mode));
    const auto int_keys = integerize(raw_keys, config.arbitrary_constant);

    std::vector<Keyed<std::int64_t>> keyed;
    keyed.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) keyed.push_back({int_keys[i], i});
    const SortedKeyedData sorted = sort_and_dedup(std::move(keyed));

    DivisorTrace trace;
    trace.total_points = data.size();
    trace.t_s = sorted.dedup_keys.size();
    if (trace.t_s < 2) {
        throw DegenerateInputError("dataset '" + data.name + "' (" + std::to_string(data.size()) +
                                   " points) has " + std::to_string(trace.t_s) +
                                   " distinct sort key(s)");
    }
    trace.d_even = divisor_sequence(trace.t_s, Parity::Even);
    trace.d_odd = divisor_sequence(trace.t_s, Parity::Odd);

    const KSelection ksel = select_k(trace.d_even, trace.d_odd, trace.t_s);
    trace.k_candidates = ksel.candidates;
    trace.fallback_used = ksel.fallback_used;
    trace.k_f = ksel.k_f;
    if (config.k_override) {
        if (*config.k_override > data.size()) {
            throw UsageError("k override " + std::to_string(*config.k_override) + " exceeds the " +
                             std::to_string(data.size()) + " points");
        }
        trace.k_f = *config.k_override;
        trace.k_overridden = true;
    }

    const auto chunks = partition_and_reverse(sorted, trace.k_f);
    for (const auto& c : chunks) trace.chunk_sizes.push_back(c.size());
    const auto seeds = select_centroids(chunks, trace.d_even, config.centroid_index_policy, data);
    trace.seed_rank = seeds.rank;
    for (std::size_t row : seeds.point_indices) trace.seed_point_ids.push_back(data.points[row].id);

    if (config.refinement_iterations == 0) {
        return ClusteringResult(Technique::EgKmeans, nearest_centroid(data, seeds.centroids),
                                seeds.centroids, std::nullopt, 0, std::move(trace));
    }

    LloydConfig lc;
    lc.k = seeds.centroids.size();
    lc.max_iterations = config.refinement_iterations;
    lc.init = InitMethod::Provided;
    lc.empty_cluster_policy = EmptyClusterPolicy::ReseedFarthest;
    lc.technique = Technique::EgKmeans;
    const ClusteringResult refined = lloyd(data, lc, seeds.centroids);
    return ClusteringResult(Technique::EgKmeans, refined.assignments(), refined.centroids(),
                            std::nullopt, refined.iterations(), std::move(trace),
                            refined.sse_history());
}

std::string format_trace(const DivisorTrace& t, const Dataset& dataset) {
    std::ostringstream os;
    os << "EG K-MEANS trace for '" << dataset.name << "'\n";
    os << "  rows                     : " << t.total_points << '\n';
    os << "  T_s (distinct sort keys) : " << t.t_s << '\n';
    os << "  d_even = ceil(T_s / i)   : " << join(t.d_even) << '\n';
    os << "  d_odd  = ceil(T_s / j)   : " << join(t.d_odd) << '\n';
    os << "  K = d_even & d_odd       : " << join(t.k_candidates) << "  (1 excluded)\n";
    os << "  fallback to min(d_odd)   : " << (t.fallback_used ? "yes" : "no") << '\n';
    os << "  K_f                      : " << t.k_f << (t.k_overridden ? "  (override)" : "") << '\n';
    os << "  chunk sizes              : " << join(t.chunk_sizes) << '\n';
    os << "  chunk boundaries         :";
    std::size_t start = 0;
    for (std::size_t s : t.chunk_sizes) {
        os << " [" << start << ", " << start + s << ')';
        start += s;
    }
    os << '\n';
    os << "  p                        : " << t.position_p << '\n';
    os << "  N = d_even(p)            : " << t.seed_rank << '\n';
    os << "  seeded centroids         :\n";
    for (std::size_t i = 0; i < t.seed_point_ids.size(); ++i) {
        os << "    M_" << i + 1 << " = row " << t.seed_point_ids[i] << " (";
        if (const DataPoint* p = find_point(dataset, t.seed_point_ids[i])) {
            for (std::size_t c = 0; c < p->features.size(); ++c) {
                if (c) os << ", ";
                os << p->features[c];
            }
        }
        os << ")\n";
    }
    return os.str();
}

}  // namespace egk
