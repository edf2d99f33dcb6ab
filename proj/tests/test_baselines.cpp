#include <doctest.h>

#include <algorithm>
#include <random>

#include "egk/baselines.hpp"
#include "egk/error.hpp"
#include "egk/metrics.hpp"

using namespace egk;

namespace {

Dataset line(std::vector<double> v) {
    std::vector<std::vector<double>> rows;
    for (double x : v) rows.push_back({x});
    return Dataset::from_rows("line", rows);
}

std::vector<double> firsts(const std::vector<Centroid>& cs) {
    std::vector<double> out;
    for (const auto& c : cs) out.push_back(c.coords[0]);
    return out;
}

// Smallest SSE over every assignment of the points to two nonempty groups.
double brute_two_partition_sse(const std::vector<double>& v) {
    double best = 1e300;
    const std::size_t n = v.size();
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        double s[2] = {0, 0}, c[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const int g = (mask >> i) & 1;
            s[g] += v[i];
            c[g] += 1;
        }
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int g = (mask >> i) & 1;
            const double m = s[g] / c[g];
            total += (v[i] - m) * (v[i] - m);
        }
        best = std::min(best, total);
    }
    return best;
}

}  // namespace

TEST_CASE("random init golden picks") {
    // Frozen from an independent Python run of the same generator and shuffle.
    const auto a = line({2, 4.3, 5, 6, 8, 9, 10, 90, 12, 21, 34});
    CHECK(firsts(random_init(a, 3, 7)) == std::vector<double>{4.3, 6, 90});
    CHECK(firsts(random_init(a, 3, 8)) == std::vector<double>{90, 10, 4.3});
    CHECK(firsts(random_init(a, 2, 0)) == std::vector<double>{34, 10});
}

TEST_CASE("random init picks distinct points") {
    const auto d = line({1, 1, 1, 2, 2, 3});
    CHECK(distinct_point_count(d) == 3);
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto v = firsts(random_init(d, 3, s));
        std::sort(v.begin(), v.end());
        REQUIRE(v == std::vector<double>{1, 2, 3});
    }
    CHECK_THROWS_AS(random_init(d, 4, 0), UsageError);
}

TEST_CASE("k-means++ prefers far points") {
    const auto d = line({0, 1, 9, 10});
    // weights after a first pick of 0 are 0, 1, 81, 100
    int far = 0, trials = 0;
    for (std::uint64_t s = 0; s < 2000; ++s) {
        const auto c = firsts(kmeanspp_init(d, 2, s));
        if (c[0] != 0) continue;
        ++trials;
        if (c[1] >= 9) ++far;
    }
    REQUIRE(trials > 100);
    CHECK(static_cast<double>(far) / trials > 0.97);
}

TEST_CASE("k-means++ falls back to a uniform pick when all weights vanish") {
    const auto d = line({5, 5, 5});
    const auto c = kmeanspp_init(d, 3, 1);
    CHECK(c.size() == 3);
    CHECK_THROWS_AS(kmeanspp_init(d, 4, 1), UsageError);
}

TEST_CASE("lloyd converges to the optimal 2-partition on {0,1,9,10}") {
    const auto d = line({0, 1, 9, 10});
    LloydConfig c;
    c.k = 2;
    c.init = InitMethod::Provided;
    const auto r = lloyd(d, c, std::vector<Centroid>{{{0.0}}, {{9.0}}});
    CHECK(std::abs(sse(d, r) - 1.0) < 1e-9);
    CHECK(std::abs(sse(d, r) - brute_two_partition_sse({0, 1, 9, 10})) < 1e-9);
    CHECK(firsts(r.centroids()) == std::vector<double>{0.5, 9.5});
    CHECK_FALSE(r.seed());
    CHECK(r.technique() == Technique::KmeansRandom);
}

TEST_CASE("lloyd SSE never increases") {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> rows(6, 300), dims(1, 5), ks(2, 6);
    std::normal_distribution<double> val(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rows(gen), dim = dims(gen);
        std::vector<std::vector<double>> data(n, std::vector<double>(dim));
        for (auto& r : data) for (auto& x : r) x = val(gen);
        const auto d = Dataset::from_rows("rand", data);
        LloydConfig c;
        c.k = static_cast<std::size_t>(ks(gen));
        c.seed = static_cast<std::uint64_t>(trial);
        c.init = trial % 2 ? InitMethod::KmeansPP : InitMethod::RandomPoints;
        const auto r = lloyd(d, c);
        const auto& h = r.sse_history();
        REQUIRE(!h.empty());
        for (std::size_t i = 1; i < h.size(); ++i) REQUIRE(h[i] <= h[i - 1] + kTolerance);
        REQUIRE(std::abs(h.back() - sse(d, r)) < 1e-6 * (1.0 + h.back()));
        REQUIRE(empty_cluster_count(r) == 0);
        REQUIRE(r == lloyd(d, c));
    }
}

TEST_CASE("empty clusters: reseed at the farthest point or drop") {
    const auto d = line({0, 1, 2, 50});
    LloydConfig c;
    c.k = 2;
    c.init = InitMethod::Provided;
    const std::vector<Centroid> init{{{1.0}}, {{1000.0}}};
    const auto reseeded = lloyd(d, c, init);
    CHECK(reseeded.k() == 2);
    CHECK(empty_cluster_count(reseeded) == 0);
    CHECK(firsts(reseeded.centroids()) == std::vector<double>{1.0, 50.0});

    c.empty_cluster_policy = EmptyClusterPolicy::Drop;
    const auto dropped = lloyd(d, c, init);
    CHECK(dropped.k() == 1);
}

TEST_CASE("lloyd argument checks") {
    const auto d = line({0, 1, 2, 3});
    LloydConfig c;
    c.k = 0;
    CHECK_THROWS_AS(lloyd(d, c), UsageError);
    c.k = 2;
    c.init = InitMethod::Provided;
    CHECK_THROWS_AS(lloyd(d, c), UsageError);
    CHECK_THROWS_AS(lloyd(d, c, std::vector<Centroid>{{{0.0}}}), UsageError);
}

TEST_CASE("cluster means") {
    const auto d = line({0, 2, 10, 12});
    const auto m = cluster_means(d, {0, 0, 1, 1}, 2);
    CHECK(firsts(m) == std::vector<double>{1, 11});
    CHECK_THROWS(cluster_means(d, {0, 0, 0, 0}, 2));
}
