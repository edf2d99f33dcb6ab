// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "egk/baselines.hpp"
#include "egk/egkmeans.hpp"
#include "egk/error.hpp"
#include "egk/experiment.hpp"
#include "egk/ingest.hpp"
#include "egk/metrics.hpp"

using namespace egk;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kData(EGK_DATA_DIR);

struct Outcome {
    bool pass = false;
    std::string detail;
};

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

template <class T>
std::string list(const std::vector<T>& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ']';
    return os.str();
}

Dataset line(const std::vector<double>& v) {
    std::vector<std::vector<double>> rows;
    for (double x : v) rows.push_back({x});
    return Dataset::from_rows("line", rows);
}

std::vector<double> members(const Dataset& d, const ClusteringResult& r, std::size_t c) {
    std::vector<double> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (r.assignments()[i] == c) out.push_back(d.points[i].features[0]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Dataset> fixtures() {
    std::vector<Dataset> out;
    for (const auto& s : point_set_fixtures()) out.push_back(fixture_dataset(s));
    return out;
}

Outcome canonical_trace() {
    const auto d = line({3, 10, 15, 26, 18, 4, 1, -1});
    const auto start = Clock::now();
    const auto r = eg_kmeans(d);
    const double ms = ms_since(start);
    const auto& t = *r.trace();
    const bool ok = r.k() == 2 && t.d_even == std::vector<std::size_t>{4, 2} &&
                    t.d_odd == std::vector<std::size_t>{3, 2} && t.k_f == 2 &&
                    r.centroids()[0].coords == std::vector<double>{-1} &&
                    r.centroids()[1].coords == std::vector<double>{10} &&
                    members(d, r, 0) == std::vector<double>{-1, 1, 3, 4} &&
                    members(d, r, 1) == std::vector<double>{10, 15, 18, 26};
    return {ok && ms < 1.0, "d_even " + list(t.d_even) + ", d_odd " + list(t.d_odd) + ", K_f " +
                                std::to_string(t.k_f) + ", clusters " + list(members(d, r, 0)) + " / " +
                                list(members(d, r, 1)) + ", " + fmt(ms, 3) + " ms"};
}

Outcome worked_example() {
    const auto d = line({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const auto r = eg_kmeans(d);
    const auto& t = *r.trace();
    const bool ok = t.d_even == std::vector<std::size_t>{5, 3, 2} && t.d_odd == std::vector<std::size_t>{4, 2} &&
                    t.k_f == 2 && t.chunk_sizes == std::vector<std::size_t>{5, 5} && t.seed_rank == 3 &&
                    r.centroids()[0].coords == std::vector<double>{3} &&
                    r.centroids()[1].coords == std::vector<double>{8} &&
                    members(d, r, 0) == std::vector<double>{1, 2, 3, 4, 5} &&
                    members(d, r, 1) == std::vector<double>{6, 7, 8, 9, 10};
    return {ok, "d_even " + list(t.d_even) + ", d_odd " + list(t.d_odd) + ", chunks " + list(t.chunk_sizes) +
                    ", N " + std::to_string(t.seed_rank) + ", centroids " +
                    fmt(r.centroids()[0].coords[0], 0) + " and " + fmt(r.centroids()[1].coords[0], 0)};
}

// ceil(t / i) for i = start, start + 2, ...; stop before the first value already seen.
std::vector<std::size_t> oracle_sequence(std::size_t t, std::size_t start) {
    std::vector<std::size_t> seq;
    for (std::size_t i = start;; i += 2) {
        const std::size_t v = static_cast<std::size_t>(std::ceil(static_cast<double>(t) / static_cast<double>(i)));
        if (std::find(seq.begin(), seq.end(), v) != seq.end()) return seq;
        seq.push_back(v);
    }
}

std::size_t oracle_k(const std::vector<std::size_t>& even, const std::vector<std::size_t>& odd) {
    std::vector<std::size_t> common;
    for (auto e : even) {
        if (e > 1 && std::find(odd.begin(), odd.end(), e) != odd.end()) common.push_back(e);
    }
    if (!common.empty()) return *std::min_element(common.begin(), common.end());
    std::vector<std::size_t> rest;
    for (auto o : odd) {
        if (o > 1) rest.push_back(o);
    }
    return rest.empty() ? 0 : *std::min_element(rest.begin(), rest.end());
}

Outcome divisor_oracle() {
    const auto start = Clock::now();
    std::size_t mismatches = 0;
    std::size_t first_bad = 0;
    for (std::size_t t = 4; t <= 100000; ++t) {
        const auto even = divisor_sequence(t, Parity::Even);
        const auto odd = divisor_sequence(t, Parity::Odd);
        const bool ok = even == oracle_sequence(t, 2) && odd == oracle_sequence(t, 3) &&
                        select_k(even, odd).k_f == oracle_k(even, odd);
        if (!ok && mismatches++ == 0) first_bad = t;
    }
    const double ms = ms_since(start);
    std::string detail = std::to_string(mismatches) + " mismatches over t_s in [4, 100000], " + fmt(ms / 1000.0, 2) + " s";
    if (mismatches) detail += ", first at " + std::to_string(first_bad);
    return {mismatches == 0 && ms < 10000.0, detail};
}

Outcome no_empty_clusters() {
    std::size_t runs = 0, violations = 0, errors = 0;
    std::string first_error;
    auto check = [&](const Dataset& d) {
        ++runs;
        try {
            if (empty_cluster_count(eg_kmeans(d)) != 0) ++violations;
        } catch (const Error& e) {
            if (errors++ == 0) first_error = e.what();
        }
    };
    for (const auto& d : fixtures()) check(d);
    std::mt19937_64 gen(20240101);
    std::uniform_int_distribution<std::size_t> rows(4, 5000), dims(1, 20);
    std::normal_distribution<double> val(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = rows(gen), dim = dims(gen);
        const double s = scale(gen);
        std::vector<std::vector<double>> data(n, std::vector<double>(dim));
        for (auto& r : data) for (auto& x : r) x = s * val(gen);
        check(Dataset::from_rows("random", data));
    }
    std::string detail = std::to_string(runs) + " runs (sets A-G + 1000 random), " + std::to_string(violations) +
                         " with empty clusters, " + std::to_string(errors) + " errors";
    if (errors) detail += " (first: " + first_error + ")";
    return {violations == 0 && errors == 0, detail};
}

Outcome determinism() {
    std::size_t differing = 0;
    for (const auto& d : fixtures()) {
        const auto first = eg_kmeans(d);
        for (int i = 1; i < 100; ++i) {
            if (!(eg_kmeans(d) == first)) ++differing;
        }
    }
    ExperimentSpec spec;
    spec.datasets = load_manifest(kData / "fixtures" / "manifest.txt");
    spec.techniques = {Technique::EgKmeans};
    spec.record_timing = false;
    const auto report = run_experiment(spec);
    double worst_std = 0.0;
    for (const auto& r : report.rows) worst_std = std::max(worst_std, r.error ? 1.0 : r.db_index.std);
    return {differing == 0 && worst_std == 0.0,
            std::to_string(differing) + " differing results over 7 x 100 runs, largest EG DB std " +
                std::to_string(worst_std)};
}

Outcome lloyd_correctness() {
    std::size_t increases = 0, runs = 0;
    for (const auto& d : fixtures()) {
        for (auto init : {InitMethod::RandomPoints, InitMethod::KmeansPP}) {
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                for (std::size_t k = 2; k <= 4; ++k) {
                    LloydConfig c;
                    c.k = k;
                    c.seed = seed;
                    c.init = init;
                    const auto h = lloyd(d, c).sse_history();
                    ++runs;
                    for (std::size_t i = 1; i < h.size(); ++i) {
                        if (h[i] > h[i - 1] + kTolerance) ++increases;
                    }
                }
            }
        }
    }
    const std::vector<double> v{0, 1, 9, 10};
    const auto d = line(v);
    LloydConfig c;
    c.k = 2;
    c.init = InitMethod::Provided;
    const double got = sse(d, lloyd(d, c, std::vector<Centroid>{{{0.0}}, {{9.0}}}));
    double brute = 1e300;
    for (unsigned mask = 1; mask < 15; ++mask) {
        double s[2] = {0, 0}, n[2] = {0, 0};
        for (unsigned i = 0; i < 4; ++i) {
            s[(mask >> i) & 1] += v[i];
            n[(mask >> i) & 1] += 1;
        }
        double total = 0;
        for (unsigned i = 0; i < 4; ++i) {
            const unsigned g = (mask >> i) & 1;
            total += (v[i] - s[g] / n[g]) * (v[i] - s[g] / n[g]);
        }
        brute = std::min(brute, total);
    }
    const bool ok = increases == 0 && std::abs(got - 1.0) < 1e-9 && std::abs(got - brute) < 1e-9;
    return {ok, std::to_string(increases) + " SSE increases over " + std::to_string(runs) +
                    " fixture runs; {0,1,9,10} SSE " + fmt(got, 12) + ", brute force " + fmt(brute, 12)};
}

Outcome db_oracle() {
    const auto d = line({0, 2, 10, 12});
    const double two_pairs = db_index(d, ClusteringResult(Technique::KmeansRandom, {0, 0, 1, 1},
                                                          {{{1.0}}, {{11.0}}}, 0, 0));
    const auto s = line({1, 5});
    const double singles = db_index(s, ClusteringResult(Technique::KmeansRandom, {0, 1}, {{{1.0}}, {{5.0}}}, 0, 0));

    std::mt19937_64 gen(77);
    std::normal_distribution<double> val(0.0, 1.0);
    std::vector<std::vector<double>> x(60, std::vector<double>(3));
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (auto& v : x[i]) v = val(gen) + 5.0 * static_cast<double>(i % 3);
    }
    const auto base = Dataset::from_rows("blobs", x);
    const auto result = eg_kmeans(base);
    const double db = db_index(base, result);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<double>> q(3, std::vector<double>(3));
        for (auto& r : q) for (auto& v : r) v = val(gen);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                double dot = 0;
                for (std::size_t f = 0; f < 3; ++f) dot += q[i][f] * q[j][f];
                for (std::size_t f = 0; f < 3; ++f) q[i][f] -= dot * q[j][f];
            }
            double norm = 0;
            for (double v : q[i]) norm += v * v;
            for (double& v : q[i]) v /= std::sqrt(norm);
        }
        std::vector<std::vector<double>> y(x.size(), std::vector<double>(3, 0.0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t r = 0; r < 3; ++r) {
                for (std::size_t f = 0; f < 3; ++f) y[i][r] += q[r][f] * x[i][f];
            }
        }
        std::vector<Centroid> rc;
        for (const auto& c : result.centroids()) {
            Centroid out{std::vector<double>(3, 0.0)};
            for (std::size_t r = 0; r < 3; ++r) {
                for (std::size_t f = 0; f < 3; ++f) out.coords[r] += q[r][f] * c.coords[f];
            }
            rc.push_back(out);
        }
        const ClusteringResult rotated(Technique::KmeansRandom, result.assignments(), rc, 0, 0);
        worst = std::max(worst, std::abs(db_index(Dataset::from_rows("rot", y), rotated) - db));
    }
    const bool ok = std::abs(two_pairs - 0.2) < 1e-9 && singles == 0.0 && worst < 1e-9;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", worst);
    return {ok, "{0,2}/{10,12} DB " + fmt(two_pairs, 12) + ", singletons DB " + fmt(singles, 1) +
                    ", largest change over 100 rotations " + buf};
}

Outcome directional() {
    ExperimentSpec spec;
    spec.datasets = load_manifest(kData / "uci" / "manifest.txt");
    spec.techniques = {Technique::EgKmeans, Technique::KmeansRandom};
    spec.repetitions = 10;
    spec.record_timing = false;
    const auto start = Clock::now();
    const auto report = run_experiment(spec);
    render_markdown(report);
    const double seconds = ms_since(start) / 1000.0;

    std::size_t compared = 0, eg_wins = 0;
    std::string per;
    for (const auto& e : spec.datasets) {
        const auto* eg = report.find(e.name, Technique::EgKmeans);
        const auto* km = report.find(e.name, Technique::KmeansRandom);
        if (!eg || !km || eg->error || km->error) continue;
        ++compared;
        const bool win = eg->db_index.mean <= km->db_index.mean;
        if (win) ++eg_wins;
        per += (per.empty() ? "" : "; ") + e.name + " " + fmt(eg->db_index.mean) + (win ? " <= " : " > ") +
               fmt(km->db_index.mean);
    }
    const std::vector<std::string> required{"Glass", "Haberman", "Yeast", "Liver Disorder"};
    bool have_required = true;
    for (const auto& name : required) {
        const auto* r = report.find(name, Technique::EgKmeans);
        if (!r || r->error) have_required = false;
    }
    const bool ok = have_required && 2 * eg_wins > compared && seconds < 120.0;
    return {ok, "EG <= KMEANS_RANDOM on " + std::to_string(eg_wins) + " of " + std::to_string(compared) +
                    " datasets, " + fmt(seconds, 2) + " s (" + per + ")"};
}

Outcome ingestion_counts() {
    struct Expect {
        const char* file;
        const char* label;
        std::size_t raw;
        std::size_t kept;
    };
    const std::vector<Expect> expected{{"mammographic_raw.csv", "severity", 961, 830},
                                       {"dermatology_raw.csv", "class", 366, 358}};
    bool ok = true;
    std::string detail;
    for (const auto& e : expected) {
        const auto path = kData / "uci" / e.file;
        if (!detail.empty()) detail += "; ";
        if (!fs::exists(path)) {
            ok = false;
            detail += std::string(e.file) + " not available";
            continue;
        }
        CsvSchema schema;
        schema.label_column = ColumnRef::by_name(e.label);
        const auto load = read_csv(path, schema);
        const bool match = load.source_rows == e.raw && load.data.size() == e.kept;
        ok = ok && match;
        detail += std::string(e.file) + " " + std::to_string(load.source_rows) + " -> " +
                  std::to_string(load.data.size()) + " rows (want " + std::to_string(e.raw) + " -> " +
                  std::to_string(e.kept) + ")";
    }
    return {ok, detail};
}

Outcome normalization() {
    std::vector<Dataset> sets = fixtures();
    for (const auto& e : load_manifest(kData / "uci" / "manifest.txt")) sets.push_back(load_csv(e.path, e.schema));
    double worst_mean = 0.0, worst_std = 0.0;
    std::size_t columns = 0;
    for (const auto& raw : sets) {
        const auto z = zscore_normalize(raw);
        const double n = static_cast<double>(z.size());
        for (std::size_t c = 0; c < z.dim; ++c) {
            double lo = raw.points[0].features[c], hi = lo;
            for (const auto& p : raw.points) {
                lo = std::min(lo, p.features[c]);
                hi = std::max(hi, p.features[c]);
            }
            if (lo == hi) continue;
            ++columns;
            double sum = 0.0;
            for (const auto& p : z.points) sum += p.features[c];
            const double mean = sum / n;
            double ss = 0.0;
            for (const auto& p : z.points) ss += (p.features[c] - mean) * (p.features[c] - mean);
            worst_mean = std::max(worst_mean, std::abs(mean));
            worst_std = std::max(worst_std, std::abs(std::sqrt(ss / n) - 1.0));
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu columns over %zu datasets, max |mean| %.2e, max |std - 1| %.2e", columns,
                  sets.size(), worst_mean, worst_std);
    return {worst_mean < 1e-9 && worst_std < 1e-9, buf};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"canonical trace on set E", canonical_trace},
        {"worked example on 1..10", worked_example},
        {"divisor oracle", divisor_oracle},
        {"no empty clusters", no_empty_clusters},
        {"determinism", determinism},
        {"Lloyd correctness", lloyd_correctness},
        {"DB oracle", db_oracle},
        {"directional benchmark comparison", directional},
        {"ingestion counts", ingestion_counts},
        {"normalization", normalization},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
