#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "egk/baselines.hpp"
#include "egk/error.hpp"
#include "egk/experiment.hpp"
#include "egk/metrics.hpp"

namespace py = pybind11;
using namespace egk;

namespace {

Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::string& name,
                     const std::optional<std::vector<std::string>>& labels) {
    Dataset d = Dataset::from_rows(name, rows);
    d.labels = labels;
    d.validate();
    return d;
}

void bind_types(py::module_& m) {
    py::enum_<Technique>(m, "Technique")
        .value("EG_KMEANS", Technique::EgKmeans)
        .value("KMEANS_RANDOM", Technique::KmeansRandom)
        .value("KMEANS_PP", Technique::KmeansPP);
    py::enum_<SortKey>(m, "SortKey")
        .value("VALUE_1D", SortKey::Value1D)
        .value("L2_NORM", SortKey::L2Norm)
        .value("FEATURE_SUM", SortKey::FeatureSum);
    py::enum_<CentroidIndexPolicy>(m, "CentroidIndexPolicy")
        .value("CLAMP_TO_CHUNK", CentroidIndexPolicy::ClampToChunk)
        .value("ERROR", CentroidIndexPolicy::Error);
    py::enum_<Parity>(m, "Parity").value("EVEN", Parity::Even).value("ODD", Parity::Odd);
    py::enum_<InitMethod>(m, "InitMethod")
        .value("RANDOM_POINTS", InitMethod::RandomPoints)
        .value("KMEANS_PP", InitMethod::KmeansPP)
        .value("PROVIDED", InitMethod::Provided);
    py::enum_<EmptyClusterPolicy>(m, "EmptyClusterPolicy")
        .value("RESEED_FARTHEST", EmptyClusterPolicy::ReseedFarthest)
        .value("DROP", EmptyClusterPolicy::Drop);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("rows"), py::arg("name") = "data",
             py::arg("labels") = std::nullopt)
        .def_readonly("name", &Dataset::name)
        .def_readonly("dim", &Dataset::dim)
        .def_readonly("feature_names", &Dataset::feature_names)
        .def_readonly("labels", &Dataset::labels)
        .def("rows", [](const Dataset& d) {
            std::vector<std::vector<double>> rows;
            for (const auto& p : d.points) rows.push_back(p.features);
            return rows;
        })
        .def("__len__", &Dataset::size);

    py::class_<DivisorTrace>(m, "DivisorTrace")
        .def_readonly("total_points", &DivisorTrace::total_points)
        .def_readonly("t_s", &DivisorTrace::t_s)
        .def_readonly("d_even", &DivisorTrace::d_even)
        .def_readonly("d_odd", &DivisorTrace::d_odd)
        .def_readonly("k_candidates", &DivisorTrace::k_candidates)
        .def_readonly("k_f", &DivisorTrace::k_f)
        .def_readonly("fallback_used", &DivisorTrace::fallback_used)
        .def_readonly("seed_rank", &DivisorTrace::seed_rank)
        .def_readonly("chunk_sizes", &DivisorTrace::chunk_sizes)
        .def_readonly("seed_point_ids", &DivisorTrace::seed_point_ids);

    py::class_<ClusteringResult>(m, "ClusteringResult")
        .def_property_readonly("k", &ClusteringResult::k)
        .def_property_readonly("technique", &ClusteringResult::technique)
        .def_property_readonly("assignments", &ClusteringResult::assignments)
        .def_property_readonly("centroids", [](const ClusteringResult& r) {
            std::vector<std::vector<double>> out;
            for (const auto& c : r.centroids()) out.push_back(c.coords);
            return out;
        })
        .def_property_readonly("seed", &ClusteringResult::seed)
        .def_property_readonly("iterations", &ClusteringResult::iterations)
        .def_property_readonly("trace", &ClusteringResult::trace)
        .def_property_readonly("sse_history", &ClusteringResult::sse_history)
        .def("cluster_sizes", &ClusteringResult::cluster_sizes)
        .def("__eq__", [](const ClusteringResult& a, const ClusteringResult& b) { return a == b; });

    py::class_<EgConfig>(m, "EgConfig")
        .def(py::init<>())
        .def_readwrite("arbitrary_constant", &EgConfig::arbitrary_constant)
        .def_readwrite("sort_key", &EgConfig::sort_key)
        .def_readwrite("centroid_index_policy", &EgConfig::centroid_index_policy)
        .def_readwrite("refinement_iterations", &EgConfig::refinement_iterations)
        .def_readwrite("k_override", &EgConfig::k_override)
        .def_readwrite("preprocess", &EgConfig::preprocess);

    py::class_<LloydConfig>(m, "LloydConfig")
        .def(py::init<>())
        .def_readwrite("k", &LloydConfig::k)
        .def_readwrite("max_iterations", &LloydConfig::max_iterations)
        .def_readwrite("convergence_tol", &LloydConfig::convergence_tol)
        .def_readwrite("seed", &LloydConfig::seed)
        .def_readwrite("init", &LloydConfig::init)
        .def_readwrite("empty_cluster_policy", &LloydConfig::empty_cluster_policy);

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("db_index", &MetricsReport::db_index)
        .def_readonly("sse", &MetricsReport::sse)
        .def_readonly("empty_clusters", &MetricsReport::empty_clusters)
        .def_readonly("k_effective", &MetricsReport::k_effective)
        .def_readonly("outlier_ids", &MetricsReport::outlier_ids);
}

std::vector<Centroid> to_centroids(const std::vector<std::vector<double>>& rows) {
    std::vector<Centroid> out;
    for (const auto& r : rows) out.push_back(Centroid{r});
    return out;
}

std::vector<std::vector<double>> from_centroids(const std::vector<Centroid>& cs) {
    std::vector<std::vector<double>> out;
    for (const auto& c : cs) out.push_back(c.coords);
    return out;
}

}  // namespace

PYBIND11_MODULE(_egk, m) {
    m.doc() = "EG K-MEANS clustering, Lloyd baselines and cluster-quality metrics";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    auto data_error = py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", data_error.ptr());
    py::register_exception<MetricUndefinedError>(m, "MetricUndefinedError", data_error.ptr());
    py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());

    bind_types(m);

    m.def("euclidean_distance", [](const std::vector<double>& a, const std::vector<double>& b) {
        return euclidean_distance(a, b);
    });
    m.def("integerize", [](const std::vector<double>& keys, std::int64_t a_c) { return integerize(keys, a_c); },
          py::arg("keys"), py::arg("a_c") = 10);
    m.def("divisor_sequence", &divisor_sequence, py::arg("t_s"), py::arg("parity"));
    m.def(
        "select_k",
        [](const std::vector<std::size_t>& even, const std::vector<std::size_t>& odd) {
            const auto s = select_k(even, odd);
            return py::make_tuple(s.k_f, s.fallback_used);
        },
        py::arg("d_even"), py::arg("d_odd"));

    m.def("eg_kmeans", &eg_kmeans, py::arg("dataset"), py::arg("config") = EgConfig{});
    m.def(
        "lloyd",
        [](const Dataset& d, const LloydConfig& c, std::optional<std::vector<std::vector<double>>> init) {
            std::optional<std::vector<Centroid>> provided;
            if (init) provided = to_centroids(*init);
            return lloyd(d, c, provided);
        },
        py::arg("dataset"), py::arg("config"), py::arg("provided") = std::nullopt);
    m.def("random_init", [](const Dataset& d, std::size_t k, std::uint64_t seed) {
        return from_centroids(random_init(d, k, seed));
    });
    m.def("kmeanspp_init", [](const Dataset& d, std::size_t k, std::uint64_t seed) {
        return from_centroids(kmeanspp_init(d, k, seed));
    });

    m.def("db_index", &db_index);
    m.def("sse", &sse);
    m.def("empty_cluster_count", &empty_cluster_count);
    m.def("detect_outliers", &detect_outliers, py::arg("dataset"), py::arg("result"),
          py::arg("threshold_sigma") = 3.0);
    m.def("evaluate", &evaluate, py::arg("dataset"), py::arg("result"), py::arg("threshold_sigma") = 3.0);

    m.def(
        "load_csv",
        [](const std::filesystem::path& path, std::optional<std::string> label,
           std::vector<std::string> missing, char delimiter) {
            CsvSchema schema;
            if (label) schema.label_column = ColumnRef::parse(*label);
            schema.missing_markers = std::move(missing);
            schema.delimiter = delimiter;
            return load_csv(path, schema);
        },
        py::arg("path"), py::arg("label") = std::nullopt,
        py::arg("missing") = std::vector<std::string>{"", "?", "NA"}, py::arg("delimiter") = ',');
    m.def("zscore_normalize", &zscore_normalize);

    m.def(
        "explain",
        [](const std::filesystem::path& path, std::optional<std::string> key, std::int64_t ac, bool normalize) {
            ExplainOptions o;
            if (key) o.eg.sort_key = sort_key_from_string(*key);
            o.eg.arbitrary_constant = ac;
            o.normalize = normalize;
            return explain(path, o);
        },
        py::arg("path"), py::arg("key") = std::nullopt, py::arg("ac") = 10, py::arg("normalize") = false);

    m.def(
        "run_experiment",
        [](const std::filesystem::path& manifest, const std::vector<std::string>& techniques,
           std::size_t reps, std::uint64_t seed, bool timing) {
            ExperimentSpec spec;
            spec.datasets = load_manifest(manifest);
            spec.techniques.clear();
            for (const auto& t : techniques) spec.techniques.push_back(technique_from_string(t));
            spec.repetitions = reps;
            spec.base_seed = seed;
            spec.record_timing = timing;
            const auto report = run_experiment(spec);
            py::list rows;
            for (const auto& r : report.rows) {
                py::dict row;
                row["dataset"] = r.dataset;
                row["technique"] = std::string(to_string(r.technique));
                row["error"] = r.error;
                row["repetitions"] = r.repetitions;
                row["db_mean"] = r.db_index.mean;
                row["db_std"] = r.db_index.std;
                row["sse_mean"] = r.sse.mean;
                row["k_used"] = r.k_used.mean;
                row["empty_clusters"] = r.empty_clusters.mean;
                rows.append(row);
            }
            return rows;
        },
        py::arg("manifest"), py::arg("techniques") = std::vector<std::string>{"EG_KMEANS", "KMEANS_RANDOM"},
        py::arg("reps") = 10, py::arg("seed") = 0, py::arg("timing") = true);
}
