// Command-line front end: run experiments, explain the EG trace of one
// dataset, and write the bundled data point sets.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant violation.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "egk/error.hpp"
#include "egk/experiment.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EG K-MEANS clustering and benchmark harness"};
    app.set_version_flag("--version", egk::kToolVersion);
    app.require_subcommand(1);

    std::string manifest;
    std::string techniques = "EG_KMEANS,KMEANS_RANDOM";
    std::size_t reps = 10;
    std::uint64_t seed = 0;
    std::string out_dir = "results";
    std::string formats = "markdown,csv,plotdata";
    std::optional<std::size_t> baseline_k;
    std::size_t refine = 0;
    bool no_timing = false;
    bool no_normalize = false;

    auto* run = app.add_subcommand("run", "Run every technique on every manifest dataset");
    run->add_option("--manifest", manifest, "Dataset manifest file")->required();
    run->add_option("--techniques", techniques, "Comma list of EG_KMEANS, KMEANS_RANDOM, KMEANS_PP");
    run->add_option("--reps", reps, "Repetitions per dataset and technique")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Base seed; repetition r uses seed + r");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--formats", formats, "Comma list of markdown, csv, plotdata");
    run->add_option("--k", baseline_k, "K for the baselines instead of the manifest class count");
    run->add_option("--refine", refine, "Lloyd rounds after EG seeding (0 = single assignment pass)");
    run->add_flag("--no-timing", no_timing, "Leave wall time out so reports are byte-reproducible");
    run->add_flag("--no-normalize", no_normalize, "Skip z-score normalization");

    std::string data_path;
    std::string key;
    std::int64_t ac = 10;
    std::optional<std::string> label;
    std::optional<std::size_t> k_override;
    bool normalize = false;
    std::string delimiter = ",";
    auto* explain = app.add_subcommand("explain", "Print the EG K-MEANS trace for one CSV file");
    explain->add_option("--data", data_path, "CSV file with a header row")->required();
    explain->add_option("--key", key, "Sort key: VALUE_1D, L2_NORM or FEATURE_SUM (default by dimension)");
    explain->add_option("--ac", ac, "Arbitrary constant, a positive multiple of 10");
    explain->add_option("--label", label, "Column to exclude from the features");
    explain->add_option("--k", k_override, "Bypass the automatic K");
    explain->add_option("--delimiter", delimiter, "Field delimiter");
    explain->add_flag("--normalize", normalize, "Z-score the features first");

    std::string fixtures_dir = "data/fixtures";
    auto* fixtures = app.add_subcommand("fixtures", "Write the bundled data point sets A-G and their manifest");
    fixtures->add_option("--out", fixtures_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*run) {
            egk::ExperimentSpec spec;
            spec.datasets = egk::load_manifest(manifest);
            spec.techniques.clear();
            for (const auto& t : split(techniques)) spec.techniques.push_back(egk::technique_from_string(t));
            spec.repetitions = reps;
            spec.base_seed = seed;
            spec.output_dir = out_dir;
            spec.output_formats.clear();
            for (const auto& f : split(formats)) spec.output_formats.push_back(egk::output_format_from_string(f));
            spec.baseline_k = baseline_k;
            spec.eg.refinement_iterations = refine;
            spec.record_timing = !no_timing;
            spec.normalize = !no_normalize;

            const auto report = egk::run_experiment(spec);
            for (const auto& path : egk::write_report(report, spec)) std::cout << "wrote " << path.string() << '\n';
            for (const auto& row : report.rows) {
                if (row.error) std::cerr << "warning: " << row.dataset << " / " << egk::to_string(row.technique) << ": " << *row.error << '\n';
            }
        } else if (*explain) {
            egk::ExplainOptions opts;
            opts.eg.arbitrary_constant = ac;
            if (!key.empty()) opts.eg.sort_key = egk::sort_key_from_string(key);
            opts.eg.k_override = k_override;
            opts.label_column = label;
            opts.normalize = normalize;
            if (delimiter == "tab") delimiter = "\t";
            if (delimiter.size() != 1) throw egk::UsageError("delimiter must be one character");
            opts.delimiter = delimiter.front();
            std::cout << egk::explain(data_path, opts);
        } else if (*fixtures) {
            for (const auto& path : egk::write_fixtures(fixtures_dir)) std::cout << "wrote " << path.string() << '\n';
        }
    } catch (const egk::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const egk::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const egk::InvariantViolation& e) {
        std::cerr << "internal invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    }
    return 0;
}
