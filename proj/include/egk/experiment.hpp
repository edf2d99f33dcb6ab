#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "egk/baselines.hpp"
#include "egk/core.hpp"
#include "egk/egkmeans.hpp"
#include "egk/ingest.hpp"

namespace egk {

inline constexpr const char* kToolVersion = "egkmeans 1.0.0";

// One stanza of a dataset manifest:
//
//   [dataset]
//   name      = Haberman
//   path      = uci/haberman.csv      (relative to the manifest)
//   features  = *                     (names or 0-based indices, comma-separated)
//   label     = survival
//   classes   = 3                     (K for the baseline techniques)
//   missing   = ?, NA, <empty>
//   delimiter = ,                     (or "tab", ";")
struct ManifestEntry {
    std::string name;
    std::filesystem::path path;
    CsvSchema schema;
    std::optional<std::size_t> classes;
};

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
std::string format_manifest(const std::vector<ManifestEntry>& entries,
                            const std::filesystem::path& base_dir);

enum class OutputFormat { Markdown, Csv, PlotData };
OutputFormat output_format_from_string(std::string_view s);

struct ExperimentSpec {
    std::vector<ManifestEntry> datasets;
    std::vector<Technique> techniques{Technique::EgKmeans, Technique::KmeansRandom};
    std::size_t repetitions = 10;
    std::uint64_t base_seed = 0;
    std::filesystem::path output_dir;
    std::vector<OutputFormat> output_formats{OutputFormat::Markdown, OutputFormat::Csv,
                                             OutputFormat::PlotData};
    EgConfig eg;
    std::size_t lloyd_max_iterations = 100;
    double lloyd_tolerance = 1e-6;
    // Replaces the manifest class count as K for the baselines.
    std::optional<std::size_t> baseline_k;
    bool normalize = true;
    // Off makes reports byte-reproducible (wall time is left out).
    bool record_timing = true;

    void validate() const;
};

struct Stat {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation over repetitions
};

struct ReportRow {
    std::string dataset;
    Technique technique = Technique::EgKmeans;
    std::optional<std::string> error;  // set when no repetition succeeded
    std::size_t repetitions = 0;       // successful repetitions
    std::size_t failures = 0;
    Stat db_index;
    Stat sse;
    Stat wall_time_ms;
    Stat empty_clusters;
    Stat k_used;
    std::vector<double> db_values;  // per successful repetition, in order
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    bool timing = true;

    const ReportRow* find(std::string_view dataset, Technique t) const;
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

std::string render_markdown(const ExperimentReport& report);
std::string render_csv(const ExperimentReport& report);
std::string render_plot_data(const ExperimentReport& report);

// Writes one rendering to `file`; throws IoError when the path is not writable.
void emit_table(const ExperimentReport& report, OutputFormat format, const std::filesystem::path& file);
void emit_plot_data(const ExperimentReport& report, const std::filesystem::path& file);

// Writes every format listed in the spec into spec.output_dir; returns the files written.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report, const ExperimentSpec& spec);

struct ExplainOptions {
    EgConfig eg;
    std::optional<std::string> label_column;
    char delimiter = ',';
    bool normalize = false;
};

// Runs the EG pipeline on a CSV and returns the full trace as text.
std::string explain(const std::filesystem::path& data, const ExplainOptions& options = {});

struct FixtureSet {
    std::string name;                // "A" .. "G"
    std::vector<std::string> cells;  // values as written, "2.0" included
    std::vector<double> values() const;
};

const std::vector<FixtureSet>& point_set_fixtures();
Dataset fixture_dataset(const FixtureSet& set);

// Writes set_a.csv .. set_g.csv and a manifest (K = 2 for the baselines) into dir.
std::vector<std::filesystem::path> write_fixtures(const std::filesystem::path& dir);

}  // namespace egk
