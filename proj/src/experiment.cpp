#include "egk/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "egk/error.hpp"
#include "egk/metrics.hpp"
#include "egk/rng.hpp"

namespace egk {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) out.push_back(trim(item));
    return out;
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// Shortest text that reads back to the same double.
std::string full(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string md_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out;
}

char parse_delimiter(const std::string& v) {
    if (v == "tab" || v == "\\t") return '\t';
    if (v.size() == 1) return v.front();
    throw UsageError("delimiter must be a single character or 'tab', got '" + v + "'");
}

std::string delimiter_name(char d) { return d == '\t' ? "tab" : std::string(1, d); }

Stat summarize(const std::vector<double>& v) {
    Stat s;
    if (v.empty()) return s;
    // shifted by the first value, so identical runs give an exact mean and zero std
    double shift = 0.0;
    for (double x : v) shift += x - v.front();
    s.mean = v.front() + shift / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size()));
    return s;
}

struct MetricColumn {
    const char* name;
    Stat ReportRow::*stat;
};

std::vector<MetricColumn> metric_columns(bool timing) {
    std::vector<MetricColumn> cols{{"db_index", &ReportRow::db_index}, {"sse", &ReportRow::sse}};
    if (timing) cols.push_back({"wall_time_ms", &ReportRow::wall_time_ms});
    cols.push_back({"empty_clusters", &ReportRow::empty_clusters});
    cols.push_back({"k_used", &ReportRow::k_used});
    return cols;
}

std::string sort_key_label(const EgConfig& eg) {
    return eg.sort_key ? std::string(to_string(*eg.sort_key)) : "AUTO (VALUE_1D if dim = 1, else L2_NORM)";
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write '" + file.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + file.string() + "'");
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    bool in_stanza = false;

    auto finish = [&] {
        if (!in_stanza) return;
        const auto& e = entries.back();
        if (e.name.empty()) throw UsageError("manifest stanza " + std::to_string(entries.size()) + " has no name");
        if (e.path.empty()) throw UsageError("manifest entry '" + e.name + "' has no path");
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string text = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (text.empty()) continue;
        if (text == "[dataset]") {
            finish();
            entries.emplace_back();
            in_stanza = true;
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw UsageError("manifest line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        if (!in_stanza) {
            throw UsageError("manifest line " + std::to_string(lineno) + ": key outside a [dataset] stanza");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        auto& e = entries.back();
        if (key == "name") {
            e.name = value;
        } else if (key == "path") {
            const std::filesystem::path p(value);
            e.path = p.is_absolute() ? p : base_dir / p;
        } else if (key == "features") {
            e.schema.feature_columns.clear();
            for (const auto& item : split_list(value)) e.schema.feature_columns.push_back(ColumnRef::parse(item));
        } else if (key == "label") {
            if (value.empty()) {
                e.schema.label_column.reset();
            } else {
                e.schema.label_column = ColumnRef::parse(value);
            }
        } else if (key == "classes") {
            try {
                const long long k = std::stoll(value);
                if (k <= 0) throw std::invalid_argument("nonpositive");
                e.classes = static_cast<std::size_t>(k);
            } catch (const std::exception&) {
                throw UsageError("manifest line " + std::to_string(lineno) + ": classes must be a positive integer");
            }
        } else if (key == "missing") {
            e.schema.missing_markers.clear();
            for (const auto& item : split_list(value)) {
                e.schema.missing_markers.push_back(item == "<empty>" ? std::string() : item);
            }
        } else if (key == "delimiter") {
            e.schema.delimiter = parse_delimiter(value);
        } else {
            throw UsageError("manifest line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    finish();
    return entries;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
    return parse_manifest(in, path.parent_path());
}

std::string format_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& base_dir) {
    std::ostringstream os;
    for (const auto& e : entries) {
        os << "[dataset]\n";
        os << "name      = " << e.name << '\n';
        os << "path      = " << std::filesystem::relative(e.path, base_dir).generic_string() << '\n';
        os << "features  = ";
        for (std::size_t i = 0; i < e.schema.feature_columns.size(); ++i) {
            const auto& c = e.schema.feature_columns[i];
            if (i) os << ", ";
            os << (c.name ? *c.name : std::to_string(*c.index));
        }
        os << '\n';
        if (e.schema.label_column) {
            const auto& c = *e.schema.label_column;
            os << "label     = " << (c.name ? *c.name : std::to_string(*c.index)) << '\n';
        }
        if (e.classes) os << "classes   = " << *e.classes << '\n';
        os << "missing   = ";
        for (std::size_t i = 0; i < e.schema.missing_markers.size(); ++i) {
            if (i) os << ", ";
            os << (e.schema.missing_markers[i].empty() ? "<empty>" : e.schema.missing_markers[i]);
        }
        os << '\n';
        os << "delimiter = " << delimiter_name(e.schema.delimiter) << "\n\n";
    }
    return os.str();
}

OutputFormat output_format_from_string(std::string_view s) {
    if (s == "markdown" || s == "md") return OutputFormat::Markdown;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "plotdata" || s == "plot") return OutputFormat::PlotData;
    throw UsageError("unknown output format '" + std::string(s) + "'");
}

void ExperimentSpec::validate() const {
    if (repetitions == 0) throw UsageError("repetitions must be at least 1");
    if (techniques.empty()) throw UsageError("no techniques selected");
    if (datasets.empty()) throw UsageError("no datasets in the experiment");
    if (baseline_k && *baseline_k == 0) throw UsageError("baseline K must be positive");
    eg.validate();
}

const ReportRow* ExperimentReport::find(std::string_view dataset, Technique t) const {
    for (const auto& r : rows) {
        if (r.dataset == dataset && r.technique == t) return &r;
    }
    return nullptr;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();

    ExperimentReport report;
    report.timing = spec.record_timing;
    std::string techniques;
    for (auto t : spec.techniques) techniques += (techniques.empty() ? "" : ",") + std::string(to_string(t));
    report.metadata = {
        {"tool", kToolVersion},
        {"prng", Xorshift64Star::kName},
        {"normalization", spec.normalize ? "z-score, population standard deviation" : "none"},
        {"missing values", "rows with a missing feature are dropped"},
        {"techniques", techniques},
        {"repetitions", std::to_string(spec.repetitions)},
        {"base_seed", std::to_string(spec.base_seed)},
        {"seed per repetition", "base_seed + repetition index (EG ignores it)"},
        {"eg.arbitrary_constant", std::to_string(spec.eg.arbitrary_constant)},
        {"eg.sort_key", sort_key_label(spec.eg)},
        {"eg.refinement_iterations", std::to_string(spec.eg.refinement_iterations)},
        {"baseline K", spec.baseline_k ? std::to_string(*spec.baseline_k) : "manifest class count"},
        {"lloyd.max_iterations", std::to_string(spec.lloyd_max_iterations)},
        {"lloyd.tolerance", full(spec.lloyd_tolerance)},
        {"lloyd.empty_clusters", "reseed at farthest point"},
        {"aggregation", "mean and population std over successful repetitions"},
    };

    for (const auto& entry : spec.datasets) {
        Dataset data;
        std::optional<std::string> load_error;
        try {
            data = load_csv(entry.path, entry.schema);
            data.name = entry.name;
            if (spec.normalize) data = zscore_normalize(data);
        } catch (const Error& e) {
            load_error = e.what();
        }

        for (auto technique : spec.techniques) {
            ReportRow row;
            row.dataset = entry.name;
            row.technique = technique;
            if (load_error) {
                row.error = *load_error;
                report.rows.push_back(std::move(row));
                continue;
            }
            std::vector<double> db, sse_v, wall, empty, k_used;
            std::string first_error;
            for (std::size_t r = 0; r < spec.repetitions; ++r) {
                const std::uint64_t seed = spec.base_seed + r;
                try {
                    const auto start = std::chrono::steady_clock::now();
                    std::optional<ClusteringResult> result;
                    if (technique == Technique::EgKmeans) {
                        result = eg_kmeans(data, spec.eg);
                    } else {
                        const auto k = spec.baseline_k ? spec.baseline_k : entry.classes;
                        if (!k) throw UsageError("no class count in the manifest for '" + entry.name + "'");
                        LloydConfig lc;
                        lc.k = *k;
                        lc.seed = seed;
                        lc.max_iterations = spec.lloyd_max_iterations;
                        lc.convergence_tol = spec.lloyd_tolerance;
                        lc.init = technique == Technique::KmeansPP ? InitMethod::KmeansPP
                                                                   : InitMethod::RandomPoints;
                        result = lloyd(data, lc);
                    }
                    const auto stop = std::chrono::steady_clock::now();
                    const auto m = evaluate(data, *result);
                    db.push_back(m.db_index);
                    sse_v.push_back(m.sse);
                    wall.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
                    empty.push_back(static_cast<double>(m.empty_clusters));
                    k_used.push_back(static_cast<double>(m.k_effective));
                } catch (const Error& e) {
                    if (first_error.empty()) first_error = e.what();
                    ++row.failures;
                }
            }
            row.repetitions = db.size();
            if (db.empty()) {
                row.error = first_error;
            } else {
                row.db_index = summarize(db);
                row.sse = summarize(sse_v);
                row.wall_time_ms = summarize(wall);
                row.empty_clusters = summarize(empty);
                row.k_used = summarize(k_used);
                row.db_values = std::move(db);
            }
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

std::string render_markdown(const ExperimentReport& report) {
    if (report.rows.empty()) throw UsageError("empty report");
    std::vector<std::string> datasets;
    std::vector<Technique> techniques;
    for (const auto& r : report.rows) {
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
        if (std::find(techniques.begin(), techniques.end(), r.technique) == techniques.end()) {
            techniques.push_back(r.technique);
        }
    }

    std::ostringstream os;
    os << "# Clustering comparison\n\n";
    for (const auto& [k, v] : report.metadata) os << "- " << k << ": " << v << '\n';
    os << "\nCells are mean ± std over successful repetitions; failed repetitions are listed as "
          "(n/failed). Lowest mean DB index per dataset in bold.\n";

    for (const auto& col : metric_columns(report.timing)) {
        const bool is_db = std::string_view(col.name) == "db_index";
        os << "\n## " << col.name << "\n\n| dataset |";
        for (auto t : techniques) os << ' ' << to_string(t) << " |";
        os << "\n|---|";
        for (std::size_t i = 0; i < techniques.size(); ++i) os << "---|";
        os << '\n';
        for (const auto& ds : datasets) {
            std::optional<double> best;
            if (is_db) {
                for (auto t : techniques) {
                    const auto* r = report.find(ds, t);
                    if (r && !r->error) {
                        const double m = std::stod(fixed4(r->db_index.mean));
                        best = best ? std::min(*best, m) : m;
                    }
                }
            }
            os << "| " << md_escape(ds) << " |";
            for (auto t : techniques) {
                const auto* r = report.find(ds, t);
                if (!r) {
                    os << " - |";
                    continue;
                }
                if (r->error) {
                    os << " ERROR: " << md_escape(*r->error) << " |";
                    continue;
                }
                const Stat& s = (*r).*(col.stat);
                std::string cell = fixed4(s.mean) + " ± " + fixed4(s.std);
                if (is_db && best && std::stod(fixed4(s.mean)) == *best) cell = "**" + cell + "**";
                if (r->failures) cell += " (" + std::to_string(r->repetitions) + "/" + std::to_string(r->failures) + ")";
                os << ' ' << cell << " |";
            }
            os << '\n';
        }
    }
    return os.str();
}

std::string render_csv(const ExperimentReport& report) {
    if (report.rows.empty()) throw UsageError("empty report");
    std::ostringstream os;
    os << "dataset,technique,metric,mean,std,reps\n";
    for (const auto& r : report.rows) {
        if (r.error) {
            os << csv_quote(r.dataset) << ',' << to_string(r.technique) << ','
               << csv_quote("ERROR: " + *r.error) << ",,,0\n";
            continue;
        }
        for (const auto& col : metric_columns(report.timing)) {
            const Stat& s = r.*(col.stat);
            os << csv_quote(r.dataset) << ',' << to_string(r.technique) << ',' << col.name << ','
               << full(s.mean) << ',' << full(s.std) << ',' << r.repetitions << '\n';
        }
    }
    return os.str();
}

std::string render_plot_data(const ExperimentReport& report) {
    if (report.rows.empty()) throw UsageError("empty report");
    std::ostringstream os;
    os << "dataset,technique,mean_db\n";
    std::vector<Technique> order;
    std::map<Technique, std::pair<double, std::size_t>> totals;
    for (const auto& r : report.rows) {
        if (std::find(order.begin(), order.end(), r.technique) == order.end()) order.push_back(r.technique);
        if (r.error) continue;
        os << csv_quote(r.dataset) << ',' << to_string(r.technique) << ',' << full(r.db_index.mean) << '\n';
        auto& [sum, n] = totals[r.technique];
        sum += r.db_index.mean;
        ++n;
    }
    for (auto t : order) {
        const auto it = totals.find(t);
        if (it == totals.end()) continue;
        os << "AVERAGE," << to_string(t) << ','
           << full(it->second.first / static_cast<double>(it->second.second)) << '\n';
    }
    return os.str();
}

void emit_table(const ExperimentReport& report, OutputFormat format, const std::filesystem::path& file) {
    switch (format) {
        case OutputFormat::Markdown: write_text(file, render_markdown(report)); return;
        case OutputFormat::Csv: write_text(file, render_csv(report)); return;
        case OutputFormat::PlotData: write_text(file, render_plot_data(report)); return;
    }
}

void emit_plot_data(const ExperimentReport& report, const std::filesystem::path& file) {
    write_text(file, render_plot_data(report));
}

std::vector<std::filesystem::path> write_report(const ExperimentReport& report, const ExperimentSpec& spec) {
    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec) throw IoError("cannot create '" + spec.output_dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> written;
    for (auto f : spec.output_formats) {
        std::filesystem::path file = spec.output_dir;
        switch (f) {
            case OutputFormat::Markdown: file /= "report.md"; break;
            case OutputFormat::Csv: file /= "report.csv"; break;
            case OutputFormat::PlotData: file /= "plot_db.csv"; break;
        }
        emit_table(report, f, file);
        written.push_back(file);
    }
    return written;
}

std::string explain(const std::filesystem::path& path, const ExplainOptions& options) {
    CsvSchema schema;
    schema.delimiter = options.delimiter;
    if (options.label_column) schema.label_column = ColumnRef::parse(*options.label_column);
    Dataset data = load_csv(path, schema);
    if (options.normalize) data = zscore_normalize(data);

    const ClusteringResult result = eg_kmeans(data, options.eg);
    std::ostringstream os;
    os << format_trace(*result.trace(), data);
    os << "  sort key                 : " << to_string(options.eg.resolved_sort_key(data.dim)) << '\n';
    os << "  A_c                      : " << options.eg.arbitrary_constant << '\n';
    os << "  final clusters           :\n";
    for (std::size_t c = 0; c < result.k(); ++c) {
        os << "    F_C" << c + 1 << " = {";
        bool first = true;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (result.assignments()[i] != c) continue;
            if (!first) os << ", ";
            first = false;
            if (data.dim == 1) {
                os << data.points[i].features.front();
            } else {
                os << "row " << data.points[i].id;
            }
        }
        os << "}\n";
    }
    return os.str();
}

std::vector<double> FixtureSet::values() const {
    std::vector<double> out;
    for (const auto& c : cells) out.push_back(std::stod(c));
    return out;
}

const std::vector<FixtureSet>& point_set_fixtures() {
    static const std::vector<FixtureSet> sets{
        {"A", {"2", "4.3", "5", "6", "8", "9", "10", "90", "12", "21", "34"}},
        {"B", {"9", "80", "31", "15", "4", "8", "7", "90", "11"}},
        {"C", {"20", "3", "45", "26", "3", "2", "10", "8", "10", "3", "13"}},
        {"D", {"2.0", "4", "3", "5", "6", "8", "9", "10", "90", "12", "21", "34"}},
        {"E", {"3", "10", "15", "26", "18", "4", "1", "-1"}},
        {"F", {"32", "34", "3", "15", "4", "8", "19", "32", "21"}},
        {"G", {"20", "9", "30", "15", "16", "98", "9", "10", "90"}},
    };
    return sets;
}

Dataset fixture_dataset(const FixtureSet& set) {
    std::vector<std::vector<double>> rows;
    for (double v : set.values()) rows.push_back({v});
    Dataset d = Dataset::from_rows("set_" + set.name, rows);
    d.feature_names = {"value"};
    return d;
}

std::vector<std::filesystem::path> write_fixtures(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> written;
    std::vector<ManifestEntry> entries;
    for (const auto& set : point_set_fixtures()) {
        std::string lower = set.name;
        for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        const auto file = dir / ("set_" + lower + ".csv");
        std::string text = "value\n";
        for (const auto& cell : set.cells) text += cell + "\n";
        write_text(file, text);
        written.push_back(file);

        ManifestEntry e;
        e.name = "set_" + set.name;
        e.path = file;
        e.schema.feature_columns = {ColumnRef::by_name("value")};
        e.classes = 2;
        entries.push_back(std::move(e));
    }
    const auto manifest = dir / "manifest.txt";
    write_text(manifest, "# Data point sets A-G; baselines use K = 2.\n\n" + format_manifest(entries, dir));
    written.push_back(manifest);
    return written;
}

}  // namespace egk
