#include "egk/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include "egk/error.hpp"

namespace egk {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<double> parse_number(const std::string& cell) {
    std::string text = trim(cell);
    if (!text.empty() && text.front() == '+') text.erase(0, 1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::size_t resolve(const ColumnRef& ref, const std::vector<std::string>& header) {
    if (ref.name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == *ref.name) return i;
        }
        if (all_digits(*ref.name)) {
            const std::size_t idx = std::stoul(*ref.name);
            if (idx < header.size()) return idx;
        }
        throw UsageError("column '" + *ref.name + "' not found in header");
    }
    if (ref.index && *ref.index < header.size()) return *ref.index;
    throw UsageError("column index " + std::to_string(ref.index.value_or(0)) +
                     " out of range (header has " + std::to_string(header.size()) + " columns)");
}

}  // namespace

ColumnRef ColumnRef::parse(const std::string& text) {
    // Kept as a name; resolve() falls back to the positional reading for digits.
    return by_name(trim(text));
}

std::vector<CsvRecord> read_csv_records(std::istream& in, char delimiter) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    bool record_has_content = false;
    std::size_t line = 1;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // blank lines are skipped entirely
        if (!(current.fields.size() == 1 && current.fields.front().empty() && !record_has_content)) {
            records.push_back(std::move(current));
        }
        current = CsvRecord{};
        record_has_content = false;
    };

    char c = 0;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
            record_has_content = true;
        } else if (c == delimiter) {
            record_has_content = true;
            end_field();
        } else if (c == '\r') {
            if (in.peek() == '\n') continue;
            end_record();
            current.line = ++line;
        } else if (c == '\n') {
            end_record();
            current.line = ++line;
        } else {
            if (c != ' ' && c != '\t') field_started = true;
            record_has_content = true;
            field.push_back(c);
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", current.line, current.fields.size() + 1);
    if (record_has_content || !field.empty()) end_record();
    return records;
}

CsvLoad read_csv(std::istream& in, const CsvSchema& schema, std::string name) {
    if (schema.feature_columns.empty()) throw UsageError("schema selects no feature columns");

    const auto records = read_csv_records(in, schema.delimiter);
    if (records.empty()) throw EmptyDatasetError("'" + name + "' has no header row");
    const auto& header = records.front().fields;

    std::optional<std::size_t> label_idx;
    if (schema.label_column) label_idx = resolve(*schema.label_column, header);

    std::vector<std::size_t> feature_idx;
    for (const auto& ref : schema.feature_columns) {
        if (ref.name && *ref.name == "*") {
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (i != label_idx) feature_idx.push_back(i);
            }
        } else {
            feature_idx.push_back(resolve(ref, header));
        }
    }
    if (feature_idx.empty()) throw UsageError("schema selects no feature columns");
    if (label_idx && std::find(feature_idx.begin(), feature_idx.end(), *label_idx) != feature_idx.end()) {
        throw UsageError("label column is also selected as a feature");
    }

    const std::set<std::string> missing(schema.missing_markers.begin(), schema.missing_markers.end());

    CsvLoad out;
    out.data.name = std::move(name);
    out.data.dim = feature_idx.size();
    for (std::size_t i : feature_idx) out.data.feature_names.push_back(trim(header[i]));
    std::vector<std::string> labels;

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        ++out.source_rows;
        if (rec.fields.size() != header.size()) {
            throw ParseError("line " + std::to_string(rec.line) + ": expected " +
                                 std::to_string(header.size()) + " fields, found " +
                                 std::to_string(rec.fields.size()),
                             rec.line, rec.fields.size());
        }
        bool drop = false;
        std::vector<double> row;
        row.reserve(feature_idx.size());
        for (std::size_t col : feature_idx) {
            const std::string cell = trim(rec.fields[col]);
            if (missing.count(cell) != 0) {
                drop = true;
                break;
            }
            auto v = parse_number(cell);
            if (!v) {
                throw ParseError("line " + std::to_string(rec.line) + ", column " +
                                     std::to_string(col + 1) + " ('" + trim(header[col]) +
                                     "'): not a number: '" + cell + "'",
                                 rec.line, col + 1);
            }
            row.push_back(*v);
        }
        if (drop) {
            ++out.dropped_rows;
            continue;
        }
        out.data.points.push_back(DataPoint{out.data.points.size(), std::move(row)});
        if (label_idx) labels.push_back(trim(rec.fields[*label_idx]));
    }

    if (out.data.points.empty()) {
        throw EmptyDatasetError("'" + out.data.name + "': no rows left after dropping " +
                                std::to_string(out.dropped_rows) + " rows with missing values");
    }
    if (label_idx) out.data.labels = std::move(labels);
    return out;
}

CsvLoad read_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_csv(in, schema, path.stem().string());
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    return read_csv(path, schema).data;
}

Dataset zscore_normalize(const Dataset& d) {
    Dataset out = d;
    const std::size_t n = d.size();
    if (n == 0) return out;
    for (std::size_t c = 0; c < d.dim; ++c) {
        double lo = d.points.front().features[c];
        double hi = lo;
        double sum = 0.0;
        for (const auto& p : d.points) {
            const double v = p.features[c];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        if (lo == hi) {
            for (auto& p : out.points) p.features[c] = 0.0;
            continue;
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& p : d.points) {
            const double dv = p.features[c] - mean;
            ss += dv * dv;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        for (auto& p : out.points) p.features[c] = (p.features[c] - mean) / sd;
    }
    return out;
}

}  // namespace egk
