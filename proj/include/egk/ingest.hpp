#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "egk/core.hpp"

namespace egk {

// A column picked by header name or by 0-based position. The name "*"
// selects every column except the label column.
struct ColumnRef {
    std::optional<std::string> name;
    std::optional<std::size_t> index;

    static ColumnRef by_name(std::string n) { return {std::move(n), std::nullopt}; }
    static ColumnRef by_index(std::size_t i) { return {std::nullopt, i}; }
    static ColumnRef all() { return by_name("*"); }
    // Digits-only text is read as an index unless the header has a column of that name.
    static ColumnRef parse(const std::string& text);

    bool operator==(const ColumnRef&) const = default;
};

struct CsvSchema {
    std::vector<ColumnRef> feature_columns{ColumnRef::all()};
    std::optional<ColumnRef> label_column;
    std::vector<std::string> missing_markers{"", "?", "NA"};
    char delimiter = ',';
};

struct CsvLoad {
    Dataset data;
    std::size_t source_rows = 0;   // data rows in the file, header excluded
    std::size_t dropped_rows = 0;  // rows with a missing marker in a feature column
};

// RFC-4180 record reader: quoted fields, doubled quotes, embedded newlines,
// CRLF line ends. Each record carries the 1-based line it starts on.
struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
};
std::vector<CsvRecord> read_csv_records(std::istream& in, char delimiter = ',');

CsvLoad read_csv(const std::filesystem::path& path, const CsvSchema& schema);
CsvLoad read_csv(std::istream& in, const CsvSchema& schema, std::string name);

// Rows with a missing feature are dropped; throws IoError, ParseError or EmptyDatasetError.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

// Per-column z-score with population standard deviation. Constant columns become 0.
Dataset zscore_normalize(const Dataset& d);

}  // namespace egk
