#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pbdr/dataset.hpp"
#include "pbdr/reduction.hpp"

namespace pbdr {

/// Strict loading throws ParseError on the first bad row; lenient loading
/// skips bad rows and reports them.
enum class LoadMode { strict, lenient };

struct RowError {
  std::size_t line = 0;
  std::string id;
  std::string column;
  std::string message;
};

struct LoadResult {
  std::vector<DatasetRecord> records;
  std::vector<RowError> errors;
  std::vector<std::string> warnings;  // data-quality notes, never fatal
};

/// Lower case, parenthesised units removed, runs of other punctuation and
/// blanks folded to '_': "Sepal Length (cm)" -> "sepal_length".
std::string canonical_column_name(std::string_view header);

// Iris -----------------------------------------------------------------------

/// Header must name the four measurements and a class column (target,
/// species, class or variety); an "id" column is optional. Labels lose an
/// "Iris-" prefix and are lower-cased.
LoadResult parse_iris(std::string_view text, LoadMode mode = LoadMode::strict);
LoadResult load_iris(const std::string& path, LoadMode mode = LoadMode::strict);

/// Rows sepal, petal; columns length, width.
SampleSchema iris_schema();

// WDBC -----------------------------------------------------------------------

/// The ten nucleus features in their canonical order.
const std::array<std::string, 10>& wdbc_features();
/// mean, se, worst.
const std::array<std::string, 3>& wdbc_stats();
/// Field name "<stat>_<feature>".
std::string wdbc_field(std::string_view stat, std::string_view feature);

/// UCI layout: id, diagnosis (M/B), 10 means, 10 standard errors, 10
/// worsts. A header row is accepted and skipped when present. Labels are
/// "malignant" / "benign". Rows whose worst value is below the mean value
/// load with a warning.
LoadResult parse_wdbc(std::string_view text, LoadMode mode = LoadMode::strict);
LoadResult load_wdbc(const std::string& path, LoadMode mode = LoadMode::strict);

/// 3 x |features| schema (rows mean, se, worst). Throws InvalidInput for an
/// unknown or repeated feature.
SampleSchema wdbc_schema(const std::vector<std::string>& features);
SampleSchema wdbc_schema();

// Schema files ----------------------------------------------------------------

/// JSON document:
///   { "rows": [...], "cols": [...],
///     "cells": { "<row>": { "<col>": "<data column>", ... }, ... },
///     "id": "<column>", "label": "<column>",              (optional)
///     "label_map": { "<raw>": "<label>" }, "ignore": [...] } (optional)
struct SchemaFile {
  SampleSchema schema;
  std::string id_column;     // empty: ids are 1-based data row numbers
  std::string label_column;  // empty: unlabelled
  std::map<std::string, std::string> label_map;
  std::vector<std::string> ignore;
};

SchemaFile parse_schema_file(std::string_view json_text);

/// Generic loader: every column other than id, label and ignored ones is a
/// numeric field named by canonical_column_name. Throws ParseError naming
/// the column when the schema references one the data lacks.
LoadResult parse_with_schema(std::string_view data_text, const SchemaFile& schema,
                             LoadMode mode = LoadMode::strict);
std::pair<LoadResult, SampleSchema> load_with_schema(const std::string& data_path, const std::string& schema_path,
                                                     LoadMode mode = LoadMode::strict);

// Record CSV --------------------------------------------------------------------

/// Header "id,<fields...>,label"; numbers in shortest round-trip form.
void write_records(std::ostream& out, std::span<const DatasetRecord> records);
/// Reads what write_records produced.
LoadResult parse_records(std::string_view text, LoadMode mode = LoadMode::strict);

}  // namespace pbdr
