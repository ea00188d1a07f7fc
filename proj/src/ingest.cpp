#include "pbdr/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <ostream>
#include <set>

#include "json.hpp"
#include "pbdr/csv.hpp"
#include "pbdr/error.hpp"
#include "pbdr/format.hpp"

namespace pbdr {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Shared row loop: `parse_row` fills a record or throws ParseError; strict
// mode rethrows, lenient mode records the error and moves on.
template <typename ParseRow>
void for_each_row(const std::vector<csv::Row>& rows, std::size_t first, LoadMode mode, LoadResult& result,
                  ParseRow&& parse_row) {
  for (std::size_t r = first; r < rows.size(); ++r) {
    try {
      result.records.push_back(parse_row(rows[r]));
    } catch (const ParseError& e) {
      if (mode == LoadMode::strict) throw;
      const std::string id = rows[r].fields.empty() ? std::string{} : csv::trim(rows[r].fields[0]);
      result.errors.push_back({rows[r].line, id, e.column(), e.what()});
    }
  }
}

double number_at(const csv::Row& row, std::size_t index, const std::string& column) {
  const auto v = csv::parse_number(row.fields[index]);
  if (!v) {
    throw ParseError("line " + std::to_string(row.line) + ": column '" + column + "' has non-numeric value '" +
                         row.fields[index] + "'",
                     row.line, column);
  }
  return *v;
}

void require_width(const csv::Row& row, std::size_t width) {
  if (row.fields.size() != width) {
    throw ParseError("line " + std::to_string(row.line) + ": expected " + std::to_string(width) +
                         " columns, found " + std::to_string(row.fields.size()),
                     row.line);
  }
}

std::vector<csv::Row> rows_with_header(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError("file is empty");
  if (rows.size() == 1) throw ParseError("file has a header but no data rows", 1);
  return rows;
}

std::optional<std::size_t> find_column(const std::vector<std::string>& canonical, std::string_view name) {
  auto it = std::find(canonical.begin(), canonical.end(), name);
  if (it == canonical.end()) return std::nullopt;
  return static_cast<std::size_t>(it - canonical.begin());
}

std::vector<std::string> canonical_header(const csv::Row& row) {
  std::vector<std::string> out;
  for (const auto& h : row.fields) out.push_back(canonical_column_name(h));
  std::set<std::string> seen;
  for (const auto& h : out) {
    if (!seen.insert(h).second) throw ParseError("duplicate column '" + h + "' in header", row.line, h);
  }
  return out;
}

}  // namespace

std::string canonical_column_name(std::string_view header) {
  std::string out;
  int depth = 0;
  bool pending_sep = false;
  for (char c : header) {
    if (c == '(') {
      ++depth;
      continue;
    }
    if (c == ')') {
      depth = std::max(0, depth - 1);
      continue;
    }
    if (depth > 0) continue;
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      if (pending_sep && !out.empty()) out += '_';
      pending_sep = false;
      out += static_cast<char>(std::tolower(uc));
    } else {
      pending_sep = true;
    }
  }
  return out;
}

// Iris -------------------------------------------------------------------------

LoadResult parse_iris(std::string_view text, LoadMode mode) {
  const auto rows = rows_with_header(text);
  const auto header = canonical_header(rows[0]);
  static const std::array<std::string, 4> measures = {"sepal_length", "sepal_width", "petal_length", "petal_width"};
  std::array<std::size_t, 4> at{};
  for (std::size_t k = 0; k < measures.size(); ++k) {
    auto idx = find_column(header, measures[k]);
    if (!idx) throw ParseError("iris header lacks column '" + measures[k] + "'", rows[0].line, measures[k]);
    at[k] = *idx;
  }
  std::optional<std::size_t> label_at;
  for (const char* name : {"target", "species", "class", "variety"}) {
    if ((label_at = find_column(header, name))) break;
  }
  if (!label_at) throw ParseError("iris header lacks a class column (target/species/class/variety)", rows[0].line);
  const auto id_at = find_column(header, "id");

  LoadResult result;
  for_each_row(rows, 1, mode, result, [&](const csv::Row& row) {
    require_width(row, header.size());
    DatasetRecord rec;
    rec.id = id_at ? csv::trim(row.fields[*id_at]) : std::to_string(row.line - rows[0].line);
    for (std::size_t k = 0; k < measures.size(); ++k) rec.fields[measures[k]] = number_at(row, at[k], measures[k]);
    std::string label = lower(csv::trim(row.fields[*label_at]));
    if (label.starts_with("iris-") || label.starts_with("iris ")) label.erase(0, 5);
    if (label.empty()) throw ParseError("line " + std::to_string(row.line) + ": empty class label", row.line, header[*label_at]);
    rec.label = label;
    return rec;
  });
  if (result.records.empty() && result.errors.empty()) throw ParseError("iris file has no data rows");
  return result;
}

LoadResult load_iris(const std::string& path, LoadMode mode) { return parse_iris(csv::read_file(path), mode); }

SampleSchema iris_schema() {
  return SampleSchema({"sepal", "petal"}, {"length", "width"},
                      {{{"sepal", "length"}, "sepal_length"},
                       {{"sepal", "width"}, "sepal_width"},
                       {{"petal", "length"}, "petal_length"},
                       {{"petal", "width"}, "petal_width"}});
}

// WDBC -------------------------------------------------------------------------

const std::array<std::string, 10>& wdbc_features() {
  static const std::array<std::string, 10> features = {"radius",      "texture",   "perimeter",      "area",
                                                       "smoothness",  "compactness", "concavity",    "concave_points",
                                                       "symmetry",    "fractal_dimension"};
  return features;
}

const std::array<std::string, 3>& wdbc_stats() {
  static const std::array<std::string, 3> stats = {"mean", "se", "worst"};
  return stats;
}

std::string wdbc_field(std::string_view stat, std::string_view feature) {
  return std::string(stat) + "_" + std::string(feature);
}

LoadResult parse_wdbc(std::string_view text, LoadMode mode) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError("file is empty");
  auto is_code = [](std::string_view s) { return s == "M" || s == "B"; };
  const bool has_header = rows[0].fields.size() < 2 || !is_code(csv::trim(rows[0].fields[1]));
  if (has_header && rows.size() == 1) throw ParseError("file has a header but no data rows", 1);

  const auto& features = wdbc_features();
  const auto& stats = wdbc_stats();
  LoadResult result;
  for_each_row(rows, has_header ? 1 : 0, mode, result, [&](const csv::Row& row) {
    require_width(row, 32);
    DatasetRecord rec;
    rec.id = csv::trim(row.fields[0]);
    const std::string code = csv::trim(row.fields[1]);
    if (code == "M") {
      rec.label = "malignant";
    } else if (code == "B") {
      rec.label = "benign";
    } else {
      throw ParseError("line " + std::to_string(row.line) + ": unknown diagnosis code '" + code + "'", row.line,
                       "diagnosis");
    }
    for (std::size_t s = 0; s < stats.size(); ++s) {
      for (std::size_t f = 0; f < features.size(); ++f) {
        const auto name = wdbc_field(stats[s], features[f]);
        rec.fields[name] = number_at(row, 2 + s * features.size() + f, name);
      }
    }
    for (const auto& f : features) {
      if (rec.fields[wdbc_field("worst", f)] < rec.fields[wdbc_field("mean", f)]) {
        result.warnings.push_back("line " + std::to_string(row.line) + " (id " + rec.id + "): worst_" + f +
                                  " is below mean_" + f);
      }
    }
    return rec;
  });
  if (result.records.empty() && result.errors.empty()) throw ParseError("wdbc file has no data rows");
  return result;
}

LoadResult load_wdbc(const std::string& path, LoadMode mode) { return parse_wdbc(csv::read_file(path), mode); }

SampleSchema wdbc_schema(const std::vector<std::string>& features) {
  const auto& known = wdbc_features();
  std::vector<std::string> cols;
  for (const auto& f : features) {
    const auto name = canonical_column_name(f);
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw InvalidInput("unknown WDBC feature '" + f + "'");
    }
    if (std::find(cols.begin(), cols.end(), name) != cols.end()) {
      throw InvalidInput("WDBC feature '" + f + "' listed twice");
    }
    cols.push_back(name);
  }
  SampleSchema::CellMap cells;
  for (const auto& s : wdbc_stats()) {
    for (const auto& f : cols) cells[{s, f}] = wdbc_field(s, f);
  }
  return SampleSchema({wdbc_stats().begin(), wdbc_stats().end()}, cols, std::move(cells));
}

SampleSchema wdbc_schema() { return wdbc_schema({wdbc_features().begin(), wdbc_features().end()}); }

// Schema files -------------------------------------------------------------------

SchemaFile parse_schema_file(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("schema is not valid JSON: ") + e.what());
  }
  try {
    auto rows = doc.at("rows").get<std::vector<std::string>>();
    auto cols = doc.at("cols").get<std::vector<std::string>>();
    SampleSchema::CellMap cells;
    for (const auto& [row, by_col] : doc.at("cells").items()) {
      for (const auto& [col, column] : by_col.items()) {
        cells[{row, col}] = canonical_column_name(column.get<std::string>());
      }
    }
    SchemaFile out{SampleSchema(std::move(rows), std::move(cols), std::move(cells)), "", "", {}, {}};
    if (doc.contains("id")) out.id_column = canonical_column_name(doc["id"].get<std::string>());
    if (doc.contains("label")) out.label_column = canonical_column_name(doc["label"].get<std::string>());
    if (doc.contains("label_map")) out.label_map = doc["label_map"].get<std::map<std::string, std::string>>();
    if (doc.contains("ignore")) {
      for (const auto& c : doc["ignore"]) out.ignore.push_back(canonical_column_name(c.get<std::string>()));
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed schema: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("invalid schema: ") + e.what());
  }
}

LoadResult parse_with_schema(std::string_view data_text, const SchemaFile& schema, LoadMode mode) {
  const auto rows = rows_with_header(data_text);
  const auto header = canonical_header(rows[0]);

  auto require = [&](const std::string& column, const std::string& role) {
    auto idx = find_column(header, column);
    if (!idx) throw ParseError("data file has no column '" + column + "' (" + role + ")", rows[0].line, column);
    return *idx;
  };
  for (const auto& field : schema.schema.fields()) require(field, "schema cell");
  std::optional<std::size_t> id_at;
  std::optional<std::size_t> label_at;
  if (!schema.id_column.empty()) id_at = require(schema.id_column, "id");
  if (!schema.label_column.empty()) label_at = require(schema.label_column, "label");
  for (const auto& c : schema.ignore) require(c, "ignore");

  std::vector<std::size_t> numeric;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k == id_at || k == label_at) continue;
    if (std::find(schema.ignore.begin(), schema.ignore.end(), header[k]) != schema.ignore.end()) continue;
    numeric.push_back(k);
  }

  LoadResult result;
  for_each_row(rows, 1, mode, result, [&](const csv::Row& row) {
    require_width(row, header.size());
    DatasetRecord rec;
    rec.id = id_at ? csv::trim(row.fields[*id_at]) : std::to_string(row.line - rows[0].line);
    for (auto k : numeric) rec.fields[header[k]] = number_at(row, k, header[k]);
    if (label_at) {
      std::string raw = csv::trim(row.fields[*label_at]);
      if (!schema.label_map.empty()) {
        auto it = schema.label_map.find(raw);
        if (it == schema.label_map.end()) {
          throw ParseError("line " + std::to_string(row.line) + ": label '" + raw + "' is not in label_map",
                           row.line, header[*label_at]);
        }
        raw = it->second;
      }
      rec.label = raw;
    }
    return rec;
  });
  return result;
}

std::pair<LoadResult, SampleSchema> load_with_schema(const std::string& data_path, const std::string& schema_path,
                                                     LoadMode mode) {
  const auto schema = parse_schema_file(csv::read_file(schema_path));
  return {parse_with_schema(csv::read_file(data_path), schema, mode), schema.schema};
}

// Record CSV ---------------------------------------------------------------------

void write_records(std::ostream& out, std::span<const DatasetRecord> records) {
  std::set<std::string> names;
  for (const auto& r : records) {
    for (const auto& [name, value] : r.fields) names.insert(name);
  }
  std::vector<std::string> header = {"id"};
  header.insert(header.end(), names.begin(), names.end());
  header.push_back("label");
  csv::write_row(out, header);
  for (const auto& r : records) {
    std::vector<std::string> row = {r.id};
    for (const auto& name : names) {
      auto it = r.fields.find(name);
      row.push_back(it == r.fields.end() ? std::string{} : format_double(it->second));
    }
    row.push_back(r.label.value_or(""));
    csv::write_row(out, row);
  }
}

LoadResult parse_records(std::string_view text, LoadMode mode) {
  const auto rows = rows_with_header(text);
  const auto& header = rows[0].fields;
  if (header.size() < 2 || header.front() != "id" || header.back() != "label") {
    throw ParseError("record file header must start with 'id' and end with 'label'", rows[0].line);
  }
  LoadResult result;
  for_each_row(rows, 1, mode, result, [&](const csv::Row& row) {
    require_width(row, header.size());
    DatasetRecord rec;
    rec.id = row.fields.front();
    for (std::size_t k = 1; k + 1 < header.size(); ++k) {
      if (row.fields[k].empty()) continue;
      rec.fields[header[k]] = number_at(row, k, header[k]);
    }
    if (!row.fields.back().empty()) rec.label = row.fields.back();
    return rec;
  });
  return result;
}

}  // namespace pbdr
