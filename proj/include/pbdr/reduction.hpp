#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pbdr/cost_matrix.hpp"
#include "pbdr/dataset.hpp"
#include "pbdr/error.hpp"
#include "pbdr/polynomial.hpp"

namespace pbdr {

/// How a flat record is laid out as a cost matrix: cell (row, col) is read
/// from the record field named by the cell map.
class SampleSchema {
 public:
  using CellMap = std::map<std::pair<std::string, std::string>, std::string>;

  /// Throws InvalidInput unless the cell map covers rows x cols exactly and
  /// maps distinct cells to distinct fields.
  SampleSchema(std::vector<std::string> row_labels, std::vector<std::string> col_labels, CellMap cells);

  const std::vector<std::string>& row_labels() const noexcept { return rows_; }
  const std::vector<std::string>& col_labels() const noexcept { return cols_; }
  const CellMap& cell_map() const noexcept { return cells_; }

  const std::string& field(const std::string& row, const std::string& col) const;

  /// Every mapped field, row-major in schema order.
  std::vector<std::string> fields() const;

  /// Schema over a subset (or reordering) of the columns.
  SampleSchema with_columns(const std::vector<std::string>& cols) const;

 private:
  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  CellMap cells_;
};

struct ReducedSample {
  std::string id;
  CoefficientVector vector;
  PseudoBooleanPolynomial polynomial;
  std::optional<std::string> label;
};

/// Per-sample failure: the sample and (when known) the field at fault.
class SampleError : public InvalidInput {
 public:
  SampleError(std::string sample_id, std::string field, const std::string& message)
      : InvalidInput(message), sample_id_(std::move(sample_id)), field_(std::move(field)) {}

  const std::string& sample_id() const noexcept { return sample_id_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string sample_id_;
  std::string field_;
};

CostMatrix build_matrix(const DatasetRecord& record, const SampleSchema& schema);

/// record -> cost matrix -> reduced polynomial -> degree projection.
/// Throws SampleError for a missing, non-finite or negative field.
ReducedSample reduce_sample(const DatasetRecord& record, const SampleSchema& schema);

struct SampleFailure {
  std::size_t index = 0;  // position in the input
  std::string id;
  std::string field;
  std::string message;
};

struct BatchResult {
  std::vector<ReducedSample> samples;  // successes, input order
  std::vector<SampleFailure> failures;
};

struct ReduceOptions {
  /// Min-max rescale every mapped field to [0, 1] over the valid records
  /// before reduction.
  bool normalize = false;
  std::size_t threads = 1;  // 0 = hardware concurrency
};

/// Reduces every record; failures are collected, not thrown. Output order
/// and values do not depend on the thread count. Throws InvalidInput for an
/// empty record list.
BatchResult reduce_dataset(std::span<const DatasetRecord> records, const SampleSchema& schema,
                           const ReduceOptions& options = {});

/// Dataset-level min-max rescaling of the given fields. Records missing a
/// field are left untouched for that field. A constant field maps to 0.
std::vector<DatasetRecord> normalize_minmax(std::span<const DatasetRecord> records,
                                            const std::vector<std::string>& fields);

struct EquivalenceGroup {
  PseudoBooleanPolynomial representative;  // polynomial of the first member
  std::vector<std::size_t> members;        // indices into the input, ascending
  std::vector<std::string> ids;
  std::vector<std::optional<std::string>> labels;

  bool mixed_labels() const;
};

/// Partitions samples into the connected components of the pairwise
/// `equivalent(.., tol)` relation, so a chain a~b~c lands in one group even
/// when a and c are further apart than tol. Groups are ordered by their first
/// member's input position; singletons are included.
std::vector<EquivalenceGroup> group_equivalent(std::span<const ReducedSample> samples,
                                               double tol = kDefaultTolerance);

}  // namespace pbdr
