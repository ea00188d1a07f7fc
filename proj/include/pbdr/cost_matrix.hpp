#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pbdr {

/// An m x n grid of non-negative finite costs. Rows are measurement types
/// (the Boolean variables of the polynomial), columns are features.
class CostMatrix {
 public:
  /// Validates labels and cells; throws InvalidInput naming the offending
  /// cell for negative, non-finite or missing entries.
  CostMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
             const std::vector<std::vector<double>>& cells);

  /// Convenience constructor with generated labels r1..rm and c1..cn.
  explicit CostMatrix(const std::vector<std::vector<double>>& cells);

  std::size_t rows() const noexcept { return row_labels_.size(); }
  std::size_t cols() const noexcept { return col_labels_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return cells_[i * cols() + j]; }

  const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
  const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }

  /// Column indices ordered by label; the accumulation order used by formulate.
  std::vector<std::size_t> canonical_column_order() const;

  CostMatrix with_row_order(std::span<const std::size_t> order) const;
  CostMatrix with_col_order(std::span<const std::size_t> order) const;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<double> cells_;
};

}  // namespace pbdr
