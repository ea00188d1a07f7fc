#include "pbdr/cost_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pbdr/error.hpp"

namespace pbdr {

namespace {

std::vector<std::string> numbered(char prefix, std::size_t count) {
  std::vector<std::string> labels;
  labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) labels.push_back(prefix + std::to_string(i + 1));
  return labels;
}

void require_unique(const std::vector<std::string>& labels, const char* what) {
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw InvalidInput(std::string("duplicate ") + what + " label '" + label + "'");
    }
  }
}

void require_permutation(std::span<const std::size_t> order, std::size_t n) {
  std::vector<bool> hit(n, false);
  if (order.size() != n) throw InvalidInput("permutation has wrong length");
  for (auto k : order) {
    if (k >= n || hit[k]) throw InvalidInput("not a permutation");
    hit[k] = true;
  }
}

}  // namespace

CostMatrix::CostMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                       const std::vector<std::vector<double>>& cells)
    : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
  if (row_labels_.empty() || col_labels_.empty()) {
    throw InvalidInput("cost matrix needs at least one row and one column");
  }
  require_unique(row_labels_, "row");
  require_unique(col_labels_, "column");
  if (cells.size() != rows()) {
    throw InvalidInput("cost matrix has " + std::to_string(cells.size()) + " rows of cells, expected " +
                       std::to_string(rows()));
  }
  cells_.reserve(rows() * cols());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      const std::string where = "cell (" + row_labels_[i] + ", " + col_labels_[j] + ")";
      if (j >= cells[i].size()) throw InvalidInput(where + " is missing");
      const double v = cells[i][j];
      if (!std::isfinite(v)) throw InvalidInput(where + " is not finite");
      if (v < 0.0) throw InvalidInput(where + " is negative");
      cells_.push_back(v);
    }
    if (cells[i].size() > cols()) {
      throw InvalidInput("row '" + row_labels_[i] + "' has more cells than columns");
    }
  }
}

CostMatrix::CostMatrix(const std::vector<std::vector<double>>& cells)
    : CostMatrix(numbered('r', cells.size()), numbered('c', cells.empty() ? 0 : cells.front().size()),
                 cells) {}

std::vector<std::size_t> CostMatrix::canonical_column_order() const {
  std::vector<std::size_t> order(cols());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return col_labels_[a] < col_labels_[b]; });
  return order;
}

CostMatrix CostMatrix::with_row_order(std::span<const std::size_t> order) const {
  require_permutation(order, rows());
  std::vector<std::string> labels;
  std::vector<std::vector<double>> cells;
  for (auto i : order) {
    labels.push_back(row_labels_[i]);
    cells.emplace_back(cells_.begin() + static_cast<std::ptrdiff_t>(i * cols()),
                       cells_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols()));
  }
  return CostMatrix(std::move(labels), col_labels_, cells);
}

CostMatrix CostMatrix::with_col_order(std::span<const std::size_t> order) const {
  require_permutation(order, cols());
  std::vector<std::string> labels;
  for (auto j : order) labels.push_back(col_labels_[j]);
  std::vector<std::vector<double>> cells(rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (auto j : order) cells[i].push_back((*this)(i, j));
  }
  return CostMatrix(row_labels_, std::move(labels), cells);
}

}  // namespace pbdr
