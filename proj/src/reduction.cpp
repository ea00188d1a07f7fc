#include "pbdr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "pbdr/parallel.hpp"

namespace pbdr {

SampleSchema::SampleSchema(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                           CellMap cells)
    : rows_(std::move(row_labels)), cols_(std::move(col_labels)), cells_(std::move(cells)) {
  if (rows_.empty() || cols_.empty()) throw InvalidInput("schema needs at least one row and one column");
  if (std::set<std::string>(rows_.begin(), rows_.end()).size() != rows_.size()) {
    throw InvalidInput("schema row labels are not unique");
  }
  if (std::set<std::string>(cols_.begin(), cols_.end()).size() != cols_.size()) {
    throw InvalidInput("schema column labels are not unique");
  }
  std::set<std::string> targets;
  for (const auto& r : rows_) {
    for (const auto& c : cols_) {
      auto it = cells_.find({r, c});
      if (it == cells_.end()) throw InvalidInput("schema has no field for cell (" + r + ", " + c + ")");
      if (!targets.insert(it->second).second) {
        throw InvalidInput("schema maps field '" + it->second + "' to more than one cell");
      }
    }
  }
  // Entries outside rows x cols are dropped so with_columns() stays exact.
  std::erase_if(cells_, [&](const auto& entry) {
    const auto& [rc, field] = entry;
    return std::find(rows_.begin(), rows_.end(), rc.first) == rows_.end() ||
           std::find(cols_.begin(), cols_.end(), rc.second) == cols_.end();
  });
}

const std::string& SampleSchema::field(const std::string& row, const std::string& col) const {
  auto it = cells_.find({row, col});
  if (it == cells_.end()) throw InvalidInput("schema has no cell (" + row + ", " + col + ")");
  return it->second;
}

std::vector<std::string> SampleSchema::fields() const {
  std::vector<std::string> out;
  for (const auto& r : rows_) {
    for (const auto& c : cols_) out.push_back(field(r, c));
  }
  return out;
}

SampleSchema SampleSchema::with_columns(const std::vector<std::string>& cols) const {
  for (const auto& c : cols) {
    if (std::find(cols_.begin(), cols_.end(), c) == cols_.end()) {
      throw InvalidInput("schema has no column '" + c + "'");
    }
  }
  return SampleSchema(rows_, cols, cells_);
}

CostMatrix build_matrix(const DatasetRecord& record, const SampleSchema& schema) {
  std::vector<std::vector<double>> cells(schema.row_labels().size());
  for (std::size_t i = 0; i < schema.row_labels().size(); ++i) {
    for (const auto& col : schema.col_labels()) {
      const auto& name = schema.field(schema.row_labels()[i], col);
      auto it = record.fields.find(name);
      if (it == record.fields.end()) {
        throw SampleError(record.id, name, "sample '" + record.id + "': missing field '" + name + "'");
      }
      if (!std::isfinite(it->second)) {
        throw SampleError(record.id, name, "sample '" + record.id + "': field '" + name + "' is not finite");
      }
      if (it->second < 0.0) {
        throw SampleError(record.id, name, "sample '" + record.id + "': field '" + name + "' is negative");
      }
      cells[i].push_back(it->second);
    }
  }
  return CostMatrix(schema.row_labels(), schema.col_labels(), cells);
}

ReducedSample reduce_sample(const DatasetRecord& record, const SampleSchema& schema) {
  auto poly = formulate(build_matrix(record, schema));
  auto vec = degree_project(poly);
  return {record.id, std::move(vec), std::move(poly), record.label};
}

std::vector<DatasetRecord> normalize_minmax(std::span<const DatasetRecord> records,
                                            const std::vector<std::string>& fields) {
  std::vector<DatasetRecord> out(records.begin(), records.end());
  for (const auto& name : fields) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : records) {
      auto it = r.fields.find(name);
      if (it == r.fields.end() || !std::isfinite(it->second)) continue;
      lo = std::min(lo, it->second);
      hi = std::max(hi, it->second);
    }
    if (!(lo <= hi)) continue;
    const double span = hi - lo;
    for (auto& r : out) {
      auto it = r.fields.find(name);
      if (it == r.fields.end() || !std::isfinite(it->second)) continue;
      it->second = span > 0.0 ? (it->second - lo) / span : 0.0;
    }
  }
  return out;
}

BatchResult reduce_dataset(std::span<const DatasetRecord> records, const SampleSchema& schema,
                           const ReduceOptions& options) {
  if (records.empty()) throw InvalidInput("no records to reduce");

  // Validation runs before any rescaling so negative values cannot be hidden
  // by the min-max shift.
  std::vector<std::optional<SampleFailure>> failed(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    try {
      build_matrix(records[k], schema);
    } catch (const SampleError& e) {
      failed[k] = SampleFailure{k, e.sample_id(), e.field(), e.what()};
    }
  }

  std::vector<DatasetRecord> scaled;
  std::span<const DatasetRecord> source = records;
  if (options.normalize) {
    std::vector<DatasetRecord> valid;
    for (std::size_t k = 0; k < records.size(); ++k) {
      if (!failed[k]) valid.push_back(records[k]);
    }
    auto rescaled = normalize_minmax(valid, schema.fields());
    scaled.assign(records.begin(), records.end());
    std::size_t next = 0;
    for (std::size_t k = 0; k < records.size(); ++k) {
      if (!failed[k]) scaled[k] = std::move(rescaled[next++]);
    }
    source = scaled;
  }

  std::vector<std::optional<ReducedSample>> slots(records.size());
  parallel_for(records.size(), options.threads, [&](std::size_t k) {
    if (!failed[k]) slots[k] = reduce_sample(source[k], schema);
  });

  BatchResult result;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (failed[k]) {
      result.failures.push_back(std::move(*failed[k]));
    } else {
      result.samples.push_back(std::move(*slots[k]));
    }
  }
  return result;
}

bool EquivalenceGroup::mixed_labels() const {
  for (const auto& l : labels) {
    if (l != labels.front()) return true;
  }
  return false;
}

std::vector<EquivalenceGroup> group_equivalent(std::span<const ReducedSample> samples, double tol) {
  if (samples.empty()) return {};
  const std::size_t vars = samples.front().polynomial.num_vars();
  for (const auto& s : samples) {
    if (s.polynomial.num_vars() != vars) {
      throw InvalidInput("cannot group samples with different variable counts");
    }
  }
  if (!(tol >= 0.0)) throw InvalidInput("tolerance must be a non-negative number");

  const std::size_t n = samples.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  // Equivalent samples have constants within tol, so a sweep over samples
  // sorted by constant only needs to look at that window.
  std::vector<std::size_t> by_constant(n);
  std::iota(by_constant.begin(), by_constant.end(), 0);
  auto constant = [&](std::size_t k) { return samples[k].polynomial.constant(); };
  std::stable_sort(by_constant.begin(), by_constant.end(),
                   [&](std::size_t a, std::size_t b) { return constant(a) < constant(b); });
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = by_constant[a];
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t j = by_constant[b];
      if (constant(j) - constant(i) > tol) break;
      if (equivalent(samples[i].polynomial, samples[j].polynomial, tol)) {
        const auto ri = find(i);
        const auto rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }

  std::vector<EquivalenceGroup> groups;
  std::vector<std::size_t> group_of(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t root = find(k);
    if (group_of[root] == n) {
      group_of[root] = groups.size();
      groups.push_back({samples[k].polynomial, {}, {}, {}});
    }
    auto& g = groups[group_of[root]];
    g.members.push_back(k);
    g.ids.push_back(samples[k].id);
    g.labels.push_back(samples[k].label);
  }
  return groups;
}

}  // namespace pbdr
