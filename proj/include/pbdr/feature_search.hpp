#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pbdr/dataset.hpp"
#include "pbdr/separators.hpp"

namespace pbdr {

/// Indices into wdbc_features(), ascending.
using FeatureSubset = std::vector<std::size_t>;

/// All subsets with min_size <= |S| <= max_size, ordered by size and then
/// lexicographically by feature index. Throws InvalidInput unless
/// 1 <= min_size <= max_size <= 10.
std::vector<FeatureSubset> enumerate_subsets(std::size_t min_size, std::size_t max_size);

std::vector<std::string> feature_names(const FeatureSubset& subset);
/// Inverse of feature_names; throws InvalidInput for unknown names.
FeatureSubset feature_subset(const std::vector<std::string>& names);
/// "radius;texture;..."
std::string subset_key(const FeatureSubset& subset);

struct SearchConfig {
  PocketConfig pocket;
  bool normalize = false;
  AxisMapping mapping = {0, 1, 2};  // reduced coefficients -> plane axes
  std::string positive_label = "malignant";
  std::size_t threads = 1;  // subsets evaluated concurrently; 0 = hardware concurrency
};

struct SubsetResult {
  FeatureSubset subset;
  Hyperplane plane;  // in mapped axes; positive side predicts positive_label
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t lossy_count = 0;
  bool normalized = false;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

/// Reduces every record over the 3 x |subset| WDBC schema and runs the
/// pocket search on the mapped 3-vectors. Any per-sample failure aborts
/// with an InvalidInput that names the subset.
SubsetResult evaluate_subset(std::span<const DatasetRecord> records, const FeatureSubset& subset,
                             const SearchConfig& config = {});

/// evaluate_subset over every subset; results in the order of `subsets`
/// regardless of the thread count.
std::vector<SubsetResult> search_features(std::span<const DatasetRecord> records,
                                          const std::vector<FeatureSubset>& subsets, const SearchConfig& config = {});

/// Sorted by accuracy (descending), subset size, then subset order. Throws
/// InvalidInput for an empty input.
std::vector<SubsetResult> rank_subsets(std::vector<SubsetResult> results);

/// rank,subset,size,accuracy,correct,total,a,b,c,d,lossy_count,normalized
void write_ranking_csv(std::ostream& out, std::span<const SubsetResult> ranked);
std::string ranking_json(std::span<const SubsetResult> ranked, const SearchConfig& config);

}  // namespace pbdr
