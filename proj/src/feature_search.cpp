#include "pbdr/feature_search.hpp"

#include <algorithm>
#include <optional>
#include <ostream>

#include "json.hpp"
#include "pbdr/error.hpp"
#include "pbdr/format.hpp"
#include "pbdr/ingest.hpp"
#include "pbdr/parallel.hpp"
#include "pbdr/reduction.hpp"

namespace pbdr {

std::vector<FeatureSubset> enumerate_subsets(std::size_t min_size, std::size_t max_size) {
  const std::size_t n = wdbc_features().size();
  if (min_size < 1 || min_size > max_size || max_size > n) {
    throw InvalidInput("subset sizes must satisfy 1 <= min <= max <= " + std::to_string(n));
  }
  std::vector<FeatureSubset> out;
  for (std::size_t size = min_size; size <= max_size; ++size) {
    FeatureSubset combo(size);
    for (std::size_t k = 0; k < size; ++k) combo[k] = k;
    while (true) {
      out.push_back(combo);
      std::size_t k = size;
      while (k > 0 && combo[k - 1] == n - size + k - 1) --k;
      if (k == 0) break;
      ++combo[k - 1];
      for (std::size_t t = k; t < size; ++t) combo[t] = combo[t - 1] + 1;
    }
  }
  return out;
}

std::vector<std::string> feature_names(const FeatureSubset& subset) {
  std::vector<std::string> names;
  for (auto k : subset) names.push_back(wdbc_features().at(k));
  return names;
}

FeatureSubset feature_subset(const std::vector<std::string>& names) {
  const auto& known = wdbc_features();
  FeatureSubset out;
  for (const auto& name : names) {
    const auto canonical = canonical_column_name(name);
    auto it = std::find(known.begin(), known.end(), canonical);
    if (it == known.end()) throw InvalidInput("unknown WDBC feature '" + name + "'");
    out.push_back(static_cast<std::size_t>(it - known.begin()));
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw InvalidInput("feature listed twice");
  if (out.empty()) throw InvalidInput("feature subset is empty");
  return out;
}

std::string subset_key(const FeatureSubset& subset) {
  std::string out;
  for (auto& name : feature_names(subset)) {
    if (!out.empty()) out += ';';
    out += name;
  }
  return out;
}

SubsetResult evaluate_subset(std::span<const DatasetRecord> records, const FeatureSubset& subset,
                             const SearchConfig& config) {
  const std::string context = "subset {" + subset_key(subset) + "}: ";
  const auto schema = wdbc_schema(feature_names(subset));
  ReduceOptions options;
  options.normalize = config.normalize;
  const auto batch = reduce_dataset(records, schema, options);
  if (!batch.failures.empty()) throw InvalidInput(context + batch.failures.front().message);

  std::vector<Point> points;
  std::vector<int> labels;
  std::size_t lossy = 0;
  for (const auto& s : batch.samples) {
    if (!s.label) throw InvalidInput(context + "sample '" + s.id + "' has no label");
    points.push_back(apply_mapping(s.vector.values, config.mapping));
    labels.push_back(*s.label == config.positive_label ? 1 : 0);
    if (s.vector.lossy) ++lossy;
  }
  auto found = search_separator_pocket(points, labels, config.pocket);
  return {subset, found.plane, found.correct, found.total, lossy, config.normalize};
}

std::vector<SubsetResult> search_features(std::span<const DatasetRecord> records,
                                          const std::vector<FeatureSubset>& subsets, const SearchConfig& config) {
  std::vector<std::optional<SubsetResult>> slots(subsets.size());
  parallel_for(subsets.size(), config.threads,
               [&](std::size_t k) { slots[k] = evaluate_subset(records, subsets[k], config); });
  std::vector<SubsetResult> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<SubsetResult> rank_subsets(std::vector<SubsetResult> results) {
  if (results.empty()) throw InvalidInput("no subset results to rank");
  std::stable_sort(results.begin(), results.end(), [](const SubsetResult& a, const SubsetResult& b) {
    // exact comparison of correct/total via cross-multiplication
    const auto lhs = a.correct * b.total;
    const auto rhs = b.correct * a.total;
    if (lhs != rhs) return lhs > rhs;
    if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
    return a.subset < b.subset;
  });
  return results;
}

void write_ranking_csv(std::ostream& out, std::span<const SubsetResult> ranked) {
  out << "rank,subset,size,accuracy,correct,total,a,b,c,d,lossy_count,normalized\n";
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    const auto& r = ranked[k];
    out << (k + 1) << ',' << subset_key(r.subset) << ',' << r.subset.size() << ',' << format_fixed(r.accuracy(), 6)
        << ',' << r.correct << ',' << r.total;
    for (double c : r.plane.normal()) out << ',' << format_double(c);
    for (std::size_t pad = r.plane.dimension(); pad < 3; ++pad) out << ",0";
    out << ',' << format_double(r.plane.offset()) << ',' << r.lossy_count << ',' << (r.normalized ? 1 : 0) << '\n';
  }
}

std::string ranking_json(std::span<const SubsetResult> ranked, const SearchConfig& config) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["preprocessing"] = config.normalize ? "minmax" : "none";
  doc["mapping"] = mapping_name(config.mapping);
  doc["epochs"] = config.pocket.max_epochs;
  doc["positive_label"] = config.positive_label;
  doc["results"] = ordered_json::array();
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    const auto& r = ranked[k];
    doc["results"].push_back({{"rank", k + 1},
                              {"features", feature_names(r.subset)},
                              {"accuracy", r.accuracy()},
                              {"correct", r.correct},
                              {"total", r.total},
                              {"plane", {{"normal", r.plane.normal()}, {"offset", r.plane.offset()}}},
                              {"plane_text", to_text(r.plane)},
                              {"lossy_count", r.lossy_count}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace pbdr
