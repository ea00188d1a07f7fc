#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "doctest.h"
#include "pbdr/error.hpp"
#include "pbdr/feature_search.hpp"
#include "pbdr/ingest.hpp"
#include "pbdr/reduction.hpp"

using namespace pbdr;

namespace {

const std::string kData = PBDR_DATA_DIR;

const std::vector<DatasetRecord>& wdbc_records() {
  static const auto records = load_wdbc(kData + "/wdbc.data").records;
  return records;
}

const std::vector<std::string> kEightFeatures{"radius",      "texture",   "perimeter", "smoothness",
                                            "compactness", "concavity", "symmetry",  "fractal_dimension"};

SubsetResult fake(FeatureSubset s, std::size_t correct, std::size_t total) {
  return {std::move(s), Hyperplane({1.0, 0.0, 0.0}, 0.0), correct, total, 0, false};
}

}  // namespace

TEST_CASE("enumerate_subsets") {
  const auto all = enumerate_subsets(1, 10);
  CHECK(all.size() == 1023);
  CHECK(std::set<FeatureSubset>(all.begin(), all.end()).size() == 1023);
  for (std::size_t k = 1; k < all.size(); ++k) {
    CHECK((all[k - 1].size() < all[k].size() || (all[k - 1].size() == all[k].size() && all[k - 1] < all[k])));
  }
  for (const auto& s : all) CHECK(std::is_sorted(s.begin(), s.end()));

  const auto full = enumerate_subsets(10, 10);
  REQUIRE(full.size() == 1);
  CHECK(full[0].size() == 10);

  const auto eight = enumerate_subsets(8, 8);
  CHECK(eight.size() == 45);
  CHECK(std::find(eight.begin(), eight.end(), feature_subset(kEightFeatures)) != eight.end());

  CHECK_THROWS_AS(enumerate_subsets(0, 3), InvalidInput);
  CHECK_THROWS_AS(enumerate_subsets(4, 3), InvalidInput);
  CHECK_THROWS_AS(enumerate_subsets(1, 11), InvalidInput);
}

TEST_CASE("feature names") {
  const auto s = feature_subset(kEightFeatures);
  CHECK(s == FeatureSubset{0, 1, 2, 4, 5, 6, 8, 9});
  CHECK(feature_names(s) == kEightFeatures);
  CHECK(subset_key({0, 7}) == "radius;concave_points");
  CHECK(feature_subset({"texture", "radius"}) == FeatureSubset{0, 1});
  CHECK_THROWS_AS(feature_subset({"volume"}), InvalidInput);
}

TEST_CASE("evaluate_subset") {
  const std::vector<DatasetRecord> sample(wdbc_records().begin(), wdbc_records().begin() + 120);
  SearchConfig cfg;
  cfg.pocket.max_epochs = 10;

  const auto single = evaluate_subset(sample, {0}, cfg);
  CHECK(single.total == 120);
  CHECK(single.correct <= 120);
  CHECK(single.accuracy() >= 0.0);
  CHECK(single.plane.dimension() == 3);

  const auto a = evaluate_subset(sample, feature_subset(kEightFeatures), cfg);
  const auto b = evaluate_subset(sample, feature_subset(kEightFeatures), cfg);
  CHECK(a.plane == b.plane);
  CHECK(a.correct == b.correct);
  CHECK(a.lossy_count == b.lossy_count);
  CHECK(count_correct(a.plane, std::vector<Point>{}, std::vector<int>{}) == 0);

  cfg.normalize = true;
  CHECK(evaluate_subset(sample, {0, 1}, cfg).normalized);

  auto broken = sample;
  broken[3].fields.erase("worst_texture");
  try {
    evaluate_subset(broken, {0, 1}, cfg);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("radius;texture") != std::string::npos);
  }
  CHECK_THROWS_AS(evaluate_subset(std::vector<DatasetRecord>{}, {0}, cfg), InvalidInput);
}

TEST_CASE("search_features is schedule independent") {
  const std::vector<DatasetRecord> sample(wdbc_records().begin(), wdbc_records().begin() + 80);
  SearchConfig cfg;
  cfg.pocket.max_epochs = 5;
  const auto subsets = enumerate_subsets(9, 10);
  const auto serial = search_features(sample, subsets, cfg);
  cfg.threads = 4;
  const auto parallel = search_features(sample, subsets, cfg);
  REQUIRE(serial.size() == subsets.size());
  std::ostringstream x, y;
  write_ranking_csv(x, rank_subsets(serial));
  write_ranking_csv(y, rank_subsets(parallel));
  CHECK(x.str() == y.str());
  for (std::size_t k = 0; k < subsets.size(); ++k) CHECK(serial[k].subset == subsets[k]);

  const auto doc = nlohmann::json::parse(ranking_json(rank_subsets(serial), cfg));
  CHECK(doc["results"].size() == subsets.size());
}

TEST_CASE("rank_subsets ordering") {
  CHECK_THROWS_AS(rank_subsets({}), InvalidInput);
  const auto ranked = rank_subsets({fake({0, 1, 2, 3, 4}, 9, 10), fake({5, 6, 7}, 9, 10), fake({1, 2, 3}, 9, 10),
                                    fake({0}, 8, 10), fake({9}, 19, 20)});
  CHECK(ranked[0].subset == FeatureSubset{9});
  CHECK(ranked[1].subset == FeatureSubset{1, 2, 3});
  CHECK(ranked[2].subset == FeatureSubset{5, 6, 7});
  CHECK(ranked[3].subset == FeatureSubset{0, 1, 2, 3, 4});
  CHECK(ranked[4].subset == FeatureSubset{0});

  std::ostringstream out;
  write_ranking_csv(out, ranked);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "rank,subset,size,accuracy,correct,total,a,b,c,d,lossy_count,normalized");
  std::getline(in, line);
  CHECK(line.rfind("1,fractal_dimension,1,", 0) == 0);
}

TEST_CASE("constants grow with the feature set") {
  std::mt19937_64 rng(9);
  const auto all = enumerate_subsets(1, 10);
  for (int t = 0; t < 40; ++t) {
    const auto& b = all[rng() % all.size()];
    FeatureSubset a;
    for (auto f : b) {
      if (rng() % 2) a.push_back(f);
    }
    if (a.empty()) a.push_back(b.front());
    const auto sa = wdbc_schema(feature_names(a));
    const auto sb = wdbc_schema(feature_names(b));
    for (std::size_t k = 0; k < wdbc_records().size(); k += 7) {
      const auto& rec = wdbc_records()[k];
      CHECK(reduce_sample(rec, sa).polynomial.constant() <= reduce_sample(rec, sb).polynomial.constant() + 1e-12);
    }
  }
}
