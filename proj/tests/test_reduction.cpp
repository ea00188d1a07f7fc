#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pbdr/ingest.hpp"
#include "pbdr/reduction.hpp"

using namespace pbdr;

namespace {

const std::string kData = PBDR_DATA_DIR;

DatasetRecord iris_record(std::string id, double sl, double sw, double pl, double pw, std::string label = "setosa") {
  return {std::move(id), {{"sepal_length", sl}, {"sepal_width", sw}, {"petal_length", pl}, {"petal_width", pw}},
          std::move(label)};
}

ReducedSample constant_sample(std::string id, double c, std::string label = "a") {
  PseudoBooleanPolynomial p(2, c, {});
  return {std::move(id), degree_project(p), p, std::move(label)};
}

// Per-degree sums of the Moebius coefficients, padded to `m` entries.
std::vector<double> oracle_projection(const oracle::Cells& cells) {
  std::vector<double> out(cells.size(), 0.0);
  for (const auto& [mask, c] : oracle::moebius_coefficients(cells)) {
    const auto d = static_cast<std::size_t>(__builtin_popcount(mask));
    if (d < out.size()) {
      out[d] += c;
    } else {
      CHECK(std::abs(c) < 1e-9);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("schema validation") {
  using Map = SampleSchema::CellMap;
  CHECK_THROWS_AS(SampleSchema({"a"}, {"x", "y"}, Map{{{"a", "x"}, "f"}}), InvalidInput);
  CHECK_THROWS_AS(SampleSchema({"a"}, {"x", "y"}, Map{{{"a", "x"}, "f"}, {{"a", "y"}, "f"}}), InvalidInput);
  CHECK_THROWS_AS(SampleSchema({}, {"x"}, Map{}), InvalidInput);
  const SampleSchema s({"a"}, {"x", "y"}, Map{{{"a", "x"}, "f"}, {{"a", "y"}, "g"}, {{"b", "x"}, "h"}});
  CHECK(s.cell_map().size() == 2);
  CHECK(s.with_columns({"y"}).fields() == std::vector<std::string>{"g"});
  CHECK_THROWS_AS(s.with_columns({"z"}), InvalidInput);
}

TEST_CASE("reduce_sample: worked Iris record") {
  const auto r = reduce_sample(iris_record("w", 5.4, 3.0, 4.5, 1.5), iris_schema());
  REQUIRE(r.vector.values.size() == 2);
  CHECK(r.vector.values[0] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(r.vector.values[1] == doctest::Approx(2.4).epsilon(1e-12));
  CHECK_FALSE(r.vector.lossy);
  CHECK(r.label == "setosa");
  CHECK(r.id == "w");
}

TEST_CASE("reduce_sample: equal organs leave only the constant") {
  const auto r = reduce_sample(iris_record("e", 2.0, 1.0, 2.0, 1.0), iris_schema());
  CHECK(r.vector.values[0] == doctest::Approx(3.0));
  CHECK(r.vector.values[1] == 0.0);
  CHECK(r.polynomial.monomials().empty());
}

TEST_CASE("reduce_sample: field errors") {
  auto rec = iris_record("bad", 5.0, 3.0, 1.0, 0.2);
  rec.fields.erase("petal_width");
  try {
    reduce_sample(rec, iris_schema());
    FAIL("expected SampleError");
  } catch (const SampleError& e) {
    CHECK(e.sample_id() == "bad");
    CHECK(e.field() == "petal_width");
  }
  rec.fields["petal_width"] = -0.1;
  CHECK_THROWS_AS(reduce_sample(rec, iris_schema()), SampleError);
  rec.fields["petal_width"] = NAN;
  CHECK_THROWS_AS(reduce_sample(rec, iris_schema()), SampleError);
}

TEST_CASE("WDBC two-feature reductions match the brute-force oracle") {
  const auto data = load_wdbc(kData + "/wdbc.data");
  const auto schema = wdbc_schema({"radius", "texture"});
  std::size_t lossy = 0;
  for (const auto& rec : data.records) {
    oracle::Cells cells;
    for (const auto& stat : wdbc_stats()) {
      cells.push_back({rec.fields.at(wdbc_field(stat, "radius")), rec.fields.at(wdbc_field(stat, "texture"))});
    }
    const auto expected = oracle_projection(cells);
    const auto r = reduce_sample(rec, schema);
    REQUIRE(r.vector.values.size() == 3);
    for (std::size_t d = 0; d < 3; ++d) {
      CAPTURE(rec.id);
      CHECK(std::abs(r.vector.values[d] - expected[d]) <= 1e-9 * std::max(1.0, std::abs(expected[d])));
    }
    lossy += r.vector.lossy ? 1 : 0;
  }
  CHECK(lossy == 0);
}

TEST_CASE("full datasets reduce without failures") {
  const auto iris = load_iris(kData + "/iris.csv");
  const auto ir = reduce_dataset(iris.records, iris_schema());
  CHECK(ir.samples.size() == 150);
  CHECK(ir.failures.empty());
  for (const auto& s : ir.samples) CHECK(s.vector.values.size() == 2);

  const auto wdbc = load_wdbc(kData + "/wdbc.data");
  const auto wr = reduce_dataset(wdbc.records, wdbc_schema());
  CHECK(wr.samples.size() == 569);
  CHECK(wr.failures.empty());
  for (const auto& s : wr.samples) {
    CHECK(s.vector.values.size() == 3);
    CHECK_FALSE(s.vector.lossy);
  }
}

TEST_CASE("reduce_dataset: errors and failures") {
  CHECK_THROWS_AS(reduce_dataset(std::vector<DatasetRecord>{}, iris_schema()), InvalidInput);

  std::vector<DatasetRecord> recs{iris_record("1", 5.1, 3.5, 1.4, 0.2), iris_record("2", 4.9, -3.0, 1.4, 0.2),
                                  iris_record("3", 6.3, 3.3, 6.0, 2.5, "virginica")};
  recs[2].fields.erase("sepal_length");
  const auto res = reduce_dataset(recs, iris_schema());
  REQUIRE(res.samples.size() == 1);
  CHECK(res.samples[0].id == "1");
  REQUIRE(res.failures.size() == 2);
  CHECK(res.failures[0].index == 1);
  CHECK(res.failures[0].field == "sepal_width");
  CHECK(res.failures[1].index == 2);
  CHECK(res.failures[1].id == "3");
  CHECK(res.failures[1].field == "sepal_length");
}

TEST_CASE("reduce_dataset: record order and thread count do not matter") {
  const auto iris = load_iris(kData + "/iris.csv").records;
  const auto base = reduce_dataset(iris, iris_schema());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    auto shuffled = iris;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto res = reduce_dataset(shuffled, iris_schema(), {false, 4});
    for (const auto& s : res.samples) {
      const auto it = std::find_if(base.samples.begin(), base.samples.end(),
                                   [&](const ReducedSample& b) { return b.id == s.id; });
      REQUIRE(it != base.samples.end());
      CHECK(it->vector == s.vector);
      CHECK(it->polynomial == s.polynomial);
    }
  }
  const auto threaded = reduce_dataset(iris, iris_schema(), {false, 3});
  for (std::size_t k = 0; k < iris.size(); ++k) CHECK(threaded.samples[k].vector == base.samples[k].vector);
}

TEST_CASE("reduce_sample: column order of the schema does not matter") {
  const auto wdbc = load_wdbc(kData + "/wdbc.data").records;
  std::vector<std::string> features(wdbc_features().begin(), wdbc_features().end());
  std::mt19937_64 rng(3);
  const auto base = reduce_dataset(wdbc, wdbc_schema());
  for (int trial = 0; trial < 3; ++trial) {
    std::shuffle(features.begin(), features.end(), rng);
    const auto res = reduce_dataset(wdbc, wdbc_schema(features));
    for (std::size_t k = 0; k < wdbc.size(); ++k) {
      CHECK(res.samples[k].vector == base.samples[k].vector);
      CHECK(res.samples[k].polynomial == base.samples[k].polynomial);
    }
  }
}

TEST_CASE("normalize_minmax") {
  std::vector<DatasetRecord> recs{{"a", {{"x", 2.0}, {"y", 5.0}}, {}},
                                  {"b", {{"x", 4.0}, {"y", 5.0}}, {}},
                                  {"c", {{"x", 3.0}}, {}}};
  const auto out = normalize_minmax(recs, {"x", "y"});
  CHECK(out[0].fields.at("x") == 0.0);
  CHECK(out[1].fields.at("x") == 1.0);
  CHECK(out[2].fields.at("x") == 0.5);
  CHECK(out[0].fields.at("y") == 0.0);
  CHECK_FALSE(out[2].fields.contains("y"));

  const auto iris = load_iris(kData + "/iris.csv").records;
  const auto res = reduce_dataset(iris, iris_schema(), {true, 1});
  REQUIRE(res.samples.size() == 150);
  for (const auto& s : res.samples) {
    // two columns of values in [0, 1]
    CHECK(s.vector.values[0] >= 0.0);
    CHECK(s.vector.values[0] + s.vector.values[1] <= 2.0 + 1e-12);
  }
}

TEST_CASE("group_equivalent: the Iris pair") {
  const auto iris = load_iris(kData + "/iris.csv").records;
  const auto res = reduce_dataset(iris, iris_schema());
  const auto groups = group_equivalent(res.samples);
  bool found = false;
  for (const auto& g : groups) {
    if (std::find(g.ids.begin(), g.ids.end(), "21") != g.ids.end()) {
      CHECK(std::find(g.ids.begin(), g.ids.end(), "22") != g.ids.end());
      found = true;
    }
  }
  CHECK(found);

  const auto strict = group_equivalent(res.samples, 0.0);
  CHECK(strict.size() >= groups.size());
}

TEST_CASE("group_equivalent: singletons, chains and errors") {
  std::vector<ReducedSample> s{constant_sample("a", 1.0), constant_sample("b", 5.0), constant_sample("c", 9.0)};
  auto groups = group_equivalent(s);
  REQUIRE(groups.size() == 3);
  CHECK(groups[1].members == std::vector<std::size_t>{1});

  const double tol = 1e-3;
  std::vector<ReducedSample> chain{constant_sample("z", 7.0), constant_sample("c", 1.0 + 1.5 * tol, "y"),
                                   constant_sample("a", 1.0), constant_sample("b", 1.0 + 0.75 * tol)};
  CHECK_FALSE(equivalent(chain[1].polynomial, chain[2].polynomial, tol));
  groups = group_equivalent(chain, tol);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].members == std::vector<std::size_t>{0});
  CHECK(groups[1].members == std::vector<std::size_t>{1, 2, 3});
  CHECK(groups[1].ids == std::vector<std::string>{"c", "a", "b"});
  CHECK(groups[1].mixed_labels());
  CHECK_FALSE(groups[0].mixed_labels());
  CHECK(groups[1].representative == chain[1].polynomial);

  CHECK(group_equivalent(std::vector<ReducedSample>{}).empty());
  CHECK_THROWS_AS(group_equivalent(chain, -1.0), InvalidInput);
  PseudoBooleanPolynomial three(3, 1.0, {});
  chain.push_back({"w", degree_project(three), three, {}});
  CHECK_THROWS_AS(group_equivalent(chain), InvalidInput);
}

TEST_CASE("group_equivalent: groups partition the input and match pairwise closure") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> step(0, 6);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ReducedSample> s;
    const std::size_t n = 5 + rng() % 40;
    for (std::size_t k = 0; k < n; ++k) {
      PseudoBooleanPolynomial p(2, step(rng) * 0.5, {{step(rng) * 0.5, {1}}});
      s.push_back({std::to_string(k), degree_project(p), reduce(p), std::string(k % 2 ? "x" : "y")});
    }
    const double tol = 0.5;
    const auto groups = group_equivalent(s, tol);

    std::vector<int> owner(n, -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      CHECK(std::is_sorted(groups[g].members.begin(), groups[g].members.end()));
      if (g > 0) CHECK(groups[g - 1].members.front() < groups[g].members.front());
      for (auto m : groups[g].members) {
        CHECK(owner[m] == -1);
        owner[m] = static_cast<int>(g);
      }
    }
    CHECK(std::count(owner.begin(), owner.end(), -1) == 0);

    // Oracle: Floyd-Warshall style closure of the pairwise relation.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) reach[i][j] = equivalent(s[i].polynomial, s[j].polynomial, tol);
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) CHECK(reach[i][j] == (owner[i] == owner[j]));
    }
  }
}
