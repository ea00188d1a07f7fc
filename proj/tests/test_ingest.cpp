#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pbdr/csv.hpp"
#include "pbdr/error.hpp"
#include "pbdr/ingest.hpp"

using namespace pbdr;

namespace {

const std::string kData = PBDR_DATA_DIR;
const std::string kSource = PBDR_SOURCE_DIR;

std::string wdbc_header() {
  std::string h = "id,diagnosis";
  for (const auto& s : wdbc_stats()) {
    for (const auto& f : wdbc_features()) h += "," + wdbc_field(s, f);
  }
  return h;
}

std::string wdbc_row(const std::string& id, const std::string& code, double mean, double se, double worst) {
  std::string row = id + "," + code;
  for (double v : {mean, se, worst}) {
    for (int k = 0; k < 10; ++k) row += "," + std::to_string(v);
  }
  return row;
}

}  // namespace

TEST_CASE("csv parsing") {
  const auto rows = csv::parse("a,b,c\r\n1,\"x, y\",\"he said \"\"hi\"\"\"\n\n  \n2,,3");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].fields == std::vector<std::string>{"1", "x, y", "he said \"hi\""});
  CHECK(rows[2].fields == std::vector<std::string>{"2", "", "3"});
  CHECK(rows[2].line == 5);
  CHECK_THROWS_AS(csv::parse("a,\"b\n"), ParseError);

  std::ostringstream out;
  csv::write_row(out, {"plain", "with,comma", "q\"uote"});
  CHECK(out.str() == "plain,\"with,comma\",\"q\"\"uote\"\n");
}

TEST_CASE("plain decimal numbers only") {
  CHECK(csv::parse_number(" 2.5 ") == 2.5);
  CHECK(csv::parse_number("-1e-3") == -1e-3);
  CHECK(csv::parse_number("+4") == 4.0);
  CHECK(csv::parse_number(".5") == 0.5);
  for (const char* bad : {"", "1,000", "1 000", "inf", "nan", "0x10", "1.2.3", "3cm", "--1", "e5"}) {
    CAPTURE(bad);
    CHECK_FALSE(csv::parse_number(bad).has_value());
  }
}

TEST_CASE("canonical column names") {
  CHECK(canonical_column_name("sepal length (cm)") == "sepal_length");
  CHECK(canonical_column_name("Sepal.Length") == "sepal_length");
  CHECK(canonical_column_name("  PETAL WIDTH (CM) ") == "petal_width");
  CHECK(canonical_column_name("concave points") == "concave_points");
  CHECK(canonical_column_name("Id") == "id");
}

TEST_CASE("load_iris on the bundled file") {
  const auto result = load_iris(kData + "/iris.csv");
  REQUIRE(result.records.size() == 150);
  CHECK(result.errors.empty());
  std::map<std::string, int> counts;
  for (const auto& r : result.records) ++counts[r.label.value()];
  CHECK(counts == std::map<std::string, int>{{"setosa", 50}, {"versicolor", 50}, {"virginica", 50}});
  const auto& first = result.records.front();
  CHECK(first.id == "1");
  CHECK(first.fields.at("sepal_length") == 5.1);
  CHECK(first.fields.at("petal_width") == 0.2);
}

TEST_CASE("load_iris header variants and errors") {
  const auto alt = parse_iris("Sepal.Length,Sepal.Width,Petal.Length,Petal.Width,Species\n5.1,3.5,1.4,0.2,Iris-setosa\n");
  REQUIRE(alt.records.size() == 1);
  CHECK(alt.records[0].label == "setosa");
  CHECK(alt.records[0].id == "1");

  CHECK_THROWS_AS(parse_iris(""), ParseError);
  CHECK_THROWS_AS(parse_iris("sepal length,sepal width,petal length,petal width,target\n"), ParseError);
  CHECK_THROWS_AS(parse_iris("sepal length,sepal width,petal length,target\n1,2,3,setosa\n"), ParseError);

  const std::string bad = "sepal length,sepal width,petal length,petal width,target\n"
                          "5.1,3.5,1.4,0.2,setosa\n"
                          "4.9,abc,1.4,0.2,setosa\n";
  try {
    parse_iris(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == "sepal_width");
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  const auto lenient = parse_iris(bad, LoadMode::lenient);
  CHECK(lenient.records.size() == 1);
  REQUIRE(lenient.errors.size() == 1);
  CHECK(lenient.errors[0].line == 3);
  CHECK(lenient.errors[0].column == "sepal_width");
}

TEST_CASE("load_wdbc on the bundled file") {
  const auto result = load_wdbc(kData + "/wdbc.data");
  REQUIRE(result.records.size() == 569);
  std::size_t malignant = 0, benign = 0;
  for (const auto& r : result.records) {
    CHECK(r.fields.size() == 30);
    (r.label == "malignant" ? malignant : benign)++;
  }
  CHECK(malignant == 212);
  CHECK(benign == 357);
  CHECK(result.records[0].fields.at("mean_radius") == 17.99);
  CHECK(result.records[0].fields.at("worst_fractal_dimension") == 0.1189);
  CHECK(result.records[0].fields.at("se_concave_points") == 0.01587);
}

TEST_CASE("load_wdbc errors and warnings") {
  CHECK_THROWS_AS(parse_wdbc(wdbc_row("7", "X", 2, 1, 3)), ParseError);
  CHECK_THROWS_AS(parse_wdbc("7,M,1,2,3\n"), ParseError);
  CHECK_THROWS_AS(parse_wdbc(""), ParseError);

  const auto with_header = parse_wdbc(wdbc_header() + "\n" + wdbc_row("7", "M", 2, 1, 3) + "\n");
  REQUIRE(with_header.records.size() == 1);
  CHECK(with_header.records[0].label == "malignant");
  CHECK(with_header.warnings.empty());

  const auto odd = parse_wdbc(wdbc_row("8", "B", 2, 1, 1.5) + "\n");
  REQUIRE(odd.records.size() == 1);
  CHECK(odd.records[0].label == "benign");
  CHECK(odd.warnings.size() == 10);
  CHECK(odd.warnings[0].find("worst_radius") != std::string::npos);
}

TEST_CASE("wdbc schemas") {
  const auto full = wdbc_schema();
  CHECK(full.row_labels() == std::vector<std::string>{"mean", "se", "worst"});
  CHECK(full.col_labels().size() == 10);
  CHECK(full.field("worst", "concave_points") == "worst_concave_points");
  const auto pair = wdbc_schema({"radius", "texture"});
  CHECK(pair.fields().size() == 6);
  CHECK_THROWS_AS(wdbc_schema({"radius", "radius"}), InvalidInput);
  CHECK_THROWS_AS(wdbc_schema({"volume"}), InvalidInput);
}

TEST_CASE("load_with_schema") {
  SUBCASE("iris schema file reproduces load_iris") {
    auto [loaded, schema] = load_with_schema(kData + "/iris.csv", kSource + "/schemas/iris.json");
    const auto direct = load_iris(kData + "/iris.csv");
    CHECK(loaded.records == direct.records);
    CHECK(schema.fields() == iris_schema().fields());
  }
  SUBCASE("schema referencing an absent column") {
    const auto schema = parse_schema_file(R"({"rows":["a"],"cols":["x"],"cells":{"a":{"x":"missing col"}}})");
    try {
      parse_with_schema("id,present\n1,2\n", schema);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.column() == "missing_col");
    }
  }
  SUBCASE("WDBC subset schema restricts at matrix-build time") {
    std::string text = wdbc_header() + "\n";
    std::istringstream in(csv::read_file(kData + "/wdbc.data"));
    std::string line;
    for (int k = 0; k < 5 && std::getline(in, line); ++k) text += line + "\n";
    const auto schema = parse_schema_file(csv::read_file(kSource + "/schemas/wdbc_subset8.json"));
    const auto loaded = parse_with_schema(text, schema);
    REQUIRE(loaded.records.size() == 5);
    CHECK(loaded.records[0].fields.size() == 30);
    CHECK(loaded.records[0].label == "malignant");
    CHECK(schema.schema.fields().size() == 24);
    CHECK(loaded.records == parse_wdbc(text).records);
  }
  SUBCASE("malformed schema documents") {
    CHECK_THROWS_AS(parse_schema_file("{"), ParseError);
    CHECK_THROWS_AS(parse_schema_file(R"({"rows":["a"],"cols":["x"]})"), ParseError);
    CHECK_THROWS_AS(parse_schema_file(R"({"rows":["a","b"],"cols":["x"],"cells":{"a":{"x":"f"}}})"), ParseError);
  }
}

TEST_CASE("records survive a CSV round trip") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(-1e6, 1e6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DatasetRecord> records;
    const std::size_t fields = 1 + rng() % 6;
    for (std::size_t r = 0; r < 1 + rng() % 20; ++r) {
      DatasetRecord rec;
      rec.id = "s" + std::to_string(r) + (r % 3 == 0 ? ",\"quoted\"" : "");
      for (std::size_t f = 0; f < fields; ++f) rec.fields["f" + std::to_string(f)] = value(rng) / (1 + rng() % 1000);
      if (r % 4 != 0) rec.label = r % 2 ? "alpha" : "beta gamma";
      records.push_back(rec);
    }
    std::ostringstream out;
    write_records(out, records);
    const auto back = parse_records(out.str());
    CHECK(back.records == records);
    // same bytes, same records
    CHECK(parse_records(out.str()).records == back.records);
  }
}
