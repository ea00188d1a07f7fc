#include "pbdr/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pbdr/csv.hpp"
#include "pbdr/error.hpp"
#include "pbdr/feature_search.hpp"
#include "pbdr/format.hpp"
#include "pbdr/ingest.hpp"
#include "pbdr/plot.hpp"
#include "pbdr/reduction.hpp"
#include "pbdr/separators.hpp"

namespace pbdr::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Loaded {
  LoadResult load;
  SampleSchema schema;
};

Loaded load_dataset(const RunConfig& cfg) {
  if (cfg.dataset.empty()) throw InvalidInput("--dataset is required");
  if (!cfg.features.empty() && cfg.schema != "wdbc") throw InvalidInput("--features applies to --schema wdbc only");
  if (cfg.schema == "iris") return {load_iris(cfg.dataset, LoadMode::lenient), iris_schema()};
  if (cfg.schema == "wdbc") {
    auto schema = cfg.features.empty() ? wdbc_schema() : wdbc_schema(cfg.features);
    return {load_wdbc(cfg.dataset, LoadMode::lenient), std::move(schema)};
  }
  auto [load, schema] = load_with_schema(cfg.dataset, cfg.schema, LoadMode::lenient);
  return {std::move(load), std::move(schema)};
}

struct Reduced {
  Loaded data;
  BatchResult batch;
  bool partial() const { return !data.load.errors.empty() || !batch.failures.empty(); }
};

Reduced load_and_reduce(const RunConfig& cfg) {
  auto data = load_dataset(cfg);
  if (data.load.records.empty()) throw InvalidInput("no valid records in '" + cfg.dataset + "'");
  ReduceOptions options;
  options.normalize = cfg.normalize;
  options.threads = cfg.threads;
  auto batch = reduce_dataset(data.load.records, data.schema, options);
  if (batch.samples.empty()) throw InvalidInput("every sample failed to reduce");
  return {std::move(data), std::move(batch)};
}

AxisMapping axis_mapping(const RunConfig& cfg, std::size_t dim) {
  if (dim == 2) {
    if (cfg.axes == "consistent") return {1, 0};
    if (cfg.axes == "prose") return {0, 1};
    throw InvalidInput("--axes must be 'consistent' or 'prose'");
  }
  if (dim == 3) return parse_mapping(cfg.mapping, 3);
  AxisMapping identity(dim);
  for (std::size_t k = 0; k < dim; ++k) identity[k] = k;
  return identity;
}

std::string coefficient_name(std::size_t k) { return k == 0 ? "constant" : "degree-" + std::to_string(k) + " coefficient"; }

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + path.string() + "'");
  f << content;
}

std::string failures_csv(const Reduced& r) {
  std::ostringstream s;
  s << "stage,location,id,field,message\n";
  for (const auto& e : r.data.load.errors) {
    csv::write_row(s, {"load", "line " + std::to_string(e.line), e.id, e.column, e.message});
  }
  for (const auto& f : r.batch.failures) {
    csv::write_row(s, {"reduce", "record " + std::to_string(f.index + 1), f.id, f.field, f.message});
  }
  return s.str();
}

// Writes the error sidecar when needed and reports the exit code.
int finish(const Reduced& r, const RunConfig& cfg, std::ostream& err) {
  if (!r.partial()) return kSuccess;
  const auto path = fs::path(cfg.out) / "errors.csv";
  write_file(path, failures_csv(r));
  err << "warning: " << r.data.load.errors.size() + r.batch.failures.size()
      << " sample(s) failed; details in " << path.string() << "\n";
  return kPartial;
}

std::vector<LabeledPoint> labeled_points(const BatchResult& batch, const AxisMapping& mapping) {
  std::vector<LabeledPoint> out;
  for (const auto& s : batch.samples) {
    if (!s.label) throw InvalidInput("sample '" + s.id + "' has no label; clustering needs labelled data");
    out.push_back({s.id, apply_mapping(s.vector.values, mapping), *s.label});
  }
  return out;
}

DecisionRule load_rule(const std::string& path, std::size_t dim) {
  if (path.empty()) throw InvalidInput("--rule is required");
  const auto text = csv::read_file(path);
  if (path.ends_with(".json")) return rule_from_json(text);
  return parse_rule(text, dim);
}

// --- reduce ------------------------------------------------------------------

int cmd_reduce(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto r = load_and_reduce(cfg);
  const std::size_t dim = r.data.schema.row_labels().size();

  std::ostringstream table;
  std::vector<std::string> header = {"id", "label"};
  for (std::size_t k = 0; k < dim; ++k) header.push_back("c" + std::to_string(k));
  header.push_back("lossy");
  csv::write_row(table, header);
  std::ostringstream polys;
  std::size_t lossy = 0;
  for (const auto& s : r.batch.samples) {
    std::vector<std::string> row = {s.id, s.label.value_or("")};
    for (double v : s.vector.values) row.push_back(format_double(v));
    row.push_back(s.vector.lossy ? "1" : "0");
    csv::write_row(table, row);
    polys << s.id << '\t' << s.label.value_or("") << '\t' << to_string(s.polynomial, r.data.schema.row_labels())
          << '\n';
    lossy += s.vector.lossy ? 1 : 0;
  }
  const auto dir = fs::path(cfg.out);
  write_file(dir / "reduced.csv", table.str());
  write_file(dir / "polynomials.txt", polys.str());
  for (const auto& w : r.data.load.warnings) err << "data-quality: " << w << "\n";
  out << "reduced " << r.batch.samples.size() << " samples to " << dim << " coefficients (" << lossy
      << " lossy projections); wrote " << (dir / "reduced.csv").string() << "\n";
  return finish(r, cfg, err);
}

// --- cluster -----------------------------------------------------------------

int cmd_cluster(const RunConfig& cfg, const std::string& rule_path, std::ostream& out, std::ostream& err) {
  const auto r = load_and_reduce(cfg);
  const std::size_t dim = r.data.schema.row_labels().size();
  const auto rule = load_rule(rule_path, dim);
  if (rule.dimension() != dim) {
    throw InvalidInput("rule has dimension " + std::to_string(rule.dimension()) + " but samples reduce to " +
                       std::to_string(dim) + " coefficients");
  }
  const auto mapping = axis_mapping(cfg, dim);
  const auto samples = labeled_points(r.batch, mapping);
  const auto report = accuracy(rule, samples);

  ordered_json sweep = ordered_json::array();
  for (const auto& m : all_mappings(dim)) {
    const auto rep = accuracy(rule, labeled_points(r.batch, m));
    sweep.push_back({{"mapping", mapping_name(m)}, {"correct", rep.correct}, {"accuracy", rep.accuracy}});
  }

  ordered_json doc;
  doc["dataset"] = fs::path(cfg.dataset).filename().string();
  doc["preprocessing"] = cfg.normalize ? "minmax" : "none";
  doc["mapping"] = mapping_name(mapping);
  doc["rule"] = ordered_json::parse(to_json(rule));
  doc["report"] = ordered_json::parse(to_json(report));
  doc["mapping_sweep"] = sweep;

  std::ostringstream text;
  text << "rule:\n" << to_text(rule) << "mapping: " << mapping_name(mapping)
       << "  preprocessing: " << (cfg.normalize ? "minmax" : "none") << "\n";
  text << "accuracy: " << report.correct << "/" << report.total << " = " << format_fixed(report.accuracy, 4) << "\n";
  text << "confusion (truth -> predicted):\n";
  for (const auto& [key, count] : report.confusion) {
    text << "  " << key.first << " -> " << key.second << ": " << count << "\n";
  }
  const auto errors = report.errors();
  text << "misclassified (" << errors.size() << "):\n";
  for (const auto& e : errors) {
    text << "  " << e.id << "  truth=" << e.truth << "  predicted=" << e.predicted
         << "  distance=" << format_fixed(e.signed_distance, 6) << "\n";
  }
  text << "mapping sweep:\n";
  for (const auto& s : sweep) {
    text << "  " << s["mapping"].get<std::string>() << ": " << s["correct"].get<std::size_t>() << "/"
         << report.total << " = " << format_fixed(s["accuracy"].get<double>(), 4) << "\n";
  }
  std::ostringstream full;
  full << text.str() << "\nid,truth,predicted,signed_distance\n";
  for (const auto& p : report.predictions) {
    csv::write_row(full, {p.id, p.truth, p.predicted, format_double(p.signed_distance)});
  }

  const auto dir = fs::path(cfg.out);
  write_file(dir / "cluster_report.json", doc.dump(2) + "\n");
  write_file(dir / "cluster_report.txt", full.str());
  out << text.str();
  return finish(r, cfg, err);
}

// --- search-features -------------------------------------------------------------

int cmd_search(const RunConfig& cfg, std::size_t min_size, std::size_t max_size, std::ostream& out,
               std::ostream& err) {
  if (cfg.schema != "wdbc") throw InvalidInput("search-features needs --schema wdbc");
  if (!cfg.features.empty()) throw InvalidInput("search-features enumerates subsets itself; drop --features");
  if (cfg.dataset.empty()) throw InvalidInput("--dataset is required");
  const auto load = load_wdbc(cfg.dataset, LoadMode::strict);
  SearchConfig search;
  search.pocket.max_epochs = cfg.epochs;
  search.normalize = cfg.normalize;
  search.mapping = parse_mapping(cfg.mapping, 3);
  search.threads = cfg.threads;
  const auto ranked = rank_subsets(search_features(load.records, enumerate_subsets(min_size, max_size), search));

  std::ostringstream table;
  write_ranking_csv(table, ranked);
  const auto dir = fs::path(cfg.out);
  write_file(dir / "ranking.csv", table.str());
  write_file(dir / "ranking.json", ranking_json(ranked, search));
  for (const auto& w : load.warnings) err << "data-quality: " << w << "\n";
  const auto& best = ranked.front();
  out << "evaluated " << ranked.size() << " subsets (preprocessing: " << (cfg.normalize ? "minmax" : "none")
      << ", epochs: " << cfg.epochs << ")\n";
  out << "best subset: " << subset_key(best.subset) << "  accuracy " << best.correct << "/" << best.total << " = "
      << format_fixed(best.accuracy(), 4) << "\n  plane: " << to_text(best.plane) << "\n";
  return kSuccess;
}

// --- plot ------------------------------------------------------------------------

int cmd_plot(const RunConfig& cfg, const std::string& input, const std::string& rule_path,
             const std::string& output, std::ostream& out) {
  if (input.empty()) throw InvalidInput("--input (a reduced CSV) is required");
  const auto rows = csv::parse(csv::read_file(input));
  if (rows.size() < 2) throw InvalidInput("'" + input + "' has no data rows");
  const auto& header = rows[0].fields;
  std::size_t dim = 0;
  while (2 + dim < header.size() && header[2 + dim] == "c" + std::to_string(dim)) ++dim;
  if (header.size() < 3 || header[0] != "id" || header[1] != "label" || dim == 0) {
    throw InvalidInput("'" + input + "' is not a reduced-coordinates CSV");
  }
  if (dim > 3) throw InvalidInput("cannot plot " + std::to_string(dim) + " dimensions (at most 3)");
  if (dim < 2) throw InvalidInput("plots need 2 or 3 coefficients");

  const auto mapping = axis_mapping(cfg, dim);
  std::vector<PlotPoint> points;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != header.size()) throw InvalidInput("line " + std::to_string(rows[r].line) + ": wrong column count");
    std::vector<double> values;
    for (std::size_t k = 0; k < dim; ++k) {
      auto v = csv::parse_number(f[2 + k]);
      if (!v) throw InvalidInput("line " + std::to_string(rows[r].line) + ": bad coefficient '" + f[2 + k] + "'");
      values.push_back(*v);
    }
    points.push_back({apply_mapping(values, mapping), f[1]});
  }
  std::vector<Hyperplane> planes;
  if (!rule_path.empty()) {
    const auto rule = load_rule(rule_path, dim);
    for (const auto& c : rule.clauses()) planes.push_back(c.plane);
  }
  PlotOptions options;
  options.title = fs::path(input).filename().string();
  for (auto k : mapping) options.axis_names.push_back(coefficient_name(k));
  const auto svg = dim == 2 ? scatter_svg_2d(points, planes, options) : scatter_svg_3d(points, planes, options);
  const auto path = output.empty() ? fs::path(cfg.out) / "figure.svg" : fs::path(output);
  write_file(path, svg);
  out << "plotted " << points.size() << " points and " << planes.size() << " separator(s) to " << path.string()
      << "\n";
  return kSuccess;
}

// --- equivalence ----------------------------------------------------------------

std::string join_labels(const std::vector<std::optional<std::string>>& labels) {
  std::set<std::string> distinct;
  for (const auto& l : labels) distinct.insert(l.value_or("(none)"));
  std::string out;
  for (const auto& l : distinct) out += (out.empty() ? "" : ", ") + l;
  return out;
}

int cmd_equivalence(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto r = load_and_reduce(cfg);
  const auto groups = group_equivalent(r.batch.samples, cfg.tolerance);
  std::ostringstream text;
  std::size_t shown = 0;
  std::size_t mixed = 0;
  text << "tolerance: " << format_double(cfg.tolerance) << "\n";
  for (const auto& g : groups) {
    if (g.members.size() < 2) continue;
    ++shown;
    text << "group " << shown << " (" << g.members.size() << " members): "
         << to_string(g.representative, r.data.schema.row_labels()) << "\n  ids:";
    for (const auto& id : g.ids) text << ' ' << id;
    text << "\n  labels: " << join_labels(g.labels) << "\n";
    if (g.mixed_labels()) {
      ++mixed;
      text << "WARNING: group " << shown << " mixes labels (" << join_labels(g.labels) << ")\n";
    }
  }
  text << shown << " group(s) with 2 or more members out of " << r.batch.samples.size() << " samples; " << mixed
       << " with mixed labels\n";
  write_file(fs::path(cfg.out) / "equivalence.txt", text.str());
  out << text.str();
  return finish(r, cfg, err);
}

void add_common(CLI::App* cmd, RunConfig& cfg, bool needs_data) {
  auto* ds = cmd->add_option("--dataset", cfg.dataset, "Input CSV (Iris, UCI WDBC, or anything a --schema file describes)");
  if (needs_data) ds->required();
  cmd->add_option("--schema", cfg.schema, "iris | wdbc | path to a JSON schema file")->capture_default_str();
  cmd->add_option("--features", cfg.features, "WDBC feature subset, comma separated")->delimiter(',');
  cmd->add_option("--tolerance", cfg.tolerance, "Equivalence tolerance")->capture_default_str();
  cmd->add_flag("--normalize", cfg.normalize, "Min-max rescale every mapped field over the dataset first");
  cmd->add_option("--axes", cfg.axes, "2-D axes: consistent (x = degree-1, y = constant) | prose")
      ->capture_default_str();
  cmd->add_option("--mapping", cfg.mapping, "3-D coefficient order for (x, y, z)")->capture_default_str();
  cmd->add_option("--epochs", cfg.epochs, "Pocket perceptron epochs per search")->capture_default_str();
  cmd->add_option("--out", cfg.out, "Output directory")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads, 0 = all cores")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-Boolean polynomial dimensionality reduction and linear cluster analysis", "pbdr"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string rule_path, input, output;
  std::size_t min_size = 1, max_size = 10;

  auto* reduce = app.add_subcommand("reduce", "Reduce every sample to its coefficient vector");
  add_common(reduce, cfg, true);
  auto* cluster = app.add_subcommand("cluster", "Classify reduced samples with a line/plane rule");
  add_common(cluster, cfg, true);
  cluster->add_option("--rule", rule_path, "Rule file (text or .json)")->required();
  auto* search = app.add_subcommand("search-features", "Rank WDBC feature subsets by separating-plane accuracy");
  add_common(search, cfg, true);
  search->add_option("--min-size", min_size, "Smallest subset size")->capture_default_str();
  search->add_option("--max-size", max_size, "Largest subset size")->capture_default_str();
  auto* plot = app.add_subcommand("plot", "Render a reduced CSV as an SVG scatter plot");
  add_common(plot, cfg, false);
  plot->add_option("--input", input, "Reduced CSV written by 'reduce'")->required();
  plot->add_option("--rule", rule_path, "Optional rule whose lines/planes are drawn");
  plot->add_option("--output", output, "SVG path (default <out>/figure.svg)");
  auto* equivalence = app.add_subcommand("equivalence", "List groups of samples with equivalent reductions");
  add_common(equivalence, cfg, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kFatal;
  }

  try {
    if (*reduce) return cmd_reduce(cfg, out, err);
    if (*cluster) return cmd_cluster(cfg, rule_path, out, err);
    if (*search) return cmd_search(cfg, min_size, max_size, out, err);
    if (*plot) return cmd_plot(cfg, input, rule_path, output, out);
    if (*equivalence) return cmd_equivalence(cfg, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kFatal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFatal;
  }
  return kFatal;
}

}  // namespace pbdr::cli
