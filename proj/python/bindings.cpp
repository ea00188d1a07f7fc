#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pbdr/cli.hpp"
#include "pbdr/error.hpp"
#include "pbdr/feature_search.hpp"
#include "pbdr/ingest.hpp"
#include "pbdr/polynomial.hpp"
#include "pbdr/reduction.hpp"
#include "pbdr/separators.hpp"

namespace py = pybind11;
using namespace pbdr;

namespace {

CostMatrix as_matrix(const py::object& obj) {
  if (py::isinstance<CostMatrix>(obj)) return obj.cast<CostMatrix>();
  return CostMatrix(obj.cast<std::vector<std::vector<double>>>());
}

SampleSchema schema_named(const std::string& name, const std::vector<std::string>& features) {
  if (name == "iris") {
    if (!features.empty()) throw InvalidInput("features apply to the wdbc schema only");
    return iris_schema();
  }
  if (name == "wdbc") return features.empty() ? wdbc_schema() : wdbc_schema(features);
  throw InvalidInput("schema must be 'iris' or 'wdbc'");
}

py::dict load_result(const LoadResult& r) {
  py::list errors;
  for (const auto& e : r.errors) {
    errors.append(py::dict(py::arg("line") = e.line, py::arg("id") = e.id, py::arg("column") = e.column,
                           py::arg("message") = e.message));
  }
  py::dict out;
  out["records"] = r.records;
  out["errors"] = errors;
  out["warnings"] = r.warnings;
  return out;
}

LoadMode mode_of(bool lenient) { return lenient ? LoadMode::lenient : LoadMode::strict; }

py::dict separator_result(const SeparatorResult& r) {
  py::dict out;
  out["plane"] = r.plane;
  out["correct"] = r.correct;
  out["total"] = r.total;
  out["accuracy"] = r.accuracy();
  return out;
}

}  // namespace

PYBIND11_MODULE(_pbdr, m) {
  m.doc() = "Pseudo-Boolean polynomial dimensionality reduction";

  auto invalid = py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  (void)invalid;

  py::class_<CostMatrix>(m, "CostMatrix")
      .def(py::init<std::vector<std::string>, std::vector<std::string>, std::vector<std::vector<double>>>(),
           py::arg("row_labels"), py::arg("col_labels"), py::arg("cells"))
      .def(py::init<const std::vector<std::vector<double>>&>(), py::arg("cells"))
      .def_property_readonly("rows", &CostMatrix::rows)
      .def_property_readonly("cols", &CostMatrix::cols)
      .def_property_readonly("row_labels", &CostMatrix::row_labels)
      .def_property_readonly("col_labels", &CostMatrix::col_labels)
      .def("__getitem__", [](const CostMatrix& c, std::pair<std::size_t, std::size_t> ij) {
        if (ij.first >= c.rows() || ij.second >= c.cols()) throw py::index_error();
        return c(ij.first, ij.second);
      });

  py::class_<PseudoBooleanPolynomial>(m, "Polynomial")
      .def(py::init([](std::size_t num_vars, double constant,
                       const std::vector<std::pair<double, Term>>& monomials) {
             std::vector<Monomial> terms;
             for (const auto& [c, t] : monomials) terms.push_back({c, t});
             return PseudoBooleanPolynomial(num_vars, constant, std::move(terms));
           }),
           py::arg("num_vars"), py::arg("constant"), py::arg("monomials") = std::vector<std::pair<double, Term>>{})
      .def_property_readonly("num_vars", &PseudoBooleanPolynomial::num_vars)
      .def_property_readonly("constant", &PseudoBooleanPolynomial::constant)
      .def_property_readonly("monomials",
                             [](const PseudoBooleanPolynomial& p) {
                               std::vector<std::pair<double, Term>> out;
                               for (const auto& mono : p.monomials()) out.emplace_back(mono.coefficient, mono.term);
                               return out;
                             })
      .def("coefficient", &PseudoBooleanPolynomial::coefficient, py::arg("term"))
      .def("is_reduced", &PseudoBooleanPolynomial::is_reduced)
      .def("__eq__", [](const PseudoBooleanPolynomial& a, const PseudoBooleanPolynomial& b) { return a == b; })
      .def("__str__", [](const PseudoBooleanPolynomial& p) { return to_string(p); })
      .def("__repr__", [](const PseudoBooleanPolynomial& p) { return "Polynomial(" + to_string(p) + ")"; });

  m.def("formulate", [](const py::object& matrix) { return formulate(as_matrix(matrix)); }, py::arg("matrix"),
        "Reduced penalty polynomial of a cost matrix (object or nested list)");
  m.def("reduce", &reduce, py::arg("poly"));
  m.def("evaluate", py::overload_cast<const PseudoBooleanPolynomial&, const std::vector<bool>&>(&evaluate),
        py::arg("poly"), py::arg("assignment"));
  m.def("objective",
        [](const py::object& matrix, const std::vector<std::size_t>& subset) {
          return objective(as_matrix(matrix), subset);
        },
        py::arg("matrix"), py::arg("subset"));
  m.def("assignment_for_subset",
        [](std::size_t n, const std::vector<std::size_t>& subset) { return assignment_for_subset(n, subset); },
        py::arg("num_vars"), py::arg("subset"));
  m.def("argmin_subsets",
        [](const py::object& matrix, std::size_t p) {
          const auto r = argmin_subsets(as_matrix(matrix), p);
          return std::make_pair(r.subset, r.value);
        },
        py::arg("matrix"), py::arg("p"));
  m.def("degree_project",
        [](const PseudoBooleanPolynomial& p) {
          const auto v = degree_project(p);
          return std::make_pair(v.values, v.lossy);
        },
        py::arg("poly"), "(per-degree sums, lossy)");
  m.def("equivalent", &equivalent, py::arg("a"), py::arg("b"), py::arg("tol") = kDefaultTolerance);

  py::class_<DatasetRecord>(m, "Record")
      .def(py::init([](std::string id, std::map<std::string, double> fields, std::optional<std::string> label) {
             return DatasetRecord{std::move(id), std::move(fields), std::move(label)};
           }),
           py::arg("id"), py::arg("fields"), py::arg("label") = py::none())
      .def_readwrite("id", &DatasetRecord::id)
      .def_readwrite("fields", &DatasetRecord::fields)
      .def_readwrite("label", &DatasetRecord::label)
      .def("__eq__", [](const DatasetRecord& a, const DatasetRecord& b) { return a == b; })
      .def("__repr__", [](const DatasetRecord& r) { return "Record(id='" + r.id + "')"; });

  m.def("load_iris", [](const std::string& path, bool lenient) { return load_result(load_iris(path, mode_of(lenient))); },
        py::arg("path"), py::arg("lenient") = false);
  m.def("load_wdbc", [](const std::string& path, bool lenient) { return load_result(load_wdbc(path, mode_of(lenient))); },
        py::arg("path"), py::arg("lenient") = false);

  py::class_<SampleSchema>(m, "Schema")
      .def_property_readonly("row_labels", &SampleSchema::row_labels)
      .def_property_readonly("col_labels", &SampleSchema::col_labels)
      .def("fields", &SampleSchema::fields);
  m.def("schema", &schema_named, py::arg("name"), py::arg("features") = std::vector<std::string>{},
        "Built-in schema: 'iris', or 'wdbc' optionally restricted to features");
  m.def("wdbc_features", [] { return std::vector<std::string>(wdbc_features().begin(), wdbc_features().end()); });

  py::class_<ReducedSample>(m, "ReducedSample")
      .def_readonly("id", &ReducedSample::id)
      .def_property_readonly("values", [](const ReducedSample& s) { return s.vector.values; })
      .def_property_readonly("lossy", [](const ReducedSample& s) { return s.vector.lossy; })
      .def_readonly("polynomial", &ReducedSample::polynomial)
      .def_readonly("label", &ReducedSample::label);
  m.def("reduce_sample", &reduce_sample, py::arg("record"), py::arg("schema"));
  m.def("reduce_dataset",
        [](const std::vector<DatasetRecord>& records, const SampleSchema& schema, bool normalize,
           std::size_t threads) {
          const auto r = reduce_dataset(records, schema, {normalize, threads});
          py::list failures;
          for (const auto& f : r.failures) {
            failures.append(py::dict(py::arg("index") = f.index, py::arg("id") = f.id, py::arg("field") = f.field,
                                     py::arg("message") = f.message));
          }
          return std::make_pair(r.samples, failures);
        },
        py::arg("records"), py::arg("schema"), py::arg("normalize") = false, py::arg("threads") = 1,
        "(samples, failures)");
  m.def("group_equivalent",
        [](const std::vector<ReducedSample>& samples, double tol) {
          py::list out;
          for (const auto& g : group_equivalent(samples, tol)) {
            out.append(py::dict(py::arg("members") = g.members, py::arg("ids") = g.ids,
                                py::arg("labels") = g.labels, py::arg("mixed_labels") = g.mixed_labels(),
                                py::arg("representative") = g.representative));
          }
          return out;
        },
        py::arg("samples"), py::arg("tol") = kDefaultTolerance);

  py::class_<Hyperplane>(m, "Hyperplane")
      .def(py::init<std::vector<double>, double>(), py::arg("normal"), py::arg("offset"))
      .def_property_readonly("normal", &Hyperplane::normal)
      .def_property_readonly("offset", &Hyperplane::offset)
      .def("value", [](const Hyperplane& h, const std::vector<double>& p) { return h.value(p); })
      .def("__eq__", [](const Hyperplane& a, const Hyperplane& b) { return a == b; })
      .def("__str__", [](const Hyperplane& h) { return to_text(h); });
  m.def("confidence", [](const Hyperplane& h, const std::vector<double>& p) { return confidence(h, p); },
        py::arg("plane"), py::arg("point"));

  py::class_<DecisionRule>(m, "DecisionRule")
      .def(py::init([](const std::vector<std::pair<Hyperplane, std::string>>& clauses, std::string fallback) {
             std::vector<Clause> cs;
             for (const auto& [h, l] : clauses) cs.push_back({h, l});
             return DecisionRule(std::move(cs), std::move(fallback));
           }),
           py::arg("clauses"), py::arg("fallback"))
      .def_property_readonly("dimension", &DecisionRule::dimension)
      .def_property_readonly("fallback", &DecisionRule::fallback)
      .def("__str__", [](const DecisionRule& r) { return to_text(r); });
  m.def("parse_rule", [](const std::string& text, std::size_t dim) { return parse_rule(text, dim); }, py::arg("text"),
        py::arg("dimension") = 0);
  m.def("classify", [](const DecisionRule& r, const std::vector<double>& p) { return classify(r, p); },
        py::arg("rule"), py::arg("point"));
  m.def("accuracy",
        [](const DecisionRule& rule, const std::vector<std::tuple<std::string, Point, std::string>>& samples) {
          std::vector<LabeledPoint> pts;
          for (const auto& [id, p, l] : samples) pts.push_back({id, p, l});
          const auto rep = accuracy(rule, pts);
          py::list errors;
          for (const auto& e : rep.errors()) {
            errors.append(py::make_tuple(e.id, e.truth, e.predicted, e.signed_distance));
          }
          py::dict out;
          out["correct"] = rep.correct;
          out["total"] = rep.total;
          out["accuracy"] = rep.accuracy;
          out["errors"] = errors;
          return out;
        },
        py::arg("rule"), py::arg("samples"), "samples: list of (id, point, label)");
  m.def("apply_mapping",
        [](const std::vector<double>& v, const AxisMapping& mapping) { return apply_mapping(v, mapping); });
  m.def("parse_mapping", [](const std::string& text, std::size_t dim) { return parse_mapping(text, dim); });

  m.def("search_separator_pocket",
        [](const std::vector<Point>& pts, const std::vector<int>& labels, std::size_t epochs) {
          return separator_result(search_separator_pocket(pts, labels, {epochs}));
        },
        py::arg("points"), py::arg("labels"), py::arg("max_epochs") = 100);
  m.def("search_separator_exact",
        [](const std::vector<Point>& pts, const std::vector<int>& labels, std::size_t threads) {
          ExactConfig cfg;
          cfg.threads = threads;
          return separator_result(search_separator_exact(pts, labels, cfg));
        },
        py::arg("points"), py::arg("labels"), py::arg("threads") = 1);

  m.def("enumerate_subsets", &enumerate_subsets, py::arg("min_size"), py::arg("max_size"));
  m.def("evaluate_subset",
        [](const std::vector<DatasetRecord>& records, const std::vector<std::string>& features, bool normalize,
           const std::string& mapping, std::size_t epochs) {
          SearchConfig cfg;
          cfg.normalize = normalize;
          cfg.mapping = parse_mapping(mapping, 3);
          cfg.pocket.max_epochs = epochs;
          const auto r = evaluate_subset(records, feature_subset(features), cfg);
          py::dict out;
          out["features"] = feature_names(r.subset);
          out["plane"] = r.plane;
          out["correct"] = r.correct;
          out["total"] = r.total;
          out["accuracy"] = r.accuracy();
          out["lossy_count"] = r.lossy_count;
          return out;
        },
        py::arg("records"), py::arg("features"), py::arg("normalize") = false,
        py::arg("mapping") = "const,deg1,deg2", py::arg("epochs") = 100);

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "pbdr");
          std::ostringstream out, err;
          int code;
          {
            py::gil_scoped_release release;
            code = cli::run(args, out, err);
          }
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a pbdr command in-process; returns (exit_code, stdout, stderr)");
}
