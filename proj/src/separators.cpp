#include "pbdr/separators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "pbdr/csv.hpp"
#include "pbdr/error.hpp"
#include "pbdr/format.hpp"
#include "pbdr/parallel.hpp"

namespace pbdr {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void check_dimension(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw InvalidInput("point has dimension " + std::to_string(got) + ", expected " + std::to_string(expected));
  }
}

std::size_t validate_binary_input(std::span<const Point> points, std::span<const int> labels,
                                  std::size_t min_points) {
  if (points.size() < min_points) {
    throw InvalidInput("separator search needs at least " + std::to_string(min_points) + " points");
  }
  if (labels.size() != points.size()) throw InvalidInput("labels and points differ in length");
  const std::size_t dim = points.front().size();
  if (dim != 2 && dim != 3) throw InvalidInput("separator search supports dimension 2 or 3 only");
  for (const auto& p : points) {
    check_dimension(dim, p.size());
    for (double v : p) {
      if (!std::isfinite(v)) throw InvalidInput("point coordinate is not finite");
    }
  }
  for (int l : labels) {
    if (l != 0 && l != 1) throw InvalidInput("binary labels must be 0 or 1");
  }
  return dim;
}

// Plane with every point on the side that predicts `label`.
Hyperplane constant_classifier(std::span<const Point> points, int label) {
  double hi = 0.0;
  for (const auto& p : points) hi = std::max(hi, std::abs(p[0]));
  std::vector<double> normal(points.front().size(), 0.0);
  normal[0] = 1.0;
  return Hyperplane(std::move(normal), label == 1 ? hi + 1.0 : -(hi + 1.0));
}

}  // namespace

Hyperplane::Hyperplane(std::vector<double> normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  if (normal_.empty()) throw InvalidInput("hyperplane normal is empty");
  if (!std::isfinite(offset_) ||
      !std::all_of(normal_.begin(), normal_.end(), [](double v) { return std::isfinite(v); })) {
    throw InvalidInput("hyperplane coefficients must be finite");
  }
  if (std::all_of(normal_.begin(), normal_.end(), [](double v) { return v == 0.0; })) {
    throw InvalidInput("hyperplane normal is the zero vector");
  }
}

double Hyperplane::value(std::span<const double> point) const {
  check_dimension(dimension(), point.size());
  return dot(normal_, point) + offset_;
}

double Hyperplane::signed_distance(std::span<const double> point) const { return value(point) / norm(normal_); }

Hyperplane Hyperplane::scaled(double factor) const {
  std::vector<double> n = normal_;
  for (double& v : n) v *= factor;
  return Hyperplane(std::move(n), offset_ * factor);
}

double confidence(const Hyperplane& plane, std::span<const double> point) {
  return std::abs(plane.signed_distance(point));
}

DecisionRule::DecisionRule(std::vector<Clause> clauses, std::string fallback)
    : clauses_(std::move(clauses)), fallback_(std::move(fallback)) {
  if (clauses_.empty()) throw InvalidInput("decision rule needs at least one hyperplane");
  for (const auto& c : clauses_) {
    if (c.plane.dimension() != dimension()) throw InvalidInput("decision rule mixes hyperplane dimensions");
  }
}

DecisionRule::Decision DecisionRule::decide(std::span<const double> point) const {
  check_dimension(dimension(), point.size());
  for (std::size_t k = 0; k < clauses_.size(); ++k) {
    const auto& plane = clauses_[k].plane;
    if (plane.value(point) <= 0.0) return {clauses_[k].label, k, plane.signed_distance(point)};
  }
  return {fallback_, clauses_.size(), clauses_.back().plane.signed_distance(point)};
}

std::string classify(const DecisionRule& rule, std::span<const double> point) { return rule.decide(point).label; }

DecisionRule binary_rule(const Hyperplane& plane, std::string negative_label, std::string positive_label) {
  return DecisionRule({Clause{plane, std::move(negative_label)}}, std::move(positive_label));
}

std::vector<Prediction> ClassificationReport::errors() const {
  std::vector<Prediction> out;
  std::copy_if(predictions.begin(), predictions.end(), std::back_inserter(out),
               [](const Prediction& p) { return p.predicted != p.truth; });
  return out;
}

ClassificationReport accuracy(const DecisionRule& rule, std::span<const LabeledPoint> samples) {
  if (samples.empty()) throw InvalidInput("cannot score an empty sample set");
  ClassificationReport report;
  report.total = samples.size();
  for (const auto& s : samples) {
    const auto d = rule.decide(s.coords);
    if (d.label == s.label) ++report.correct;
    ++report.confusion[{s.label, d.label}];
    report.predictions.push_back({s.id, d.label, s.label, d.signed_distance});
  }
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

std::size_t count_correct(const Hyperplane& plane, std::span<const Point> points, std::span<const int> labels) {
  std::size_t correct = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const int predicted = plane.value(points[k]) > 0.0 ? 1 : 0;
    if (predicted == labels[k]) ++correct;
  }
  return correct;
}

SeparatorResult search_separator_pocket(std::span<const Point> points, std::span<const int> labels,
                                        const PocketConfig& config) {
  const std::size_t dim = validate_binary_input(points, labels, 2);
  const std::size_t n = points.size();
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0 || positives == n) throw DegenerateInput("separator search needs both classes present");

  std::vector<double> mean(dim, 0.0);
  std::vector<double> scale(dim, 0.0);
  for (const auto& p : points) {
    for (std::size_t k = 0; k < dim; ++k) mean[k] += p[k];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (const auto& p : points) {
    for (std::size_t k = 0; k < dim; ++k) scale[k] += (p[k] - mean[k]) * (p[k] - mean[k]);
  }
  for (double& s : scale) {
    s = std::sqrt(s / static_cast<double>(n));
    if (!(s > 0.0)) s = 1.0;
  }

  // Augmented, standardised inputs: (z_1..z_d, 1).
  const std::size_t width = dim + 1;
  std::vector<double> z(n * width);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dim; ++k) z[i * width + k] = (points[i][k] - mean[k]) / scale[k];
    z[i * width + dim] = 1.0;
  }
  auto score = [&](const std::vector<double>& w, std::size_t i) {
    double s = 0.0;
    for (std::size_t k = 0; k < width; ++k) s += w[k] * z[i * width + k];
    return s;
  };
  auto training_correct = [&](const std::vector<double>& w) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += ((score(w, i) > 0.0 ? 1 : 0) == labels[i]);
    return c;
  };

  std::vector<double> w(width, 0.0);
  std::optional<std::vector<double>> pocket;
  std::size_t pocket_correct = 0;
  for (std::size_t epoch = 0; epoch < config.max_epochs && pocket_correct < n; ++epoch) {
    std::size_t mistakes = 0;
    for (std::size_t i = 0; i < n && pocket_correct < n; ++i) {
      const int predicted = score(w, i) > 0.0 ? 1 : 0;
      if (predicted == labels[i]) continue;
      ++mistakes;
      const double sign = labels[i] == 1 ? 1.0 : -1.0;
      for (std::size_t k = 0; k < width; ++k) w[k] += sign * z[i * width + k];
      if (std::all_of(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(dim), [](double v) { return v == 0.0; })) {
        continue;
      }
      const std::size_t c = training_correct(w);
      if (!pocket || c > pocket_correct) {
        pocket = w;
        pocket_correct = c;
      }
    }
    if (mistakes == 0) break;
  }

  if (!pocket) {
    // Every update left a zero normal: all points share one location.
    const int majority = positives * 2 > n ? 1 : 0;
    auto plane = constant_classifier(points, majority);
    return {plane, count_correct(plane, points, labels), n};
  }

  std::vector<double> normal(dim);
  double offset = (*pocket)[dim];
  for (std::size_t k = 0; k < dim; ++k) {
    normal[k] = (*pocket)[k] / scale[k];
    offset -= normal[k] * mean[k];
  }
  Hyperplane plane(std::move(normal), offset);
  return {plane, count_correct(plane, points, labels), n};
}

namespace {

// Normal of the hyperplane through `pts` (2 points in 2-D, 3 in 3-D).
std::vector<double> normal_through(const std::vector<Point>& pts) {
  if (pts.size() == 2) {
    return {-(pts[1][1] - pts[0][1]), pts[1][0] - pts[0][0]};
  }
  const double ux = pts[1][0] - pts[0][0], uy = pts[1][1] - pts[0][1], uz = pts[1][2] - pts[0][2];
  const double vx = pts[2][0] - pts[0][0], vy = pts[2][1] - pts[0][1], vz = pts[2][2] - pts[0][2];
  return {uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx};
}

struct Best {
  std::optional<Hyperplane> plane;
  std::size_t correct = 0;

  void offer(const Hyperplane& candidate, std::size_t c) {
    if (!plane || c > correct) {
      plane = candidate;
      correct = c;
    }
  }
};

}  // namespace

SeparatorResult search_separator_exact(std::span<const Point> points, std::span<const int> labels,
                                       const ExactConfig& config) {
  if (points.size() > config.max_points) {
    throw InvalidInput("exact separator search refuses " + std::to_string(points.size()) +
                       " points (limit " + std::to_string(config.max_points) + ")");
  }
  const std::size_t dim = validate_binary_input(points, labels, 1);
  const std::size_t n = points.size();

  double coordinate_scale = 0.0;
  for (const auto& p : points) {
    for (double v : p) coordinate_scale = std::max(coordinate_scale, std::abs(v));
  }
  if (coordinate_scale == 0.0) coordinate_scale = 1.0;
  const double eps = 1e-9 * coordinate_scale;
  const std::size_t patterns = std::size_t{1} << dim;

  auto try_plane = [&](Best& best, const std::vector<double>& normal, double offset) {
    if (std::all_of(normal.begin(), normal.end(), [](double v) { return v == 0.0; })) return;
    const Hyperplane plane(normal, offset);
    const std::size_t c = count_correct(plane, points, labels);
    best.offer(plane, c);
    // The flipped plane has the same on-plane points labelled 0, so it is
    // scored separately rather than as n - c.
    const auto flipped = plane.flipped();
    best.offer(flipped, count_correct(flipped, points, labels));
  };

  // Candidates are grouped by the first defining point; per-group winners
  // are merged in index order, which reproduces the sequential tie-break.
  std::vector<Best> per_first(n);
  parallel_for(n, config.threads, [&](std::size_t first) {
    Best& best = per_first[first];
    std::vector<std::size_t> combo(dim);
    combo[0] = first;
    auto visit = [&](const std::vector<std::size_t>& idx) {
      std::vector<Point> pts;
      for (auto k : idx) pts.push_back(points[k]);
      const auto base = normal_through(pts);
      const double len = norm(base);
      if (!(len > 0.0)) return;
      try_plane(best, base, -dot(base, pts[0]));
      std::vector<double> unit = base;
      for (double& v : unit) v /= len;
      for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
        std::vector<Point> moved = pts;
        for (std::size_t k = 0; k < dim; ++k) {
          const double s = (pattern >> k) & 1 ? -eps : eps;
          for (std::size_t a = 0; a < dim; ++a) moved[k][a] += s * unit[a];
        }
        auto normal = normal_through(moved);
        if (dot(normal, unit) < 0.0) {
          for (double& v : normal) v = -v;
        }
        try_plane(best, normal, -dot(normal, moved[0]));
      }
    };
    if (dim == 2) {
      for (std::size_t j = first + 1; j < n; ++j) visit({first, j});
    } else {
      for (std::size_t j = first + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) visit({first, j, k});
      }
    }
  });

  Best best;
  for (auto& b : per_first) {
    if (b.plane) best.offer(*b.plane, b.correct);
  }
  for (int label : {0, 1}) {
    const auto plane = constant_classifier(points, label);
    best.offer(plane, count_correct(plane, points, labels));
  }
  return {*best.plane, best.correct, n};
}

AxisMapping parse_mapping(std::string_view text, std::size_t dimension) {
  static const std::vector<std::string> names = {"const", "deg1", "deg2", "deg3", "deg4"};
  AxisMapping mapping;
  std::string token;
  auto flush = [&] {
    std::string t = csv::trim(token);
    token.clear();
    if (t.empty()) return;
    auto it = std::find(names.begin(), names.end(), t);
    if (it != names.end()) {
      mapping.push_back(static_cast<std::size_t>(it - names.begin()));
    } else if (t == "c0" || t == "c1" || t == "c2" || t == "c3") {
      mapping.push_back(static_cast<std::size_t>(t[1] - '0'));
    } else {
      throw InvalidInput("unknown coordinate '" + t + "' in mapping");
    }
  };
  if (text.find(',') == std::string_view::npos && !text.empty() &&
      std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    for (char c : text) mapping.push_back(static_cast<std::size_t>(c - '0'));
  } else {
    for (char c : text) {
      if (c == ',') {
        flush();
      } else {
        token += c;
      }
    }
    flush();
  }
  std::vector<std::size_t> sorted = mapping;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> expected(dimension);
  std::iota(expected.begin(), expected.end(), 0);
  if (sorted != expected) {
    throw InvalidInput("mapping '" + std::string(text) + "' is not a permutation of " + std::to_string(dimension) +
                       " coefficients");
  }
  return mapping;
}

std::string mapping_name(const AxisMapping& mapping) {
  std::string out;
  for (std::size_t k = 0; k < mapping.size(); ++k) {
    if (k > 0) out += ',';
    out += mapping[k] == 0 ? std::string("const") : "deg" + std::to_string(mapping[k]);
  }
  return out;
}

std::vector<AxisMapping> all_mappings(std::size_t dimension) {
  AxisMapping m(dimension);
  std::iota(m.begin(), m.end(), 0);
  std::vector<AxisMapping> out;
  do {
    out.push_back(m);
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

Point apply_mapping(std::span<const double> values, const AxisMapping& mapping) {
  Point p;
  p.reserve(mapping.size());
  for (auto idx : mapping) {
    if (idx >= values.size()) throw InvalidInput("mapping refers to a missing coefficient");
    p.push_back(values[idx]);
  }
  return p;
}

namespace {

constexpr std::string_view kAxes = "xyz";

}  // namespace

std::string to_text(const Hyperplane& plane) {
  if (plane.dimension() > kAxes.size()) throw InvalidInput("text form covers at most 3 dimensions");
  std::string out;
  for (std::size_t k = 0; k < plane.dimension(); ++k) {
    out += format_double(plane.normal()[k]) + "*" + kAxes[k] + " + ";
  }
  out += format_double(plane.offset()) + " <= 0";
  return out;
}

std::string to_text(const DecisionRule& rule) {
  std::string out;
  for (const auto& c : rule.clauses()) out += to_text(c.plane) + " -> " + c.label + "\n";
  out += "otherwise -> " + rule.fallback() + "\n";
  return out;
}

namespace {

struct LinearForm {
  std::vector<double> coefficients;
  double constant = 0.0;
};

LinearForm parse_linear(std::string_view text, std::size_t line) {
  LinearForm form;
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s += c;
  }
  if (s.empty()) throw ParseError("empty expression", line);
  std::size_t pos = 0;
  bool any = false;
  while (pos < s.size()) {
    double sign = 1.0;
    bool have_sign = false;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') sign = -sign;
      have_sign = true;
      ++pos;
    }
    if (any && !have_sign) throw ParseError("expected '+' or '-' between terms", line);
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] != '+' && s[pos] != '-') {
      // exponents such as 1e-3 keep their sign
      if ((s[pos] == 'e' || s[pos] == 'E') && pos + 1 < s.size() && (s[pos + 1] == '+' || s[pos + 1] == '-') &&
          pos > start && std::isdigit(static_cast<unsigned char>(s[pos - 1]))) {
        pos += 2;
        continue;
      }
      ++pos;
    }
    const std::string term = s.substr(start, pos - start);
    if (term.empty()) throw ParseError("dangling sign in expression", line);
    std::string number = term;
    std::optional<std::size_t> axis;
    const auto var_pos = kAxes.find(term.back());
    if (var_pos != std::string_view::npos) {
      axis = var_pos;
      number = term.substr(0, term.size() - 1);
      if (number.ends_with('*')) {
        number.pop_back();
      } else if (!number.empty()) {
        throw ParseError("expected '*' before variable in '" + term + "'", line);
      }
      if (number.empty()) number = "1";
    }
    const auto value = csv::parse_number(number);
    if (!value) throw ParseError("bad coefficient '" + term + "'", line);
    if (axis) {
      if (form.coefficients.size() <= *axis) form.coefficients.resize(*axis + 1, 0.0);
      form.coefficients[*axis] += sign * *value;
    } else {
      form.constant += sign * *value;
    }
    any = true;
  }
  return form;
}

}  // namespace

DecisionRule parse_rule(std::string_view text, std::size_t dimension) {
  struct RawClause {
    LinearForm form;
    std::string label;
    std::size_t line;
  };
  std::vector<RawClause> raw;
  std::optional<std::string> fallback;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = csv::trim(line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) throw ParseError("missing '-> label'", line_no);
    const std::string label = csv::trim(line.substr(arrow + 2));
    if (label.empty()) throw ParseError("missing class label after '->'", line_no);
    const std::string lhs = csv::trim(line.substr(0, arrow));
    if (lhs == "otherwise" || lhs == "else") {
      if (fallback) throw ParseError("more than one fallback line", line_no);
      fallback = label;
      continue;
    }
    if (fallback) throw ParseError("clause after the fallback line", line_no);
    const auto le = lhs.find("<=");
    if (le == std::string::npos) throw ParseError("clause must have the form '<expr> <= 0'", line_no);
    const auto rhs = csv::parse_number(lhs.substr(le + 2));
    if (!rhs || *rhs != 0.0) throw ParseError("clause right-hand side must be 0", line_no);
    raw.push_back({parse_linear(lhs.substr(0, le), line_no), label, line_no});
  }
  if (raw.empty()) throw ParseError("rule has no hyperplanes");
  if (!fallback) throw ParseError("rule has no 'otherwise -> label' line");
  for (const auto& r : raw) dimension = std::max(dimension, r.form.coefficients.size());
  std::vector<Clause> clauses;
  for (auto& r : raw) {
    r.form.coefficients.resize(dimension, 0.0);
    try {
      clauses.push_back({Hyperplane(r.form.coefficients, r.form.constant), r.label});
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), r.line);
    }
  }
  return DecisionRule(std::move(clauses), *fallback);
}

}  // namespace pbdr
