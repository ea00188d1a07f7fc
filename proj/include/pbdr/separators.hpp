#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pbdr {

using Point = std::vector<double>;

/// Oriented hyperplane normal . v + offset = 0. A point is on the positive
/// side iff normal . v + offset > 0.
class Hyperplane {
 public:
  /// Throws InvalidInput for an empty, zero or non-finite normal.
  Hyperplane(std::vector<double> normal, double offset);

  std::size_t dimension() const noexcept { return normal_.size(); }
  const std::vector<double>& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }

  /// normal . point + offset; throws InvalidInput on dimension mismatch.
  double value(std::span<const double> point) const;
  double signed_distance(std::span<const double> point) const;
  Hyperplane scaled(double factor) const;
  Hyperplane flipped() const { return scaled(-1.0); }

  bool operator==(const Hyperplane&) const = default;

 private:
  std::vector<double> normal_;
  double offset_;
};

/// Orthogonal distance |normal . point + offset| / |normal|.
double confidence(const Hyperplane& plane, std::span<const double> point);

struct Clause {
  Hyperplane plane;
  std::string label;  // assigned when plane.value(point) <= 0

  bool operator==(const Clause&) const = default;
};

/// Ordered one-vs-rest rule: the first clause whose non-positive side holds
/// the point decides; otherwise the fallback label applies.
class DecisionRule {
 public:
  DecisionRule(std::vector<Clause> clauses, std::string fallback);

  std::size_t dimension() const noexcept { return clauses_.front().plane.dimension(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  const std::string& fallback() const noexcept { return fallback_; }

  struct Decision {
    std::string label;
    std::size_t clause;      // deciding clause, clauses().size() for the fallback
    double signed_distance;  // to the deciding clause's plane (last plane for the fallback)
  };
  Decision decide(std::span<const double> point) const;

  bool operator==(const DecisionRule&) const = default;

 private:
  std::vector<Clause> clauses_;
  std::string fallback_;
};

std::string classify(const DecisionRule& rule, std::span<const double> point);

/// Binary rule: non-positive side -> negative_label, positive side -> positive_label.
DecisionRule binary_rule(const Hyperplane& plane, std::string negative_label, std::string positive_label);

struct LabeledPoint {
  std::string id;
  Point coords;
  std::string label;
};

struct Prediction {
  std::string id;
  std::string predicted;
  std::string truth;
  double signed_distance = 0.0;
};

struct ClassificationReport {
  std::vector<Prediction> predictions;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;  // correct / total
  std::map<std::pair<std::string, std::string>, std::size_t> confusion;  // (truth, predicted) -> count

  std::vector<Prediction> errors() const;
};

/// Throws InvalidInput for an empty sample set.
ClassificationReport accuracy(const DecisionRule& rule, std::span<const LabeledPoint> samples);

// ---------------------------------------------------------------------------
// Separator search over binary labels (0 = non-positive side, 1 = positive).

struct SeparatorResult {
  Hyperplane plane;
  std::size_t correct = 0;
  std::size_t total = 0;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

std::size_t count_correct(const Hyperplane& plane, std::span<const Point> points, std::span<const int> labels);

struct PocketConfig {
  std::size_t max_epochs = 100;
};

/// Pocket perceptron. Coordinates are standardised internally (mean 0,
/// unit variance per axis) and the result is mapped back. Starts from zero
/// weights, sweeps points in index order, updates on every mistake and keeps
/// the weights with the highest training accuracy seen; stops early at
/// accuracy 1. Deterministic for a fixed input order.
///
/// Throws InvalidInput for fewer than 2 points, a dimension other than 2 or
/// 3, or labels outside {0, 1}; DegenerateInput when one class is missing.
SeparatorResult search_separator_pocket(std::span<const Point> points, std::span<const int> labels,
                                        const PocketConfig& config = {});

struct ExactConfig {
  std::size_t max_points = 200;
  std::size_t threads = 1;  // 0 = hardware concurrency
};

/// Exhaustive search over planes through every pair (2-D) or triple (3-D) of
/// points. Each base plane is tried as is and as the plane through the
/// defining points displaced by +-eps along its normal in every sign
/// pattern (eps = 1e-9 * coordinate scale), in both orientations; the two
/// constant classifiers close the candidate list. The first candidate with
/// the most correct points wins.
SeparatorResult search_separator_exact(std::span<const Point> points, std::span<const int> labels,
                                       const ExactConfig& config = {});

// ---------------------------------------------------------------------------
// Coordinate mapping from reduced coefficient vectors to plot/classify axes.

/// mapping[k] is the coefficient index shown on axis k.
using AxisMapping = std::vector<std::size_t>;

/// "const,deg1,deg2" / "deg1,const" / "012" style; throws InvalidInput.
AxisMapping parse_mapping(std::string_view text, std::size_t dimension);
std::string mapping_name(const AxisMapping& mapping);
std::vector<AxisMapping> all_mappings(std::size_t dimension);
Point apply_mapping(std::span<const double> values, const AxisMapping& mapping);

// ---------------------------------------------------------------------------
// Plain-text form: one clause per line, "a*x + b*y [+ c*z] + d <= 0 -> label",
// then "otherwise -> label". Blank lines and '#' comments are ignored.

std::string to_text(const Hyperplane& plane);
std::string to_text(const DecisionRule& rule);

/// Normals are padded with zeros to `dimension` when it exceeds the highest
/// variable used. Throws ParseError with the offending line.
DecisionRule parse_rule(std::string_view text, std::size_t dimension = 0);

}  // namespace pbdr

namespace pbdr {

// Structured JSON forms.
std::string to_json(const Hyperplane& plane);
std::string to_json(const DecisionRule& rule);
std::string to_json(const ClassificationReport& report);
/// Accepts what to_json(const DecisionRule&) produces; throws ParseError.
DecisionRule rule_from_json(std::string_view text);

}  // namespace pbdr
