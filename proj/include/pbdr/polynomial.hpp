#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pbdr/cost_matrix.hpp"

namespace pbdr {

/// Sorted, duplicate-free set of variable (row) indices.
using Term = std::vector<std::uint32_t>;

/// Canonical monomial order: by degree, then lexicographically by index.
struct TermLess {
  bool operator()(const Term& a, const Term& b) const noexcept {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

struct Monomial {
  double coefficient = 0.0;
  Term term;

  std::size_t degree() const noexcept { return term.size(); }
  bool operator==(const Monomial&) const = default;
};

/// Multilinear pseudo-Boolean polynomial: constant + sum of c_S * prod_{i in S} y_i.
///
/// Construction only validates the monomials (non-empty sorted terms over
/// [0, num_vars), finite coefficients); it does not reduce. Use reduce() or
/// is_reduced() for the canonical form.
class PseudoBooleanPolynomial {
 public:
  PseudoBooleanPolynomial() = default;
  PseudoBooleanPolynomial(std::size_t num_vars, double constant, std::vector<Monomial> monomials);

  std::size_t num_vars() const noexcept { return num_vars_; }
  double constant() const noexcept { return constant_; }
  const std::vector<Monomial>& monomials() const noexcept { return monomials_; }

  /// No similar monomials, no zero coefficients, canonical order.
  bool is_reduced() const noexcept;

  /// Coefficient of the given term (0 when absent). Linear scan.
  double coefficient(const Term& term) const noexcept;

  bool operator==(const PseudoBooleanPolynomial&) const = default;

 private:
  std::size_t num_vars_ = 0;
  double constant_ = 0.0;
  std::vector<Monomial> monomials_;
};

/// Degree-aggregated coefficients: values[d] is the sum of all degree-d
/// coefficients, values[0] the constant.
struct CoefficientVector {
  std::vector<double> values;
  bool lossy = false;

  bool operator==(const CoefficientVector&) const = default;
};

/// Penalty-based (Hammer-Beresnev) formulation of the column-covering
/// objective of `matrix`, returned reduced.
///
/// Each column is sorted ascending (ties by row index); its smallest value
/// goes to the constant and each successive difference c[k+1]-c[k] becomes
/// the coefficient of the product of the first k sorted rows. Columns are
/// accumulated in label order so the result does not depend on the column
/// order of the input.
PseudoBooleanPolynomial formulate(const CostMatrix& matrix);

/// Merges similar monomials, drops zero coefficients, sorts canonically.
PseudoBooleanPolynomial reduce(const PseudoBooleanPolynomial& poly);

double evaluate(const PseudoBooleanPolynomial& poly, std::span<const bool> assignment);
double evaluate(const PseudoBooleanPolynomial& poly, const std::vector<bool>& assignment);

/// Sum over columns of the minimum cost among the rows in `subset`.
double objective(const CostMatrix& matrix, std::span<const std::size_t> subset);

/// The assignment at which the polynomial equals objective(matrix, subset):
/// y_i = 1 exactly when row i is not selected.
std::vector<bool> assignment_for_subset(std::size_t num_vars, std::span<const std::size_t> subset);

struct SubsetOptimum {
  std::vector<std::size_t> subset;
  double value = 0.0;
};

/// Exhaustive minimisation of objective() over subsets of size p. Returns the
/// lexicographically smallest minimiser.
SubsetOptimum argmin_subsets(const CostMatrix& matrix, std::size_t p);

/// Aggregates coefficients per degree. The polynomial is reduced first if
/// needed. Per-degree sums are taken in ascending value order so the result
/// does not depend on variable labelling.
CoefficientVector degree_project(const PseudoBooleanPolynomial& poly);

constexpr double kDefaultTolerance = 1e-9;

/// Constants and every term's coefficient agree within `tol` (absolute),
/// absent terms counting as zero.
bool equivalent(const PseudoBooleanPolynomial& a, const PseudoBooleanPolynomial& b,
                double tol = kDefaultTolerance);

/// Human-readable form, e.g. "6 + 2.4*y[petal]". Without labels variables
/// print as y1..ym.
std::string to_string(const PseudoBooleanPolynomial& poly,
                      std::span<const std::string> var_labels = {});

}  // namespace pbdr
