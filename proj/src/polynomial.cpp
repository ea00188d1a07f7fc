#include "pbdr/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

#include "pbdr/error.hpp"
#include "pbdr/format.hpp"

namespace pbdr {

namespace {

using TermMap = std::map<Term, double, TermLess>;

std::vector<Monomial> collect_nonzero(const TermMap& sums) {
  std::vector<Monomial> out;
  out.reserve(sums.size());
  for (const auto& [term, coefficient] : sums) {
    if (coefficient != 0.0) out.push_back({coefficient, term});
  }
  return out;
}

}  // namespace

PseudoBooleanPolynomial::PseudoBooleanPolynomial(std::size_t num_vars, double constant,
                                                 std::vector<Monomial> monomials)
    : num_vars_(num_vars), constant_(constant), monomials_(std::move(monomials)) {
  if (!std::isfinite(constant_)) throw InvalidInput("polynomial constant is not finite");
  for (const auto& m : monomials_) {
    if (!std::isfinite(m.coefficient)) throw InvalidInput("monomial coefficient is not finite");
    if (m.term.empty()) throw InvalidInput("monomial term is empty; fold it into the constant");
    for (std::size_t k = 0; k < m.term.size(); ++k) {
      if (m.term[k] >= num_vars_) {
        throw InvalidInput("variable index " + std::to_string(m.term[k]) + " out of range for " +
                           std::to_string(num_vars_) + " variables");
      }
      if (k > 0 && m.term[k - 1] >= m.term[k]) {
        throw InvalidInput("monomial term must be strictly increasing");
      }
    }
  }
}

bool PseudoBooleanPolynomial::is_reduced() const noexcept {
  TermLess less;
  for (std::size_t k = 0; k < monomials_.size(); ++k) {
    if (monomials_[k].coefficient == 0.0) return false;
    if (k > 0 && !less(monomials_[k - 1].term, monomials_[k].term)) return false;
  }
  return true;
}

double PseudoBooleanPolynomial::coefficient(const Term& term) const noexcept {
  double sum = 0.0;
  for (const auto& m : monomials_) {
    if (m.term == term) sum += m.coefficient;
  }
  return sum;
}

PseudoBooleanPolynomial formulate(const CostMatrix& matrix) {
  const std::size_t m = matrix.rows();
  double constant = 0.0;
  TermMap sums;
  std::vector<std::uint32_t> order(m);

  for (std::size_t j : matrix.canonical_column_order()) {
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return matrix(a, j) < matrix(b, j); });
    constant += matrix(order[0], j);
    Term prefix;
    for (std::size_t k = 1; k < m; ++k) {
      prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), order[k - 1]), order[k - 1]);
      const double step = matrix(order[k], j) - matrix(order[k - 1], j);
      if (step != 0.0) sums[prefix] += step;
    }
  }
  return PseudoBooleanPolynomial(m, constant, collect_nonzero(sums));
}

PseudoBooleanPolynomial reduce(const PseudoBooleanPolynomial& poly) {
  if (poly.is_reduced()) return poly;
  TermMap sums;
  for (const auto& mono : poly.monomials()) sums[mono.term] += mono.coefficient;
  return PseudoBooleanPolynomial(poly.num_vars(), poly.constant(), collect_nonzero(sums));
}

double evaluate(const PseudoBooleanPolynomial& poly, std::span<const bool> assignment) {
  if (assignment.size() != poly.num_vars()) {
    throw InvalidInput("assignment has length " + std::to_string(assignment.size()) + ", expected " +
                       std::to_string(poly.num_vars()));
  }
  double value = poly.constant();
  for (const auto& mono : poly.monomials()) {
    if (std::all_of(mono.term.begin(), mono.term.end(), [&](auto i) { return assignment[i]; })) {
      value += mono.coefficient;
    }
  }
  return value;
}

double evaluate(const PseudoBooleanPolynomial& poly, const std::vector<bool>& assignment) {
  const std::unique_ptr<bool[]> bits(new bool[assignment.size()]);
  std::copy(assignment.begin(), assignment.end(), bits.get());
  return evaluate(poly, std::span<const bool>(bits.get(), assignment.size()));
}

double objective(const CostMatrix& matrix, std::span<const std::size_t> subset) {
  if (subset.empty()) throw InvalidInput("objective needs a non-empty row subset");
  for (auto i : subset) {
    if (i >= matrix.rows()) throw InvalidInput("row index " + std::to_string(i) + " out of range");
  }
  double total = 0.0;
  for (std::size_t j : matrix.canonical_column_order()) {
    double best = matrix(subset[0], j);
    for (auto i : subset) best = std::min(best, matrix(i, j));
    total += best;
  }
  return total;
}

std::vector<bool> assignment_for_subset(std::size_t num_vars, std::span<const std::size_t> subset) {
  std::vector<bool> y(num_vars, true);
  for (auto i : subset) {
    if (i >= num_vars) throw InvalidInput("row index " + std::to_string(i) + " out of range");
    y[i] = false;
  }
  return y;
}

SubsetOptimum argmin_subsets(const CostMatrix& matrix, std::size_t p) {
  const std::size_t m = matrix.rows();
  if (p < 1 || p > m) {
    throw InvalidInput("subset size " + std::to_string(p) + " outside [1, " + std::to_string(m) + "]");
  }
  // Lexicographic enumeration of p-combinations; strict improvement keeps
  // the first minimiser.
  std::vector<std::size_t> combo(p);
  std::iota(combo.begin(), combo.end(), 0);
  SubsetOptimum best{combo, objective(matrix, combo)};
  while (true) {
    std::size_t k = p;
    while (k > 0 && combo[k - 1] == m - p + k - 1) --k;
    if (k == 0) break;
    ++combo[k - 1];
    for (std::size_t t = k; t < p; ++t) combo[t] = combo[t - 1] + 1;
    const double value = objective(matrix, combo);
    if (value < best.value) best = {combo, value};
  }
  return best;
}

CoefficientVector degree_project(const PseudoBooleanPolynomial& poly) {
  const auto reduced = reduce(poly);
  const std::size_t m = reduced.num_vars();
  if (m == 0) throw InvalidInput("cannot project a polynomial with no variables");

  std::vector<std::vector<double>> by_degree(m);
  for (const auto& mono : reduced.monomials()) {
    if (mono.degree() >= m) {
      throw InvalidInput("degree-" + std::to_string(mono.degree()) +
                         " monomial does not fit a projection of length " + std::to_string(m));
    }
    by_degree[mono.degree()].push_back(mono.coefficient);
  }

  CoefficientVector out;
  out.values.assign(m, 0.0);
  out.values[0] = reduced.constant();
  for (std::size_t d = 1; d < m; ++d) {
    auto& coeffs = by_degree[d];
    if (coeffs.size() >= 2) out.lossy = true;
    std::sort(coeffs.begin(), coeffs.end());
    out.values[d] = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
  }
  return out;
}

bool equivalent(const PseudoBooleanPolynomial& a, const PseudoBooleanPolynomial& b, double tol) {
  if (a.num_vars() != b.num_vars()) {
    throw InvalidInput("cannot compare polynomials over " + std::to_string(a.num_vars()) + " and " +
                       std::to_string(b.num_vars()) + " variables");
  }
  if (!(tol >= 0.0)) throw InvalidInput("tolerance must be a non-negative number");
  const auto ra = reduce(a);
  const auto rb = reduce(b);
  if (!(std::abs(ra.constant() - rb.constant()) <= tol)) return false;

  const auto& ma = ra.monomials();
  const auto& mb = rb.monomials();
  TermLess less;
  std::size_t i = 0;
  std::size_t k = 0;
  while (i < ma.size() || k < mb.size()) {
    double diff;
    if (k == mb.size() || (i < ma.size() && less(ma[i].term, mb[k].term))) {
      diff = ma[i++].coefficient;
    } else if (i == ma.size() || less(mb[k].term, ma[i].term)) {
      diff = mb[k++].coefficient;
    } else {
      diff = ma[i++].coefficient - mb[k++].coefficient;
    }
    if (!(std::abs(diff) <= tol)) return false;
  }
  return true;
}

std::string to_string(const PseudoBooleanPolynomial& poly, std::span<const std::string> var_labels) {
  auto var = [&](std::uint32_t i) {
    if (i < var_labels.size()) return "y[" + var_labels[i] + "]";
    return "y" + std::to_string(i + 1);
  };
  std::string out = format_double(poly.constant());
  for (const auto& mono : poly.monomials()) {
    out += mono.coefficient < 0 ? " - " : " + ";
    out += format_double(std::abs(mono.coefficient));
    for (auto i : mono.term) out += "*" + var(i);
  }
  return out;
}

}  // namespace pbdr
