// Exact sparse linear systems over the rationals.
#ifndef LENARD_LINSOLVE_HPP
#define LENARD_LINSOLVE_HPP

#include <map>
#include <optional>
#include <vector>

#include "lenard/diffalg.hpp"

namespace lenard {

using SparseRow = std::map<int, Rational>;

class LinearSystem {
public:
  explicit LinearSystem(int n_unknowns) : n_(n_unknowns) {}

  int unknowns() const { return n_; }
  void add_equation(SparseRow coeffs, Rational rhs);

  /// A solution with every free unknown set to zero, or nullopt if the
  /// system is inconsistent. Columns are pivoted in order, with the
  /// `pivot_last` unknowns tried last, so those stay zero whenever the
  /// system allows it.
  std::optional<std::vector<Rational>> solve(const std::vector<int>& pivot_last = {}) const;

  /// Rank of the coefficient matrix.
  int rank() const;

private:
  struct Echelon;
  Echelon eliminate(const std::vector<int>& column_order) const;

  int n_;
  std::vector<SparseRow> rows_;
  std::vector<Rational> rhs_;
};

/// Linear system whose equations are indexed by (component, monomial):
/// unknown j contributes columns[j] and the target is `target`.
std::optional<std::vector<Rational>> solve_vector_equation(
    const std::vector<VectorFunction>& columns, const VectorFunction& target,
    const std::vector<int>& pivot_last = {});

}  // namespace lenard

#endif  // LENARD_LINSOLVE_HPP
