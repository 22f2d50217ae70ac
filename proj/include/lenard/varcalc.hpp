// Variational calculus: variational and Frechet derivatives, closedness,
// and reconstruction of densities from exact vectors.
#ifndef LENARD_VARCALC_HPP
#define LENARD_VARCALC_HPP

#include <optional>
#include <utility>

#include "lenard/diffalg.hpp"
#include "lenard/diffop.hpp"

namespace lenard {

/// Vector of variational derivatives sum_n (-d)^n df/du_i^{(n)}, i < n_vars.
VectorFunction variational_derivative(const LocalFunctional& f, int n_vars = 2);

/// D_P(d)_{ij} = sum_n (dP_i / du_j^{(n)}) d^n.
MatrixDiffOp frechet(const VectorFunction& p);

struct ClosednessReport {
  bool is_closed = true;
  /// 0-based (i, j) of the first entry where D_F differs from D_F*.
  std::optional<std::pair<int, int>> witness;
};

ClosednessReport is_closed(const VectorFunction& f);

/// Density whose variational derivative is f, as the canonical
/// representative modulo total derivatives. Polynomial input uses the
/// homotopy formula; Laurent/log input splits by scaling degree and solves
/// the scale-invariant part over a finite ansatz.
/// Throws NOT_CLOSED or NO_SOLUTION.
LocalFunctional integrate_exact(const VectorFunction& f);

/// [P, Q] = D_Q(d) P - D_P(d) Q.
VectorFunction evolutionary_commutator(const VectorFunction& p, const VectorFunction& q);

/// Applies D_P(d) to q without materializing the operator.
VectorFunction apply_frechet(const VectorFunction& p, const VectorFunction& q);

}  // namespace lenard

#endif  // LENARD_VARCALC_HPP
