// Lambda-bracket machinery for Hamiltonian operators: Jacobi identity and
// compatibility checks, Poisson brackets of local functionals, flows.
#ifndef LENARD_PVA_HPP
#define LENARD_PVA_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lenard/diffop.hpp"

namespace lenard {

/// Polynomial in lambda with differential-function coefficients.
class LambdaPoly {
public:
  LambdaPoly() = default;
  explicit LambdaPoly(std::vector<DiffFunction> coeffs);

  const DiffFunction& coeff(int k) const;
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  void add(int k, const DiffFunction& c);

  friend bool operator==(const LambdaPoly&, const LambdaPoly&) = default;

private:
  void trim();
  std::vector<DiffFunction> coeffs_;
};

/// Polynomial in lambda, mu: (lambda-degree, mu-degree) -> coefficient.
class LambdaMuPoly {
public:
  void add(int i, int j, const DiffFunction& c);
  const std::map<std::pair<int, int>, DiffFunction>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  DiffFunction coeff(int i, int j) const;

  friend bool operator==(const LambdaMuPoly&, const LambdaMuPoly&) = default;

private:
  std::map<std::pair<int, int>, DiffFunction> terms_;
};

/// {u_i lambda u_j} = H_{ji}(lambda). Indices are 0-based. NOT_SKEW unless h
/// is skew-adjoint.
LambdaPoly generator_bracket(const MatrixDiffOp& h, int i, int j);

/// {u_i lambda g} = sum_{j,n} (dg/du_j^{(n)}) (lambda + d)^n H_{ji}(lambda).
LambdaPoly bracket_with_function(const MatrixDiffOp& h, int i, const DiffFunction& g);

/// {u_i lambda {u_j mu u_k}} - {u_j mu {u_i lambda u_k}} - {{u_i lambda u_j} lambda+mu u_k}.
LambdaMuPoly jacobiator(const MatrixDiffOp& h, int i, int j, int k);

struct JacobiFailure {
  int i = 0, j = 0, k = 0;  // 0-based generator triple
  Rational pencil_t = 0;    // pencil parameter (0 for a single structure)
  LambdaMuPoly residual;
};

/// First triple with a nonzero jacobiator, or nullopt when h is Poisson.
std::optional<JacobiFailure> find_jacobi_failure(const MatrixDiffOp& h);
bool is_poisson(const MatrixDiffOp& h);

/// Checks the pencil h + t k at t = 1, 2, 3 (both must be Poisson already).
std::optional<JacobiFailure> find_compatibility_failure(const MatrixDiffOp& h,
                                                        const MatrixDiffOp& k);
bool is_compatible(const MatrixDiffOp& h, const MatrixDiffOp& k);

/// {int f, int g}_H = int delta g . H(d) delta f.
LocalFunctional poisson_bracket(const LocalFunctional& f, const LocalFunctional& g,
                                const MatrixDiffOp& h);

/// H(d) delta f.
VectorFunction hamiltonian_flow(const MatrixDiffOp& h, const LocalFunctional& f);

}  // namespace lenard

#endif  // LENARD_PVA_HPP
