// Matrix differential operators over the algebra of differential functions.
#ifndef LENARD_DIFFOP_HPP
#define LENARD_DIFFOP_HPP

#include <optional>
#include <utility>
#include <vector>

#include "lenard/diffalg.hpp"

namespace lenard {

/// sum_k a_k d^k in left-normal form (coefficients to the left of d).
class ScalarDiffOp {
public:
  ScalarDiffOp() = default;
  explicit ScalarDiffOp(std::vector<DiffFunction> coeffs);
  /// Multiplication operator by a function.
  static ScalarDiffOp mul(const DiffFunction& a) { return ScalarDiffOp({a}); }
  /// The pure power d^k.
  static ScalarDiffOp d(int k = 1);

  /// Coefficient of d^k (0 beyond the top degree).
  const DiffFunction& coeff(int k) const;
  const std::vector<DiffFunction>& coeffs() const { return coeffs_; }
  /// Highest d power with a nonzero coefficient; -1 for the zero operator.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  ScalarDiffOp& operator+=(const ScalarDiffOp& o);
  ScalarDiffOp& operator-=(const ScalarDiffOp& o);
  friend ScalarDiffOp operator+(ScalarDiffOp a, const ScalarDiffOp& b) { return a += b; }
  friend ScalarDiffOp operator-(ScalarDiffOp a, const ScalarDiffOp& b) { return a -= b; }
  friend ScalarDiffOp operator-(const ScalarDiffOp& a);
  friend ScalarDiffOp operator*(const Rational& c, const ScalarDiffOp& a);
  friend bool operator==(const ScalarDiffOp&, const ScalarDiffOp&) = default;

  /// Apply to a function: sum_k a_k d^k(f).
  DiffFunction operator()(const DiffFunction& f) const;

  /// Weight w with wt(a_k) + k = w for every term; nullopt otherwise.
  std::optional<int> weight() const;

private:
  void trim();
  std::vector<DiffFunction> coeffs_;
};

/// Composition A o B, re-normalized with d o a = a d + a'.
ScalarDiffOp compose(const ScalarDiffOp& a, const ScalarDiffOp& b);
/// Formal adjoint: (a d^k)* = (-d)^k o a.
ScalarDiffOp adjoint(const ScalarDiffOp& a);

/// Square matrix of scalar operators.
class MatrixDiffOp {
public:
  MatrixDiffOp() = default;
  explicit MatrixDiffOp(int n) : n_(n), entries_(static_cast<std::size_t>(n) * n) {}
  MatrixDiffOp(std::initializer_list<std::initializer_list<ScalarDiffOp>> rows);

  static MatrixDiffOp scalar(const ScalarDiffOp& op);

  int size() const { return n_; }
  /// 0-based (row, column).
  const ScalarDiffOp& at(int i, int j) const { return entries_[idx(i, j)]; }
  ScalarDiffOp& at(int i, int j) { return entries_[idx(i, j)]; }

  MatrixDiffOp& operator+=(const MatrixDiffOp& o);
  friend MatrixDiffOp operator+(MatrixDiffOp a, const MatrixDiffOp& b) { return a += b; }
  friend MatrixDiffOp operator-(const MatrixDiffOp& a, const MatrixDiffOp& b);
  friend MatrixDiffOp operator*(const Rational& c, const MatrixDiffOp& a);
  friend bool operator==(const MatrixDiffOp&, const MatrixDiffOp&) = default;

  bool is_zero() const;

private:
  std::size_t idx(int i, int j) const;
  int n_ = 0;
  std::vector<ScalarDiffOp> entries_;
};

MatrixDiffOp compose(const MatrixDiffOp& a, const MatrixDiffOp& b);
/// Transpose of the entrywise adjoints.
MatrixDiffOp adjoint(const MatrixDiffOp& a);
/// Componentwise application; DIMENSION_MISMATCH when sizes differ.
VectorFunction apply(const MatrixDiffOp& h, const VectorFunction& f);
bool is_skew_adjoint(const MatrixDiffOp& h);
/// True iff h(F) = 0.
bool kernel_verify(const MatrixDiffOp& h, const VectorFunction& xi);
/// Common operator weight of all nonzero entries, if any.
std::optional<int> weight(const MatrixDiffOp& h);

/// The compatible pair (H0, H1) in two variables u, v.
struct PoissonPair {
  MatrixDiffOp h0;
  MatrixDiffOp h1;
  /// H_epsilon for epsilon in {0, 1}.
  const MatrixDiffOp& operator[](int eps) const { return eps == 0 ? h0 : h1; }
};

/// d^5 + 3 d(d u + u d)d + 2(d^3 u + u d^3) + 8(d u^2 + u^2 d), expanded.
ScalarDiffOp q_operator();
/// H0, H1 fully expanded; operator weights +3 / -3 are asserted on construction.
const PoissonPair& builtin_pair();

}  // namespace lenard

#endif  // LENARD_DIFFOP_HPP
