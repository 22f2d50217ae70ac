// Canonical-form arithmetic in the algebra of differential functions
// F[u, v^{+-1}, u', v', ...] and its extension by log v.
#ifndef LENARD_DIFFALG_HPP
#define LENARD_DIFFALG_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

#include "lenard/error.hpp"

namespace lenard {

using Rational = mpq_class;

/// Variable indices are 0-based internally (u = 0, v = 1).
inline constexpr int kVarU = 0;
inline constexpr int kVarV = 1;
/// The only variable whose order-0 jet may carry negative exponents.
inline constexpr int kLaurentVar = kVarV;
inline constexpr int kMaxVars = 8;
inline constexpr int kMaxOrder = 1023;

/// A jet generator u_i^{(n)}, or the distinguished symbol log v.
///
/// Generators are packed into a 16-bit key whose natural order is the
/// canonical one: variable index, then jet order, LOG last.
class Generator {
public:
  constexpr Generator() = default;

  static Generator jet(int var, int order);
  static constexpr Generator log() { return Generator(kLogKey); }
  static constexpr Generator from_key(std::uint16_t key) {
    return Generator(key);
  }

  constexpr bool is_log() const { return key_ == kLogKey; }
  constexpr int var() const { return is_log() ? kLaurentVar : key_ >> 10; }
  /// Jet order; LOG counts as a function of order 0.
  constexpr int order() const { return is_log() ? 0 : key_ & 0x3FF; }
  constexpr std::uint16_t key() const { return key_; }
  /// Weight of the generator: n + 2 for a jet, 0 for LOG.
  constexpr int weight() const { return is_log() ? 0 : order() + 2; }
  bool is_laurent() const { return !is_log() && var() == kLaurentVar && order() == 0; }

  /// The generator obtained by one total derivative (not defined for LOG).
  Generator next() const { return jet(var(), order() + 1); }

  friend constexpr auto operator<=>(Generator, Generator) = default;

private:
  static constexpr std::uint16_t kLogKey = 0xFFFF;
  constexpr explicit Generator(std::uint16_t key) : key_(key) {}
  std::uint16_t key_ = 0;
};

struct Factor {
  Generator gen;
  int exp = 0;
  friend auto operator<=>(const Factor&, const Factor&) = default;
};

/// A product of generator powers with nonzero exponents, sorted by generator.
class Monomial {
public:
  using Storage = boost::container::small_vector<Factor, 6>;

  Monomial() = default;
  static Monomial of(Generator g, int exp = 1);

  const Storage& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  int exponent(Generator g) const;

  /// Multiplies in g^delta, dropping the factor if the exponent becomes 0.
  Monomial times(Generator g, int delta) const;
  Monomial operator*(const Monomial& other) const;

  /// Max jet order; LOG counts as 0; -1 for the empty monomial.
  int order() const;
  int weight() const;
  /// Sum of exponents (LOG excluded).
  int degree() const;
  /// Sum of exponents over the jets of one variable.
  int var_degree(int var) const;
  int laurent_exponent() const { return exponent(Generator::jet(kLaurentVar, 0)); }
  int log_exponent() const { return exponent(Generator::log()); }
  bool has_var(int var) const;

  std::size_t hash() const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

private:
  Storage factors_;
};

struct Term {
  Monomial mono;
  Rational coeff;
};

/// Element of the log-extended algebra in canonical form: distinct
/// monomials, nonzero coefficients, sorted by monomial.
class DiffFunction {
public:
  DiffFunction() = default;
  DiffFunction(long c);  // NOLINT: constants convert implicitly
  DiffFunction(const Rational& c);  // NOLINT
  DiffFunction(const Monomial& m, const Rational& c = 1);

  static DiffFunction jet(int var, int order = 0, int exp = 1);
  static DiffFunction u(int order = 0) { return jet(kVarU, order); }
  static DiffFunction v(int order = 0, int exp = 1) { return jet(kVarV, order, exp); }
  static DiffFunction log_v() { return DiffFunction(Monomial::of(Generator::log())); }

  /// Canonicalizes an arbitrary term list: merges like terms, drops zeros.
  static DiffFunction normalize(std::vector<Term> raw);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// Coefficient of the given monomial (0 when absent).
  Rational coeff(const Monomial& m) const;
  Rational constant_term() const { return coeff(Monomial{}); }
  bool is_constant() const;

  DiffFunction& operator+=(const DiffFunction& o);
  DiffFunction& operator-=(const DiffFunction& o);
  DiffFunction& operator*=(const Rational& c);

  friend DiffFunction operator+(DiffFunction a, const DiffFunction& b) { return a += b; }
  friend DiffFunction operator-(DiffFunction a, const DiffFunction& b) { return a -= b; }
  friend DiffFunction operator-(DiffFunction a) { return a *= Rational(-1); }
  friend DiffFunction operator*(const DiffFunction& a, const DiffFunction& b);
  friend DiffFunction operator*(DiffFunction a, const Rational& c) { return a *= c; }
  friend DiffFunction operator*(const Rational& c, DiffFunction a) { return a *= c; }
  DiffFunction times(const Monomial& m, const Rational& c = 1) const;

  /// Integer power; negative powers only for c * v^k.
  DiffFunction pow(int n) const;

  friend bool operator==(const DiffFunction&, const DiffFunction&);

private:
  explicit DiffFunction(std::vector<Term> sorted) : terms_(std::move(sorted)) {}
  std::vector<Term> terms_;
};

/// Fixed-length vector of differential functions (one per variable).
using VectorFunction = std::vector<DiffFunction>;

VectorFunction operator+(const VectorFunction& a, const VectorFunction& b);
VectorFunction operator-(const VectorFunction& a, const VectorFunction& b);
VectorFunction operator*(const Rational& c, const VectorFunction& a);
bool is_zero(const VectorFunction& f);
/// Dot product sum_i a_i b_i.
DiffFunction dot(const VectorFunction& a, const VectorFunction& b);

// ---------------------------------------------------------------------------
// Derivations

DiffFunction total_derivative(const DiffFunction& f);
/// n-fold total derivative.
DiffFunction total_derivative(const DiffFunction& f, int n);

/// Partial derivative with respect to a generator. For v^{(0)} this is the
/// derivation of the log-extended algebra (chain rule through log v); for
/// LOG it is the formal partial in the LOG symbol.
DiffFunction partial_derivative(const DiffFunction& f, Generator g);

/// Generators on which f depends, in canonical order.
std::vector<Generator> generators(const DiffFunction& f);

/// Highest jet order occurring; nullopt for constants.
std::optional<int> differential_order(const DiffFunction& f);
std::optional<int> differential_order(const VectorFunction& f);
/// Highest jet order of one variable; nullopt if f does not depend on it.
std::optional<int> differential_order(const DiffFunction& f, int var);

/// Common weight of all monomials under wt(x^{(n)}) = n + 2, wt(log v) = 0;
/// nullopt for inhomogeneous input and for 0.
std::optional<int> weight(const DiffFunction& f);
std::optional<int> weight(const VectorFunction& f);

// ---------------------------------------------------------------------------
// Subalgebras

enum class SubalgebraKind {
  VPlus,          ///< F[u, v, u', v', ...]
  VMinus,         ///< F[u, 1/v, u', v', ...]
  VZero,          ///< F[u, u', v', ...]
  ScaledVMinus,   ///< (1/v^k) V-
  AffineScaled,   ///< F (1/v^{k-1}) + (1/v^k) V-
  ScaledVPlus,    ///< v^k V+
  ConstScaledVMinus,  ///< F + (1/v^k) V-
};

struct SubalgebraTag {
  SubalgebraKind kind = SubalgebraKind::VPlus;
  int k = 0;

  static SubalgebraTag v_plus() { return {SubalgebraKind::VPlus, 0}; }
  static SubalgebraTag v_minus() { return {SubalgebraKind::VMinus, 0}; }
  static SubalgebraTag v_zero() { return {SubalgebraKind::VZero, 0}; }
  static SubalgebraTag scaled_v_minus(int k);
  static SubalgebraTag affine_scaled(int k);
  static SubalgebraTag scaled_v_plus(int k);
  static SubalgebraTag const_scaled_v_minus(int k);

  friend bool operator==(const SubalgebraTag&, const SubalgebraTag&) = default;
};

bool subalgebra_member(const Monomial& m, const SubalgebraTag& tag);
bool subalgebra_member(const DiffFunction& f, const SubalgebraTag& tag);

// ---------------------------------------------------------------------------
// Integration by parts

/// Result of reducing f modulo total derivatives: f = remainder + d(primitive).
struct Reduction {
  DiffFunction remainder;
  DiffFunction primitive;
};

/// Integrates by parts until no term is linear in its top generator with a
/// lower-order coefficient. The remainder is a canonical representative of
/// the class of f modulo total derivatives: two functions differ by a total
/// derivative iff their remainders coincide.
Reduction reduce_by_parts(const DiffFunction& f);

/// Same procedure restricted to steps that introduce no log v and, for
/// input with negative powers of v, no nonnegative powers of v from
/// integrating in v. The remainder is equivalent to f but not canonical;
/// used to present densities inside V+ or V-.
Reduction reduce_within_subalgebra(const DiffFunction& f);

/// g with d(g) = f and zero constant term, or nullopt if f is not a total
/// derivative. With a tag naming the domain of f, returns nullopt unless f
/// lies in that domain and checks that g lies in the matching subalgebra
/// (V+ -> V+, V- -> Fv + V-, F + v^-k V- or v^-k V- -> F v^{1-k} + v^-k V-).
std::optional<DiffFunction> antiderivative(const DiffFunction& f);
std::optional<DiffFunction> antiderivative(const DiffFunction& f, const SubalgebraTag& domain);

/// Primitive of the monomial c*m with respect to one generator, treating
/// all other generators as constants (log v is log of v^{(0)}).
DiffFunction integrate_wrt(const Monomial& m, const Rational& c, Generator x);

// ---------------------------------------------------------------------------
// Local functionals

/// A differential function considered modulo total derivatives.
struct LocalFunctional {
  DiffFunction density;
};

std::vector<DiffFunction> variational_derivative_components(const DiffFunction& f, int n_vars);

/// Equality modulo total derivatives: the variational derivative of the
/// difference vanishes and its constant term is zero.
bool functional_equal(const LocalFunctional& a, const LocalFunctional& b, int n_vars = 2);
bool functional_is_zero(const LocalFunctional& a, int n_vars = 2);

/// Canonical representative of the class (the reduce_by_parts remainder).
LocalFunctional canonical(const LocalFunctional& a);

/// Number of variables a function mentions (1 + highest var index; LOG
/// implies v).
int var_count(const DiffFunction& f);

}  // namespace lenard

template <>
struct std::hash<lenard::Monomial> {
  std::size_t operator()(const lenard::Monomial& m) const noexcept { return m.hash(); }
};

#endif  // LENARD_DIFFALG_HPP
