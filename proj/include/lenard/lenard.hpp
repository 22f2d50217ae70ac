// The Lenard-Magri engine for the built-in pair (H0, H1): seeds, ansatz
// spaces, recursion steps, density reconstruction, order and involutivity
// bookkeeping.
#ifndef LENARD_LENARD_HPP
#define LENARD_LENARD_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lenard/diffop.hpp"

namespace lenard {

struct HierarchySeed {
  int epsilon = 0;
  int alpha = 0;
  VectorFunction xi0;
  LocalFunctional h0;
};

/// Kernel element xi^{eps,alpha} of H_eps and its density.
HierarchySeed seed(int epsilon, int alpha);

struct AnsatzSpace {
  int weight = 0;
  int order_bound = 0;
  SubalgebraTag membership = SubalgebraTag::v_plus();
  bool include_log = false;
  /// Lowest admissible exponent of v; required for the V- families, whose
  /// weight spaces are otherwise infinite.
  std::optional<int> v_exponent_floor;
};

/// Monomials of the given weight and order bound satisfying the membership
/// tag, in canonical order. Throws EMPTY or UNBOUNDED.
std::vector<Monomial> ansatz_space(const AnsatzSpace& spec);

enum class StepMethod {
  /// Triangular solve of the component equations by exact antiderivatives.
  Components,
  /// Exact linear solve over per-component ansatz spaces.
  Ansatz,
};

struct StepOptions {
  StepMethod method = StepMethod::Components;
  /// Ansatz spaces for (f, g); derived from the input when absent.
  std::optional<std::pair<AnsatzSpace, AnsatzSpace>> bounds;
  /// Initial order bound of the derived spaces (default: order of the
  /// right-hand side + 3).
  std::optional<int> order_bound;
  /// Number of +2 order-bound widenings allowed on NO_SOLUTION.
  int widen_cap = 2;
};

/// Monomials whose coefficients fix the kernel ambiguity of H_eps:
/// f-marker and g-marker, zeroed in every normalized step result.
std::pair<Monomial, Monomial> kernel_markers(int epsilon);

/// xi_{n+1} with H_eps xi_{n+1} = H_{1-eps} xi_n, normalized modulo ker H_eps.
/// Throws NOT_CLOSED on input, NO_SOLUTION when the equation has no solution.
VectorFunction lm_step(int epsilon, const VectorFunction& xi_n, const StepOptions& opts = {});

struct OrderPair {
  std::optional<int> f;
  std::optional<int> g;
};

struct HierarchyRun {
  HierarchySeed seed;
  std::vector<VectorFunction> xis;
  std::vector<LocalFunctional> densities;
  /// flows[n] = H_{1-eps} xi_n = H_eps xi_{n+1}.
  std::vector<VectorFunction> flows;
  std::vector<OrderPair> orders;
  std::vector<std::optional<int>> flow_orders;
};

/// Iterates lm_step from the seed for `steps` steps, reconstructs densities
/// and re-verifies the recursion, closedness, membership, weight law and
/// the kernel-orthogonality conditions at every step.
HierarchyRun run_hierarchy(int epsilon, int alpha, int steps, const StepOptions& opts = {});

/// Closed forms for |f_n|, |g_n| (n >= 1) and |P_n| (n >= 0).
OrderPair expected_component_orders(int epsilon, int alpha, int n);
int expected_flow_order(int epsilon, int alpha, int n);

struct DensityLabel {
  int epsilon, alpha, n;
  std::string str() const;
};

struct InvolutivityReport {
  std::vector<DensityLabel> densities;
  /// brackets[zeta][a][b]: {h_a, h_b}_zeta reduces to zero.
  std::vector<std::vector<std::vector<bool>>> brackets;
  std::vector<DensityLabel> flows;
  /// commute[a][b]: [P_a, P_b] = 0.
  std::vector<std::vector<bool>> commute;

  bool all_true() const;
};

InvolutivityReport involutivity_report(const std::vector<HierarchyRun>& runs);

/// Ansatz widening cap from LENARD_WIDEN_CAP, falling back to `fallback`.
int widen_cap_from_env(int fallback = 2);

}  // namespace lenard

#endif  // LENARD_LENARD_HPP
