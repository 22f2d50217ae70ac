#include "lenard/lenard.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "lenard/linsolve.hpp"
#include "lenard/pva.hpp"
#include "lenard/varcalc.hpp"

namespace lenard {

namespace {

void require_bits(int epsilon, int alpha) {
  if ((epsilon != 0 && epsilon != 1) || (alpha != 0 && alpha != 1)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon and alpha must be 0 or 1");
  }
}

DiffFunction u(int n = 0) { return DiffFunction::u(n); }
DiffFunction v(int n = 0, int e = 1) { return DiffFunction::v(n, e); }

std::string step_prefix(int n) { return "step " + std::to_string(n) + ": "; }

// Subalgebras containing the f and g components of every xi^{eps,alpha}_n.
std::pair<SubalgebraTag, SubalgebraTag> component_tags(int epsilon) {
  if (epsilon == 1) return {SubalgebraTag::v_plus(), SubalgebraTag::scaled_v_plus(2)};
  return {SubalgebraTag::scaled_v_minus(1), SubalgebraTag::const_scaled_v_minus(1)};
}

// Removes the kernel components picked out by the markers.
VectorFunction normalize_kernel(int epsilon, VectorFunction xi) {
  const auto [mf, mg] = kernel_markers(epsilon);
  // The alpha = 1 kernel element carries the marker of the other
  // component and perturbs the alpha = 0 one, so clear it first.
  if (epsilon == 1) {
    const Rational c = xi[1].coeff(mg);
    if (c != 0) xi = xi - Rational(2 * c) * seed(1, 1).xi0;
    const Rational d = xi[0].coeff(mf);
    if (d != 0) xi = xi - d * seed(1, 0).xi0;
  } else {
    const Rational c = xi[0].coeff(mf);
    if (c != 0) xi = xi - c * seed(0, 1).xi0;
    const Rational d = xi[1].coeff(mg);
    if (d != 0) xi = xi - d * seed(0, 0).xi0;
  }
  return xi;
}

VectorFunction step_components(int epsilon, const VectorFunction& rhs) {
  const PoissonPair& pair = builtin_pair();
  auto integrate = [](const DiffFunction& f, const char* what) {
    auto g = antiderivative(f);
    if (!g) throw Error(ErrorCode::NoSolution, std::string(what) + " is not a total derivative");
    return *g;
  };
  if (epsilon == 1) {
    // H1(f, g) = (d(g/v^2), v^-2 f' - v^-2 Q(g/v^2))
    const DiffFunction s = integrate(rhs[0], "first component");
    const DiffFunction g = v(0, 2) * s;
    const DiffFunction f = integrate(v(0, 2) * rhs[1] + q_operator()(s), "v^2 P_2 + Q(g/v^2)");
    return {f, g};
  }
  // H0(f, g) = (K f + v g', (v f)')
  const DiffFunction vf = integrate(rhs[1], "second component");
  const DiffFunction f = v(0, -1) * vf;
  const DiffFunction rest = rhs[0] - pair.h0.at(0, 0)(f);
  const DiffFunction g = integrate(v(0, -1) * rest, "(P_1 - K f)/v");
  return {f, g};
}

int min_laurent_exponent(const VectorFunction& f) {
  int lo = 0;
  for (const auto& c : f)
    for (const auto& t : c.terms()) lo = std::min(lo, t.mono.laurent_exponent());
  return lo;
}

std::pair<AnsatzSpace, AnsatzSpace> default_bounds(int epsilon, const VectorFunction& xi_n,
                                                   const VectorFunction& rhs,
                                                   std::optional<int> order_bound) {
  auto w = weight(xi_n);
  if (!w) throw Error(ErrorCode::InvalidArgument, "xi_n is zero or not weight-homogeneous");
  const int target = *w + 6 * (2 * epsilon - 1);
  const int bound = order_bound ? *order_bound : differential_order(rhs).value_or(0) + 3;
  const auto [tf, tg] = component_tags(epsilon);
  AnsatzSpace f{target, bound, tf, false, std::nullopt};
  AnsatzSpace g{target, bound, tg, false, std::nullopt};
  if (epsilon == 0) {
    const int floor = min_laurent_exponent(rhs) - 4;
    f.v_exponent_floor = floor;
    g.v_exponent_floor = floor;
  }
  return {f, g};
}

std::optional<VectorFunction> solve_over(int epsilon, const std::pair<AnsatzSpace, AnsatzSpace>& b,
                                         const VectorFunction& rhs) {
  const MatrixDiffOp& h = builtin_pair()[epsilon];
  std::vector<Monomial> fs, gs;
  try {
    fs = ansatz_space(b.first);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Empty) throw;
  }
  try {
    gs = ansatz_space(b.second);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Empty) throw;
  }
  const auto [mf, mg] = kernel_markers(epsilon);
  std::vector<VectorFunction> columns;
  std::vector<int> pivot_last;
  for (const auto& m : fs) {
    if (m == mf) pivot_last.push_back(static_cast<int>(columns.size()));
    columns.push_back(lenard::apply(h, {DiffFunction(m), DiffFunction{}}));
  }
  for (const auto& m : gs) {
    if (m == mg) pivot_last.push_back(static_cast<int>(columns.size()));
    columns.push_back(lenard::apply(h, {DiffFunction{}, DiffFunction(m)}));
  }
  auto sol = solve_vector_equation(columns, rhs, pivot_last);
  if (!sol) return std::nullopt;
  std::vector<Term> f, g;
  for (std::size_t k = 0; k < fs.size(); ++k)
    if ((*sol)[k] != 0) f.push_back({fs[k], (*sol)[k]});
  for (std::size_t k = 0; k < gs.size(); ++k)
    if ((*sol)[fs.size() + k] != 0) g.push_back({gs[k], (*sol)[fs.size() + k]});
  return VectorFunction{DiffFunction::normalize(std::move(f)), DiffFunction::normalize(std::move(g))};
}

VectorFunction step_ansatz(int epsilon, const VectorFunction& xi_n, const VectorFunction& rhs,
                           const StepOptions& opts) {
  auto b = opts.bounds ? *opts.bounds : default_bounds(epsilon, xi_n, rhs, opts.order_bound);
  for (int widen = 0;; ++widen) {
    if (auto xi = solve_over(epsilon, b, rhs)) return *xi;
    if (widen >= opts.widen_cap) break;
    b.first.order_bound += 2;
    b.second.order_bound += 2;
  }
  throw Error(ErrorCode::NoSolution, "no solution within order bound " +
                                         std::to_string(b.first.order_bound));
}

// Products of the given generators (all of positive weight) of total weight w.
void enumerate(const std::vector<Generator>& gens, std::size_t from, int w, Monomial cur,
               std::vector<Monomial>& out) {
  if (w == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < gens.size(); ++i) {
    if (gens[i].weight() > w) continue;
    enumerate(gens, i, w - gens[i].weight(), cur.times(gens[i], 1), out);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

HierarchySeed seed(int epsilon, int alpha) {
  require_bits(epsilon, alpha);
  HierarchySeed s{epsilon, alpha, {}, {}};
  const Rational half(1, 2);
  if (epsilon == 0 && alpha == 0) {
    s.xi0 = {DiffFunction{}, DiffFunction(1)};
    s.h0 = {v()};
  } else if (epsilon == 0) {
    s.xi0 = {v(0, -1),
             -u() * v(0, -2) - Rational(3, 2) * (v(1, 2) * v(0, -4)) + v(2) * v(0, -3)};
    s.h0 = {u() * v(0, -1) - half * (v(1, 2) * v(0, -3))};
  } else if (alpha == 0) {
    s.xi0 = {DiffFunction(1), DiffFunction{}};
    s.h0 = {u()};
  } else {
    s.xi0 = {u(2) + Rational(4) * u().pow(2), half * v(0, 2)};
    s.h0 = {half * (u() * u(2)) + Rational(4, 3) * u().pow(3) + Rational(1, 6) * v(0, 3)};
  }
  return s;
}

std::vector<Monomial> ansatz_space(const AnsatzSpace& spec) {
  const int w = spec.weight;
  const int bound = spec.order_bound;
  const SubalgebraTag& tag = spec.membership;

  // Range of the v exponent k; the rest has weight w - 2k >= 0.
  int hi = w >= 0 ? w / 2 : -((-w + 1) / 2);
  int lo = 0;
  switch (tag.kind) {
    case SubalgebraKind::VPlus: lo = 0; break;
    case SubalgebraKind::ScaledVPlus: lo = tag.k; break;
    case SubalgebraKind::VZero: lo = 0; hi = std::min(hi, 0); break;
    case SubalgebraKind::VMinus:
    case SubalgebraKind::ScaledVMinus:
    case SubalgebraKind::AffineScaled:
    case SubalgebraKind::ConstScaledVMinus:
      if (!spec.v_exponent_floor) {
        throw Error(ErrorCode::Unbounded, "negative powers of v need an exponent floor");
      }
      lo = *spec.v_exponent_floor;
      hi = std::min(hi, 0);
      break;
  }

  std::vector<Generator> gens;
  for (int n = 0; n <= bound; ++n) {
    gens.push_back(Generator::jet(kVarU, n));
    if (n >= 1) gens.push_back(Generator::jet(kVarV, n));
  }
  std::sort(gens.begin(), gens.end());

  std::set<Monomial> found;
  const Generator v0 = Generator::jet(kLaurentVar, 0);
  for (int k = lo; k <= hi; ++k) {
    std::vector<Monomial> rest;
    if (w - 2 * k < 0) continue;
    enumerate(gens, 0, w - 2 * k, Monomial{}, rest);
    for (const auto& m : rest) {
      Monomial full = m.times(v0, k);
      if (full.order() <= bound && subalgebra_member(full, tag)) found.insert(full);
    }
  }
  if (spec.include_log) {
    std::vector<Monomial> rest;
    if (w >= 0) enumerate(gens, 0, w, Monomial{}, rest);
    for (const auto& m : rest) found.insert(m.times(Generator::log(), 1));
  }
  if (found.empty()) throw Error(ErrorCode::Empty, "no monomial satisfies the ansatz bounds");
  return {found.begin(), found.end()};
}

std::pair<Monomial, Monomial> kernel_markers(int epsilon) {
  const Generator v0 = Generator::jet(kLaurentVar, 0);
  if (epsilon == 1) return {Monomial{}, Monomial::of(v0, 2)};
  if (epsilon == 0) return {Monomial::of(v0, -1), Monomial{}};
  throw Error(ErrorCode::InvalidArgument, "epsilon must be 0 or 1");
}

VectorFunction lm_step(int epsilon, const VectorFunction& xi_n, const StepOptions& opts) {
  require_bits(epsilon, 0);
  if (xi_n.size() != 2) throw Error(ErrorCode::DimensionMismatch, "xi_n must have two components");
  if (auto r = is_closed(xi_n); !r.is_closed) {
    throw Error(ErrorCode::NotClosed, "xi_n is not closed");
  }
  const VectorFunction rhs = lenard::apply(builtin_pair()[1 - epsilon], xi_n);
  if (is_zero(rhs)) return {DiffFunction{}, DiffFunction{}};
  VectorFunction xi = opts.method == StepMethod::Components ? step_components(epsilon, rhs)
                                                            : step_ansatz(epsilon, xi_n, rhs, opts);
  xi = normalize_kernel(epsilon, std::move(xi));
  if (!(lenard::apply(builtin_pair()[epsilon], xi) == rhs)) {
    throw std::logic_error("recursion step does not reproduce the right-hand side");
  }
  return xi;
}

HierarchyRun run_hierarchy(int epsilon, int alpha, int steps, const StepOptions& opts) {
  require_bits(epsilon, alpha);
  if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps must be nonnegative");
  const PoissonPair& pair = builtin_pair();
  HierarchyRun run;
  run.seed = seed(epsilon, alpha);
  run.xis.push_back(run.seed.xi0);
  run.densities.push_back(run.seed.h0);
  const auto [tf, tg] = component_tags(epsilon);
  const VectorFunction kernel0 = seed(epsilon, 0).xi0;
  const VectorFunction kernel1 = seed(epsilon, 1).xi0;

  for (int n = 0; n <= steps; ++n) {
    const VectorFunction& xi = run.xis[n];
    auto check = [&](bool ok, const std::string& what) {
      if (!ok) throw std::logic_error(step_prefix(n) + what);
    };
    check(subalgebra_member(xi[0], tf) && subalgebra_member(xi[1], tg),
          "components leave the predicted subalgebras");
    check(is_closed(xi).is_closed, "xi is not closed");
    check(variational_derivative(run.densities[n], 2) == xi, "density does not reproduce xi");
    if (epsilon == 0 && n >= 1) {
      check(subalgebra_member(run.densities[n].density, SubalgebraTag::v_minus()),
            "density is not in V-");
    }
    run.orders.push_back({differential_order(xi[0]), differential_order(xi[1])});

    VectorFunction flow = lenard::apply(pair[1 - epsilon], xi);
    // Solvability: the flow is orthogonal to ker H_eps.
    check(functional_is_zero({dot(kernel0, flow)}) && functional_is_zero({dot(kernel1, flow)}),
          "flow is not orthogonal to the kernel");
    run.flow_orders.push_back(differential_order(flow));
    run.flows.push_back(std::move(flow));
    if (n == steps) break;

    VectorFunction next;
    LocalFunctional h;
    try {
      next = lm_step(epsilon, xi, opts);
      h = integrate_exact(next);
    } catch (const Error& e) {
      throw Error(e.code(), step_prefix(n + 1) + e.detail());
    }
    const int n1 = n + 1;
    auto check_next = [&](bool ok, const std::string& what) {
      if (!ok) throw std::logic_error(step_prefix(n1) + what);
    };
    check_next(lenard::apply(pair[epsilon], next) == run.flows[n], "recursion identity fails");
    auto w0 = weight(xi);
    auto w1 = weight(next);
    check_next(w0 && w1 && *w1 == *w0 + 6 * (2 * epsilon - 1), "weight law fails");
    run.xis.push_back(std::move(next));
    run.densities.push_back(std::move(h));
  }
  return run;
}

OrderPair expected_component_orders(int epsilon, int alpha, int n) {
  require_bits(epsilon, alpha);
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "closed forms hold for n >= 1");
  const int s = 6 * n;
  if (epsilon == 0) return alpha == 0 ? OrderPair{s - 2, s} : OrderPair{s, s + 2};
  return alpha == 0 ? OrderPair{s - 2, s - 6} : OrderPair{s + 2, s - 2};
}

int expected_flow_order(int epsilon, int alpha, int n) {
  require_bits(epsilon, alpha);
  static const int c[2][2] = {{5, 7}, {1, 5}};
  return 6 * n + c[epsilon][alpha];
}

std::string DensityLabel::str() const {
  return "h^{" + std::to_string(epsilon) + "," + std::to_string(alpha) + "}_" + std::to_string(n);
}

bool InvolutivityReport::all_true() const {
  for (const auto& z : brackets)
    for (const auto& row : z)
      for (bool b : row)
        if (!b) return false;
  for (const auto& row : commute)
    for (bool b : row)
      if (!b) return false;
  return true;
}

InvolutivityReport involutivity_report(const std::vector<HierarchyRun>& runs) {
  InvolutivityReport rep;
  std::vector<const LocalFunctional*> hs;
  std::vector<const VectorFunction*> ps;
  for (const auto& r : runs) {
    for (std::size_t n = 0; n < r.densities.size(); ++n) {
      rep.densities.push_back({r.seed.epsilon, r.seed.alpha, static_cast<int>(n)});
      hs.push_back(&r.densities[n]);
    }
    for (std::size_t n = 0; n < r.flows.size(); ++n) {
      rep.flows.push_back({r.seed.epsilon, r.seed.alpha, static_cast<int>(n)});
      ps.push_back(&r.flows[n]);
    }
  }
  const PoissonPair& pair = builtin_pair();
  const std::size_t m = hs.size();
  rep.brackets.assign(2, std::vector<std::vector<bool>>(m, std::vector<bool>(m, true)));
  for (int zeta = 0; zeta < 2; ++zeta) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        const bool z = functional_is_zero(poisson_bracket(*hs[a], *hs[b], pair[zeta]));
        rep.brackets[zeta][a][b] = rep.brackets[zeta][b][a] = z;
      }
    }
  }
  const std::size_t k = ps.size();
  rep.commute.assign(k, std::vector<bool>(k, true));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const bool z = is_zero(evolutionary_commutator(*ps[a], *ps[b]));
      rep.commute[a][b] = rep.commute[b][a] = z;
    }
  }
  return rep;
}

int widen_cap_from_env(int fallback) {
  const char* s = std::getenv("LENARD_WIDEN_CAP");
  if (!s || !*s) return fallback;
  char* end = nullptr;
  const long n = std::strtol(s, &end, 10);
  if (*end != '\0' || n < 0 || n > 64) {
    throw Error(ErrorCode::InvalidArgument, "LENARD_WIDEN_CAP must be an integer in [0, 64]");
  }
  return static_cast<int>(n);
}

}  // namespace lenard
