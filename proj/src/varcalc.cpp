#include "lenard/varcalc.hpp"

#include <algorithm>
#include <map>

#include "lenard/linsolve.hpp"

namespace lenard {

VectorFunction variational_derivative(const LocalFunctional& f, int n_vars) {
  return variational_derivative_components(f.density, std::max(n_vars, var_count(f.density)));
}

MatrixDiffOp frechet(const VectorFunction& p) {
  const int n = static_cast<int>(p.size());
  MatrixDiffOp d(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto top = differential_order(p[i], j);
      if (!top) continue;
      std::vector<DiffFunction> coeffs(*top + 1);
      for (int k = 0; k <= *top; ++k) coeffs[k] = partial_derivative(p[i], Generator::jet(j, k));
      d.at(i, j) = ScalarDiffOp(std::move(coeffs));
    }
  }
  return d;
}

ClosednessReport is_closed(const VectorFunction& f) {
  const MatrixDiffOp d = frechet(f);
  const int n = d.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // (D*)_{ij} = (D_{ji})*
      if (!(d.at(i, j) == adjoint(d.at(j, i)))) return {false, std::make_pair(i, j)};
    }
  }
  return {};
}

VectorFunction apply_frechet(const VectorFunction& p, const VectorFunction& q) {
  if (p.size() != q.size()) throw Error(ErrorCode::DimensionMismatch, "Frechet application");
  const int n = static_cast<int>(p.size());
  std::vector<std::vector<DiffFunction>> towers(n);
  VectorFunction out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto top = differential_order(p[i], j);
      if (!top) continue;
      while (static_cast<int>(towers[j].size()) <= *top) {
        towers[j].push_back(towers[j].empty() ? q[j] : total_derivative(towers[j].back()));
      }
      for (int k = 0; k <= *top; ++k) {
        if (towers[j][k].is_zero()) continue;
        DiffFunction c = partial_derivative(p[i], Generator::jet(j, k));
        if (!c.is_zero()) out[i] += c * towers[j][k];
      }
    }
  }
  return out;
}

VectorFunction evolutionary_commutator(const VectorFunction& p, const VectorFunction& q) {
  return apply_frechet(q, p) - apply_frechet(p, q);
}

// ---------------------------------------------------------------------------
// Exact integration

namespace {

bool is_polynomial(const VectorFunction& f) {
  for (const auto& c : f)
    if (!subalgebra_member(c, SubalgebraTag::v_plus())) return false;
  return true;
}

// h = int_0^1 sum_i u_i F_i(t u) dt, term by term.
DiffFunction homotopy_density(const VectorFunction& f) {
  std::vector<Term> raw;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Generator ui = Generator::jet(static_cast<int>(i), 0);
    for (const auto& t : f[i].terms())
      raw.push_back({t.mono.times(ui, 1), t.coeff / (t.mono.degree() + 1)});
  }
  return DiffFunction::normalize(std::move(raw));
}

int non_laurent_degree(const Monomial& m) {
  return m.degree() - m.var_degree(kLaurentVar);
}

// Partitions of w into parts >= 1, as multisets of jet orders.
void partitions(int w, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (w == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(w, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(w - p, p, cur, out);
    cur.pop_back();
  }
}

// Scale-invariant (v-degree 0) u-free monomials of weight w:
// v^{-r} prod_j v^{(n_j)}, n_j >= 1, sum n_j = w.
std::vector<Monomial> scale_invariant_monomials(int w) {
  std::vector<Monomial> out;
  if (w < 0) return out;
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  partitions(w, w, cur, parts);
  const Generator v0 = Generator::jet(kLaurentVar, 0);
  for (const auto& p : parts) {
    Monomial m;
    for (int n : p) m = m.times(Generator::jet(kLaurentVar, n), 1);
    m = m.times(v0, -static_cast<int>(p.size()));
    out.push_back(m);
  }
  return out;
}

// Density k, built from log-weighted scale-invariant monomials, with
// delta_v k = g (g u-free of v-degree -1 and homogeneous weight).
DiffFunction solve_scale_invariant(const DiffFunction& g, int weight_g) {
  int max_log = 0;
  for (const auto& t : g.terms()) max_log = std::max(max_log, t.mono.log_exponent());
  const auto base = scale_invariant_monomials(weight_g + 2);
  std::vector<Monomial> basis;
  for (int j = 0; j <= max_log + 1; ++j)
    for (const auto& m : base) basis.push_back(m.times(Generator::log(), j));

  std::vector<VectorFunction> columns;
  columns.reserve(basis.size());
  for (const auto& m : basis)
    columns.push_back({variational_derivative_components(DiffFunction(m), 2)[kLaurentVar]});
  auto sol = solve_vector_equation(columns, {g});
  if (!sol) {
    throw Error(ErrorCode::NoSolution,
                "no scale-invariant density of weight " + std::to_string(weight_g + 2));
  }
  std::vector<Term> raw;
  for (std::size_t k = 0; k < basis.size(); ++k)
    if ((*sol)[k] != 0) raw.push_back({basis[k], (*sol)[k]});
  return DiffFunction::normalize(std::move(raw));
}

DiffFunction laurent_density(const VectorFunction& f) {
  const int n = static_cast<int>(f.size());
  if (n <= kLaurentVar) throw Error(ErrorCode::InvalidArgument, "Laurent input without v");
  std::vector<Term> raw;

  // Scaling every variable except v: int a k_a = int sum_{i != v} u_i F_i.
  for (int i = 0; i < n; ++i) {
    if (i == kLaurentVar) continue;
    const Generator ui = Generator::jet(i, 0);
    for (const auto& t : f[i].terms())
      raw.push_back({t.mono.times(ui, 1), t.coeff / (non_laurent_degree(t.mono) + 1)});
  }

  // The part depending on v alone; scaling v by lambda acts on
  // L^j w (w of v-degree b) as E(L^j w) = b L^j w + j L^{j-1} w.
  const Generator v0 = Generator::jet(kLaurentVar, 0);
  const Generator lg = Generator::log();
  std::map<int, std::vector<Term>> invariant_by_weight;
  for (const auto& t : f[kLaurentVar].terms()) {
    if (non_laurent_degree(t.mono) != 0) continue;
    const int j = t.mono.log_exponent();
    const Monomial w = t.mono.times(lg, -j).times(v0, 1);
    const int b = w.var_degree(kLaurentVar);
    if (b == 0) {
      invariant_by_weight[t.mono.weight()].push_back(t);
      continue;
    }
    // E^{-1}(L^j w) = sum_i (-1)^i j!/(j-i)! L^{j-i} w / b^{i+1}
    Rational a = t.coeff / b;
    for (int i = 0; i <= j; ++i) {
      raw.push_back({w.times(lg, j - i), a});
      a *= Rational(-(j - i)) / b;
    }
  }
  DiffFunction h = DiffFunction::normalize(std::move(raw));
  for (auto& [w, terms] : invariant_by_weight) {
    h += solve_scale_invariant(DiffFunction::normalize(std::move(terms)), w);
  }
  return h;
}

}  // namespace

LocalFunctional integrate_exact(const VectorFunction& f) {
  auto report = is_closed(f);
  if (!report.is_closed) {
    throw Error(ErrorCode::NotClosed,
                "Frechet derivative is not self-adjoint at entry (" +
                    std::to_string(report.witness->first + 1) + "," +
                    std::to_string(report.witness->second + 1) + ")");
  }
  const int n = static_cast<int>(f.size());
  DiffFunction h = is_polynomial(f) ? homotopy_density(f) : laurent_density(f);
  if (!(variational_derivative({h}, n) == f)) {
    throw Error(ErrorCode::NoSolution, "reconstructed density does not reproduce the vector");
  }
  h -= DiffFunction(h.constant_term());
  return {reduce_within_subalgebra(h).remainder};
}

}  // namespace lenard
