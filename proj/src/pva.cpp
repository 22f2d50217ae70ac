#include "lenard/pva.hpp"

#include "lenard/varcalc.hpp"

namespace lenard {

namespace {

const DiffFunction& zero_function() {
  static const DiffFunction z;
  return z;
}

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

void require_skew(const MatrixDiffOp& h) {
  if (!is_skew_adjoint(h)) throw Error(ErrorCode::NotSkew, "operator is not skew-adjoint");
}

// Evaluates brackets for one operator, caching total derivatives of the
// operator coefficients.
class BracketEngine {
public:
  explicit BracketEngine(const MatrixDiffOp& h) : h_(h), n_(h.size()) {}

  // d^t of the coefficient of d^p in H_{row,col}.
  const DiffFunction& coeff_derivative(int row, int col, int p, int t) {
    auto& tower = towers_[{row * n_ + col, p}];
    if (tower.empty()) tower.push_back(h_.at(row, col).coeff(p));
    while (static_cast<int>(tower.size()) <= t) tower.push_back(total_derivative(tower.back()));
    return tower[t];
  }

  LambdaPoly left(int i, const DiffFunction& g) {
    LambdaPoly out;
    for (int j = 0; j < n_; ++j) {
      const ScalarDiffOp& hji = h_.at(j, i);
      if (hji.is_zero()) continue;
      auto top = differential_order(g, j);
      if (!top) continue;
      for (int n = 0; n <= *top; ++n) {
        DiffFunction phi = partial_derivative(g, Generator::jet(j, n));
        if (phi.is_zero()) continue;
        // (lambda + d)^n sum_p h_p lambda^p
        for (int p = 0; p <= hji.degree(); ++p) {
          if (hji.coeff(p).is_zero()) continue;
          for (int t = 0; t <= n; ++t) {
            const DiffFunction& hp = coeff_derivative(j, i, p, t);
            if (hp.is_zero()) continue;
            out.add(n - t + p, (phi * hp) * binomial(n, t));
          }
        }
      }
    }
    return out;
  }

  // {g nu u_k} = sum_{m,n,r} h^{km}_r (-1)^n (nu + d)^{r+n} dg/du_m^{(n)}
  LambdaPoly right(const DiffFunction& g, int k) {
    LambdaPoly out;
    for (int m = 0; m < n_; ++m) {
      const ScalarDiffOp& hkm = h_.at(k, m);
      if (hkm.is_zero()) continue;
      auto top = differential_order(g, m);
      if (!top) continue;
      for (int n = 0; n <= *top; ++n) {
        DiffFunction phi = partial_derivative(g, Generator::jet(m, n));
        if (phi.is_zero()) continue;
        std::vector<DiffFunction> tower{phi};
        const Rational sign = (n % 2 == 0) ? 1 : -1;
        for (int r = 0; r <= hkm.degree(); ++r) {
          const DiffFunction& hr = hkm.coeff(r);
          if (hr.is_zero()) continue;
          const int s = r + n;
          while (static_cast<int>(tower.size()) <= s) tower.push_back(total_derivative(tower.back()));
          for (int t = 0; t <= s; ++t) {
            if (tower[t].is_zero()) continue;
            out.add(s - t, (hr * tower[t]) * (sign * binomial(s, t)));
          }
        }
      }
    }
    return out;
  }

  LambdaPoly generator(int i, int j) const {
    return LambdaPoly(h_.at(j, i).coeffs());
  }

  LambdaMuPoly jacobiator(int i, int j, int k) {
    LambdaMuPoly out;
    // {u_i lambda {u_j mu u_k}}
    const LambdaPoly inner_jk = generator(j, k);
    for (int p = 0; p <= inner_jk.degree(); ++p) {
      if (inner_jk.coeff(p).is_zero()) continue;
      LambdaPoly l = left(i, inner_jk.coeff(p));
      for (int q = 0; q <= l.degree(); ++q) out.add(q, p, l.coeff(q));
    }
    // - {u_j mu {u_i lambda u_k}}
    const LambdaPoly inner_ik = generator(i, k);
    for (int p = 0; p <= inner_ik.degree(); ++p) {
      if (inner_ik.coeff(p).is_zero()) continue;
      LambdaPoly l = left(j, inner_ik.coeff(p));
      for (int q = 0; q <= l.degree(); ++q) out.add(p, q, -l.coeff(q));
    }
    // - {{u_i lambda u_j} lambda+mu u_k}
    const LambdaPoly inner_ij = generator(i, j);
    for (int a = 0; a <= inner_ij.degree(); ++a) {
      if (inner_ij.coeff(a).is_zero()) continue;
      LambdaPoly r = right(inner_ij.coeff(a), k);
      for (int s = 0; s <= r.degree(); ++s) {
        if (r.coeff(s).is_zero()) continue;
        for (int q = 0; q <= s; ++q) out.add(a + q, s - q, -(r.coeff(s) * binomial(s, q)));
      }
    }
    return out;
  }

private:
  const MatrixDiffOp& h_;
  int n_;
  std::map<std::pair<int, int>, std::vector<DiffFunction>> towers_;
};

}  // namespace

// ---------------------------------------------------------------------------

LambdaPoly::LambdaPoly(std::vector<DiffFunction> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

const DiffFunction& LambdaPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return zero_function();
  return coeffs_[k];
}

void LambdaPoly::add(int k, const DiffFunction& c) {
  if (c.is_zero()) return;
  if (k >= static_cast<int>(coeffs_.size())) coeffs_.resize(k + 1);
  coeffs_[k] += c;
  trim();
}

void LambdaPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

void LambdaMuPoly::add(int i, int j, const DiffFunction& c) {
  if (c.is_zero()) return;
  auto it = terms_.find({i, j});
  if (it == terms_.end()) {
    terms_.emplace(std::make_pair(i, j), c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

DiffFunction LambdaMuPoly::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? DiffFunction{} : it->second;
}

LambdaPoly generator_bracket(const MatrixDiffOp& h, int i, int j) {
  require_skew(h);
  return BracketEngine(h).generator(i, j);
}

LambdaPoly bracket_with_function(const MatrixDiffOp& h, int i, const DiffFunction& g) {
  require_skew(h);
  return BracketEngine(h).left(i, g);
}

LambdaMuPoly jacobiator(const MatrixDiffOp& h, int i, int j, int k) {
  require_skew(h);
  return BracketEngine(h).jacobiator(i, j, k);
}

std::optional<JacobiFailure> find_jacobi_failure(const MatrixDiffOp& h) {
  require_skew(h);
  BracketEngine engine(h);
  const int n = h.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        LambdaMuPoly r = engine.jacobiator(i, j, k);
        if (!r.is_zero()) return JacobiFailure{i, j, k, 0, std::move(r)};
      }
  return std::nullopt;
}

bool is_poisson(const MatrixDiffOp& h) { return !find_jacobi_failure(h); }

std::optional<JacobiFailure> find_compatibility_failure(const MatrixDiffOp& h,
                                                        const MatrixDiffOp& k) {
  if (h.size() != k.size()) throw Error(ErrorCode::DimensionMismatch, "pencil of unequal sizes");
  require_skew(h);
  require_skew(k);
  for (int t = 1; t <= 3; ++t) {
    if (auto f = find_jacobi_failure(h + Rational(t) * k)) {
      f->pencil_t = t;
      return f;
    }
  }
  return std::nullopt;
}

bool is_compatible(const MatrixDiffOp& h, const MatrixDiffOp& k) {
  return is_poisson(h) && is_poisson(k) && !find_compatibility_failure(h, k);
}

LocalFunctional poisson_bracket(const LocalFunctional& f, const LocalFunctional& g,
                                const MatrixDiffOp& h) {
  require_skew(h);
  const int n = h.size();
  VectorFunction df = variational_derivative(f, n);
  VectorFunction dg = variational_derivative(g, n);
  if (static_cast<int>(df.size()) != n || static_cast<int>(dg.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "functional mentions more variables than H");
  }
  return {dot(dg, lenard::apply(h, df))};
}

VectorFunction hamiltonian_flow(const MatrixDiffOp& h, const LocalFunctional& f) {
  require_skew(h);
  VectorFunction df = variational_derivative(f, h.size());
  return lenard::apply(h, df);
}

}  // namespace lenard
