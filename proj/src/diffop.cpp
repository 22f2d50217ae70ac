#include "lenard/diffop.hpp"

#include <stdexcept>

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

// d^0 f, ..., d^n f
std::vector<DiffFunction> derivative_tower(const DiffFunction& f, int n) {
  std::vector<DiffFunction> out;
  out.reserve(n + 1);
  out.push_back(f);
  for (int i = 1; i <= n; ++i) out.push_back(total_derivative(out.back()));
  return out;
}

}  // namespace

ScalarDiffOp::ScalarDiffOp(std::vector<DiffFunction> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

ScalarDiffOp ScalarDiffOp::d(int k) {
  std::vector<DiffFunction> c(k + 1);
  c[k] = DiffFunction(1L);
  return ScalarDiffOp(std::move(c));
}

const DiffFunction& ScalarDiffOp::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return zero_function();
  return coeffs_[k];
}

void ScalarDiffOp::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

ScalarDiffOp& ScalarDiffOp::operator+=(const ScalarDiffOp& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

ScalarDiffOp& ScalarDiffOp::operator-=(const ScalarDiffOp& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

ScalarDiffOp operator-(const ScalarDiffOp& a) { return Rational(-1) * a; }

ScalarDiffOp operator*(const Rational& c, const ScalarDiffOp& a) {
  ScalarDiffOp out = a;
  for (auto& x : out.coeffs_) x *= c;
  out.trim();
  return out;
}

DiffFunction ScalarDiffOp::operator()(const DiffFunction& f) const {
  if (coeffs_.empty() || f.is_zero()) return {};
  DiffFunction out;
  DiffFunction df = f;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k > 0) df = total_derivative(df);
    if (!coeffs_[k].is_zero()) out += coeffs_[k] * df;
  }
  return out;
}

std::optional<int> ScalarDiffOp::weight() const {
  std::optional<int> w;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k].is_zero()) continue;
    auto cw = lenard::weight(coeffs_[k]);
    if (!cw) return std::nullopt;
    int x = *cw + static_cast<int>(k);
    if (w && *w != x) return std::nullopt;
    w = x;
  }
  return w;
}

ScalarDiffOp compose(const ScalarDiffOp& a, const ScalarDiffOp& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const int da = a.degree();
  const int db = b.degree();
  std::vector<std::vector<DiffFunction>> towers(db + 1);
  for (int j = 0; j <= db; ++j) towers[j] = derivative_tower(b.coeff(j), da);
  std::vector<DiffFunction> out(da + db + 1);
  // d^i o b = sum_t C(i,t) b^{(t)} d^{i-t}
  for (int i = 0; i <= da; ++i) {
    const DiffFunction& ai = a.coeff(i);
    if (ai.is_zero()) continue;
    for (int j = 0; j <= db; ++j) {
      if (b.coeff(j).is_zero()) continue;
      for (int t = 0; t <= i; ++t) {
        const DiffFunction& bt = towers[j][t];
        if (bt.is_zero()) continue;
        out[i - t + j] += (ai * bt) * binomial(i, t);
      }
    }
  }
  return ScalarDiffOp(std::move(out));
}

ScalarDiffOp adjoint(const ScalarDiffOp& a) {
  if (a.is_zero()) return {};
  const int da = a.degree();
  std::vector<DiffFunction> out(da + 1);
  // (-d)^k o a_k = (-1)^k sum_t C(k,t) a_k^{(t)} d^{k-t}
  for (int k = 0; k <= da; ++k) {
    if (a.coeff(k).is_zero()) continue;
    auto tower = derivative_tower(a.coeff(k), k);
    Rational sign = (k % 2 == 0) ? 1 : -1;
    for (int t = 0; t <= k; ++t) out[k - t] += tower[t] * (sign * binomial(k, t));
  }
  return ScalarDiffOp(std::move(out));
}

// ---------------------------------------------------------------------------

MatrixDiffOp::MatrixDiffOp(std::initializer_list<std::initializer_list<ScalarDiffOp>> rows)
    : n_(static_cast<int>(rows.size())) {
  entries_.reserve(static_cast<std::size_t>(n_) * n_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n_) {
      throw Error(ErrorCode::DimensionMismatch, "matrix operator must be square");
    }
    for (const auto& e : r) entries_.push_back(e);
  }
}

MatrixDiffOp MatrixDiffOp::scalar(const ScalarDiffOp& op) {
  MatrixDiffOp m(1);
  m.at(0, 0) = op;
  return m;
}

std::size_t MatrixDiffOp::idx(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("MatrixDiffOp index");
  return static_cast<std::size_t>(i) * n_ + j;
}

MatrixDiffOp& MatrixDiffOp::operator+=(const MatrixDiffOp& o) {
  if (o.n_ != n_) throw Error(ErrorCode::DimensionMismatch, "matrix operator sum");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

MatrixDiffOp operator-(const MatrixDiffOp& a, const MatrixDiffOp& b) {
  return a + Rational(-1) * b;
}

MatrixDiffOp operator*(const Rational& c, const MatrixDiffOp& a) {
  MatrixDiffOp out = a;
  for (auto& e : out.entries_) e = c * e;
  return out;
}

bool MatrixDiffOp::is_zero() const {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

MatrixDiffOp compose(const MatrixDiffOp& a, const MatrixDiffOp& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "matrix composition");
  const int n = a.size();
  MatrixDiffOp out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.at(i, j) += compose(a.at(i, k), b.at(k, j));
  return out;
}

MatrixDiffOp adjoint(const MatrixDiffOp& a) {
  const int n = a.size();
  MatrixDiffOp out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(j, i) = adjoint(a.at(i, j));
  return out;
}

VectorFunction apply(const MatrixDiffOp& h, const VectorFunction& f) {
  if (static_cast<int>(f.size()) != h.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator of size " + std::to_string(h.size()) + " applied to vector of length " +
                    std::to_string(f.size()));
  }
  const int n = h.size();
  VectorFunction out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += h.at(i, j)(f[j]);
  return out;
}

bool is_skew_adjoint(const MatrixDiffOp& h) {
  return adjoint(h) + h == MatrixDiffOp(h.size());
}

bool kernel_verify(const MatrixDiffOp& h, const VectorFunction& xi) {
  return is_zero(lenard::apply(h, xi));
}

std::optional<int> weight(const MatrixDiffOp& h) {
  std::optional<int> w;
  for (int i = 0; i < h.size(); ++i) {
    for (int j = 0; j < h.size(); ++j) {
      const auto& e = h.at(i, j);
      if (e.is_zero()) continue;
      auto x = e.weight();
      if (!x || (w && *w != *x)) return std::nullopt;
      w = x;
    }
  }
  return w;
}

// ---------------------------------------------------------------------------

ScalarDiffOp q_operator() {
  using S = ScalarDiffOp;
  const S d = S::d();
  const S u = S::mul(DiffFunction::u());
  const S u2 = S::mul(DiffFunction::u().pow(2));
  const S d3 = S::d(3);
  S q = S::d(5);
  q += Rational(3) * compose(d, compose(compose(d, u) + compose(u, d), d));
  q += Rational(2) * (compose(d3, u) + compose(u, d3));
  q += Rational(8) * (compose(d, u2) + compose(u2, d));
  return q;
}

namespace {

PoissonPair make_builtin_pair() {
  using S = ScalarDiffOp;
  const S d = S::d();
  const S u = S::mul(DiffFunction::u());
  const S v = S::mul(DiffFunction::v());
  const S vinv2 = S::mul(DiffFunction::v(0, -2));

  PoissonPair p;
  p.h0 = MatrixDiffOp{{S::d(3) + compose(d, u) + compose(u, d), compose(v, d)},
                      {compose(d, v), S{}}};
  p.h1 = MatrixDiffOp{{S{}, compose(d, vinv2)},
                      {compose(vinv2, d), -compose(vinv2, compose(q_operator(), vinv2))}};

  if (weight(p.h0) != 3 || weight(p.h1) != -3) {
    throw std::logic_error("built-in pair is not weight-homogeneous of weights +3/-3");
  }
  return p;
}

}  // namespace

const PoissonPair& builtin_pair() {
  static const PoissonPair pair = make_builtin_pair();
  return pair;
}

}  // namespace lenard
