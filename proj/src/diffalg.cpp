#include "lenard/diffalg.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace lenard {

Generator Generator::jet(int var, int order) {
  if (var < 0 || var >= kMaxVars || order < 0 || order > kMaxOrder) {
    throw Error(ErrorCode::InvalidArgument,
                "jet index out of range (var " + std::to_string(var) + ", order " +
                    std::to_string(order) + ")");
  }
  return Generator(static_cast<std::uint16_t>((var << 10) | order));
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::of(Generator g, int exp) {
  Monomial m;
  if (exp != 0) m.factors_.push_back({g, exp});
  return m;
}

int Monomial::exponent(Generator g) const {
  for (const auto& f : factors_) {
    if (f.gen == g) return f.exp;
    if (g < f.gen) break;
  }
  return 0;
}

Monomial Monomial::times(Generator g, int delta) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + 1);
  bool placed = false;
  for (const auto& f : factors_) {
    if (!placed && g <= f.gen) {
      placed = true;
      if (g == f.gen) {
        if (f.exp + delta != 0) out.factors_.push_back({g, f.exp + delta});
        continue;
      }
      if (delta != 0) out.factors_.push_back({g, delta});
    }
    out.factors_.push_back(f);
  }
  if (!placed && delta != 0) out.factors_.push_back({g, delta});
  return out;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->gen < b->gen)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->gen < a->gen) {
      out.factors_.push_back(*b++);
    } else {
      int e = a->exp + b->exp;
      if (e != 0) out.factors_.push_back({a->gen, e});
      ++a;
      ++b;
    }
  }
  return out;
}

int Monomial::order() const {
  int o = -1;
  for (const auto& f : factors_) o = std::max(o, f.gen.order());
  return o;
}

int Monomial::weight() const {
  int w = 0;
  for (const auto& f : factors_) w += f.gen.weight() * f.exp;
  return w;
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& f : factors_)
    if (!f.gen.is_log()) d += f.exp;
  return d;
}

int Monomial::var_degree(int var) const {
  int d = 0;
  for (const auto& f : factors_)
    if (!f.gen.is_log() && f.gen.var() == var) d += f.exp;
  return d;
}

bool Monomial::has_var(int var) const {
  for (const auto& f : factors_)
    if (f.gen.var() == var) return true;
  return false;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& f : factors_) {
    std::size_t x = (static_cast<std::size_t>(f.gen.key()) << 32) ^
                    static_cast<std::uint32_t>(f.exp);
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  return std::lexicographical_compare_three_way(a.factors_.begin(), a.factors_.end(),
                                                b.factors_.begin(), b.factors_.end());
}

// ---------------------------------------------------------------------------
// DiffFunction

DiffFunction::DiffFunction(long c) {
  if (c != 0) terms_.push_back({Monomial{}, Rational(c)});
}

DiffFunction::DiffFunction(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

DiffFunction::DiffFunction(const Monomial& m, const Rational& c) {
  if (c != 0) terms_.push_back({m, c});
}

DiffFunction DiffFunction::jet(int var, int order, int exp) {
  if (exp < 0 && !(var == kLaurentVar && order == 0)) {
    throw Error(ErrorCode::ExponentError, "negative exponent on a non-Laurent generator");
  }
  return DiffFunction(Monomial::of(Generator::jet(var, order), exp));
}

DiffFunction DiffFunction::normalize(std::vector<Term> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  std::vector<Term> out;
  out.reserve(raw.size());
  for (auto& t : raw) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  return DiffFunction(std::move(out));
}

Rational DiffFunction::coeff(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& x) { return t.mono < x; });
  if (it != terms_.end() && it->mono == m) return it->coeff;
  return 0;
}

bool DiffFunction::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

namespace {

std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, int sign) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->mono < j->mono)) {
      out.push_back(*i++);
    } else if (i == a.end() || j->mono < i->mono) {
      out.push_back({j->mono, sign > 0 ? j->coeff : Rational(-j->coeff)});
      ++j;
    } else {
      Rational c = sign > 0 ? Rational(i->coeff + j->coeff) : Rational(i->coeff - j->coeff);
      if (c != 0) out.push_back({i->mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

DiffFunction& DiffFunction::operator+=(const DiffFunction& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, +1);
  return *this;
}

DiffFunction& DiffFunction::operator-=(const DiffFunction& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, -1);
  return *this;
}

DiffFunction& DiffFunction::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

DiffFunction operator*(const DiffFunction& a, const DiffFunction& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Term> raw;
  raw.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) raw.push_back({x.mono * y.mono, x.coeff * y.coeff});
  return DiffFunction::normalize(std::move(raw));
}

DiffFunction DiffFunction::times(const Monomial& m, const Rational& c) const {
  if (c == 0) return {};
  std::vector<Term> raw;
  raw.reserve(terms_.size());
  for (const auto& t : terms_) raw.push_back({t.mono * m, t.coeff * c});
  // multiplication by a monomial is injective, but may reorder
  return normalize(std::move(raw));
}

DiffFunction DiffFunction::pow(int n) const {
  if (n < 0) {
    if (terms_.size() != 1) {
      throw Error(ErrorCode::ExponentError, "negative power of a non-monomial");
    }
    const auto& t = terms_[0];
    for (const auto& f : t.mono.factors()) {
      if (!f.gen.is_laurent()) {
        throw Error(ErrorCode::ExponentError, "negative power of a non-invertible element");
      }
    }
    Monomial inv;
    for (const auto& f : t.mono.factors()) inv = inv.times(f.gen, -f.exp * (-n));
    Rational c = 1;
    for (int i = 0; i < -n; ++i) c /= t.coeff;
    return DiffFunction(inv, c);
  }
  DiffFunction result(1L);
  DiffFunction base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

bool operator==(const DiffFunction& a, const DiffFunction& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff)
      return false;
  }
  return true;
}

VectorFunction operator+(const VectorFunction& a, const VectorFunction& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sum");
  VectorFunction out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

VectorFunction operator-(const VectorFunction& a, const VectorFunction& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector difference");
  VectorFunction out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

VectorFunction operator*(const Rational& c, const VectorFunction& a) {
  VectorFunction out(a);
  for (auto& x : out) x *= c;
  return out;
}

bool is_zero(const VectorFunction& f) {
  return std::all_of(f.begin(), f.end(), [](const DiffFunction& x) { return x.is_zero(); });
}

DiffFunction dot(const VectorFunction& a, const VectorFunction& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product");
  DiffFunction s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// Derivations

DiffFunction total_derivative(const DiffFunction& f) {
  static const Generator kLog = Generator::log();
  static const Generator kV0 = Generator::jet(kLaurentVar, 0);
  static const Generator kV1 = Generator::jet(kLaurentVar, 1);
  std::vector<Term> raw;
  raw.reserve(f.size() * 3);
  for (const auto& t : f.terms()) {
    for (const auto& fac : t.mono.factors()) {
      Monomial m = t.mono.times(fac.gen, -1);
      if (fac.gen == kLog) {
        m = m.times(kV1, 1).times(kV0, -1);
      } else {
        m = m.times(fac.gen.next(), 1);
      }
      raw.push_back({std::move(m), t.coeff * fac.exp});
    }
  }
  return DiffFunction::normalize(std::move(raw));
}

DiffFunction total_derivative(const DiffFunction& f, int n) {
  DiffFunction g = f;
  for (int i = 0; i < n && !g.is_zero(); ++i) g = total_derivative(g);
  return g;
}

namespace {

DiffFunction raw_partial(const DiffFunction& f, Generator g) {
  std::vector<Term> raw;
  for (const auto& t : f.terms()) {
    int e = t.mono.exponent(g);
    if (e != 0) raw.push_back({t.mono.times(g, -1), t.coeff * e});
  }
  return DiffFunction::normalize(std::move(raw));
}

}  // namespace

DiffFunction partial_derivative(const DiffFunction& f, Generator g) {
  DiffFunction d = raw_partial(f, g);
  if (g.is_laurent()) {
    DiffFunction dl = raw_partial(f, Generator::log());
    if (!dl.is_zero()) d += dl.times(Monomial::of(g, -1));
  }
  return d;
}

std::vector<Generator> generators(const DiffFunction& f) {
  std::vector<Generator> gens;
  for (const auto& t : f.terms())
    for (const auto& fac : t.mono.factors()) gens.push_back(fac.gen);
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

std::optional<int> differential_order(const DiffFunction& f) {
  int o = -1;
  for (const auto& t : f.terms()) o = std::max(o, t.mono.order());
  if (o < 0) return std::nullopt;
  return o;
}

std::optional<int> differential_order(const VectorFunction& f) {
  std::optional<int> o;
  for (const auto& c : f) {
    auto x = differential_order(c);
    if (x && (!o || *x > *o)) o = x;
  }
  return o;
}

std::optional<int> differential_order(const DiffFunction& f, int var) {
  std::optional<int> o;
  for (const auto& t : f.terms())
    for (const auto& fac : t.mono.factors())
      if (fac.gen.var() == var && (!o || fac.gen.order() > *o)) o = fac.gen.order();
  return o;
}

std::optional<int> weight(const DiffFunction& f) {
  if (f.is_zero()) return std::nullopt;
  int w = f.terms().front().mono.weight();
  for (const auto& t : f.terms())
    if (t.mono.weight() != w) return std::nullopt;
  return w;
}

std::optional<int> weight(const VectorFunction& f) {
  std::optional<int> w;
  for (const auto& c : f) {
    if (c.is_zero()) continue;
    auto x = weight(c);
    if (!x) return std::nullopt;
    if (w && *w != *x) return std::nullopt;
    w = x;
  }
  return w;
}

int var_count(const DiffFunction& f) {
  int n = 0;
  for (const auto& t : f.terms())
    for (const auto& fac : t.mono.factors()) n = std::max(n, fac.gen.var() + 1);
  return n;
}

// ---------------------------------------------------------------------------
// Subalgebras

SubalgebraTag SubalgebraTag::scaled_v_minus(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "SCALED_V_MINUS needs k >= 1");
  return {SubalgebraKind::ScaledVMinus, k};
}
SubalgebraTag SubalgebraTag::affine_scaled(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "AFFINE_SCALED needs k >= 1");
  return {SubalgebraKind::AffineScaled, k};
}
SubalgebraTag SubalgebraTag::scaled_v_plus(int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "SCALED_V_PLUS needs k >= 0");
  return {SubalgebraKind::ScaledVPlus, k};
}
SubalgebraTag SubalgebraTag::const_scaled_v_minus(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "CONST_SCALED_V_MINUS needs k >= 1");
  return {SubalgebraKind::ConstScaledVMinus, k};
}

bool subalgebra_member(const Monomial& m, const SubalgebraTag& tag) {
  if (m.log_exponent() != 0) return false;
  const int e = m.laurent_exponent();
  switch (tag.kind) {
    case SubalgebraKind::VPlus: return e >= 0;
    case SubalgebraKind::VMinus: return e <= 0;
    case SubalgebraKind::VZero: return e == 0;
    case SubalgebraKind::ScaledVMinus: return e <= -tag.k;
    case SubalgebraKind::AffineScaled:
      return e <= -tag.k || m == Monomial::of(Generator::jet(kLaurentVar, 0), 1 - tag.k);
    case SubalgebraKind::ScaledVPlus: return e >= tag.k;
    case SubalgebraKind::ConstScaledVMinus: return e <= -tag.k || m.is_one();
  }
  return false;
}

bool subalgebra_member(const DiffFunction& f, const SubalgebraTag& tag) {
  return std::all_of(f.terms().begin(), f.terms().end(),
                     [&](const Term& t) { return subalgebra_member(t.mono, tag); });
}

// ---------------------------------------------------------------------------
// Local functionals

std::vector<DiffFunction> variational_derivative_components(const DiffFunction& f, int n_vars) {
  std::vector<DiffFunction> out(n_vars);
  for (int i = 0; i < n_vars; ++i) {
    // log v counts as an order-0 dependence on v
    auto top = differential_order(f, i);
    if (!top) continue;
    // Horner: sum_n (-d)^n p_n = p_0 - d(p_1 - d(p_2 - ...))
    DiffFunction acc;
    for (int n = *top; n >= 0; --n) {
      acc = partial_derivative(f, Generator::jet(i, n)) - total_derivative(acc);
    }
    out[i] = std::move(acc);
  }
  return out;
}

bool functional_is_zero(const LocalFunctional& a, int n_vars) {
  if (a.density.constant_term() != 0) return false;
  n_vars = std::max(n_vars, var_count(a.density));
  auto d = variational_derivative_components(a.density, n_vars);
  return is_zero(d);
}

bool functional_equal(const LocalFunctional& a, const LocalFunctional& b, int n_vars) {
  return functional_is_zero({a.density - b.density}, n_vars);
}

LocalFunctional canonical(const LocalFunctional& a) {
  return {reduce_by_parts(a.density).remainder};
}

}  // namespace lenard
