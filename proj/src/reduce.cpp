// Integration by parts: top-order reduction modulo total derivatives.
#include <stdexcept>

#include "lenard/diffalg.hpp"

namespace lenard {

namespace {

// Reduction rank: jet order first, then variable; log v ranks as (0, v).
bool rank_less(Generator a, Generator b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return a.var() < b.var();
}

// A term is reducible when it is linear in a single top-order generator
// x^{(N)}, N >= 1, and its cofactor has order <= N-1 with no order-(N-1)
// generator of a variable ranked above x. Returns that generator.
std::optional<Generator> reducible_top(const Monomial& m) {
  int top_order = m.order();
  if (top_order < 1) return std::nullopt;
  std::optional<Generator> top;
  for (const auto& f : m.factors()) {
    if (f.gen.order() != top_order) continue;
    if (top || f.exp != 1) return std::nullopt;
    top = f.gen;
  }
  for (const auto& f : m.factors()) {
    if (f.gen == *top) continue;
    if (f.gen.order() == top_order - 1 && f.gen.var() > top->var()) return std::nullopt;
  }
  return top;
}

// Primitive of v^k (log v)^j with respect to v, as (k, j, coefficient) terms.
void integrate_laurent_log(int k, int j, const Rational& c, std::vector<Term>& out,
                           const Monomial& rest) {
  static const Generator kV0 = Generator::jet(kLaurentVar, 0);
  static const Generator kLog = Generator::log();
  if (k == -1) {
    out.push_back({rest.times(kLog, j + 1), c / (j + 1)});
    return;
  }
  Rational scale = c / (k + 1);
  out.push_back({rest.times(kV0, k + 1).times(kLog, j), scale});
  if (j > 0) integrate_laurent_log(k, j - 1, -scale * j, out, rest);
}

}  // namespace

DiffFunction integrate_wrt(const Monomial& m, const Rational& c, Generator x) {
  if (x.is_log()) throw Error(ErrorCode::InvalidArgument, "cannot integrate in log v");
  if (!x.is_laurent()) {
    int e = m.exponent(x);
    return DiffFunction(m.times(x, 1), c / (e + 1));
  }
  int k = m.laurent_exponent();
  int j = m.log_exponent();
  Monomial rest = m.times(x, -k).times(Generator::log(), -j);
  std::vector<Term> out;
  integrate_laurent_log(k, j, c, out, rest);
  return DiffFunction::normalize(std::move(out));
}

namespace {

// Whether integrating the cofactor of `top` stays log-free and, for
// Laurent input, avoids creating nonnegative powers of v.
bool stays_inside(const Monomial& m, Generator top, bool laurent) {
  if (top.var() != kLaurentVar || top.order() != 1) return true;
  if (m.log_exponent() != 0) return false;
  const int k = m.laurent_exponent();
  return laurent ? k <= -2 : k >= 0;
}

Reduction reduce_impl(const DiffFunction& f, bool restricted) {
  bool laurent = false;
  for (const auto& t : f.terms())
    if (t.mono.laurent_exponent() < 0) laurent = true;
  auto reducible = [&](const Monomial& m) -> std::optional<Generator> {
    auto top = reducible_top(m);
    if (top && restricted && !stays_inside(m.times(*top, -1), *top, laurent)) return std::nullopt;
    return top;
  };

  Reduction r{f, {}};
  while (true) {
    std::optional<Generator> best;
    for (const auto& t : r.remainder.terms()) {
      auto top = reducible(t.mono);
      if (top && (!best || rank_less(*best, *top))) best = top;
    }
    if (!best) break;
    const Generator below = Generator::jet(best->var(), best->order() - 1);
    DiffFunction g;
    std::vector<Term> pieces;
    for (const auto& t : r.remainder.terms()) {
      auto top = reducible(t.mono);
      if (!top || *top != *best) continue;
      DiffFunction part = integrate_wrt(t.mono.times(*best, -1), t.coeff, below);
      for (const auto& p : part.terms()) pieces.push_back(p);
    }
    g = DiffFunction::normalize(std::move(pieces));
    r.remainder -= total_derivative(g);
    r.primitive += g;
  }
  return r;
}

}  // namespace

Reduction reduce_by_parts(const DiffFunction& f) { return reduce_impl(f, false); }

Reduction reduce_within_subalgebra(const DiffFunction& f) { return reduce_impl(f, true); }

std::optional<DiffFunction> antiderivative(const DiffFunction& f) {
  Reduction r = reduce_by_parts(f);
  if (!r.remainder.is_zero()) return std::nullopt;
  return std::move(r.primitive);
}

std::optional<DiffFunction> antiderivative(const DiffFunction& f, const SubalgebraTag& domain) {
  if (!subalgebra_member(f, domain)) return std::nullopt;
  auto g = antiderivative(f);
  if (!g) return std::nullopt;
  bool ok = true;
  switch (domain.kind) {
    case SubalgebraKind::VPlus:
    case SubalgebraKind::ScaledVPlus:
      ok = subalgebra_member(*g, SubalgebraTag::v_plus());
      break;
    case SubalgebraKind::VMinus:
    case SubalgebraKind::VZero: {
      const Monomial v = Monomial::of(Generator::jet(kLaurentVar, 0));
      for (const auto& t : g->terms())
        if (!(t.mono == v) && !subalgebra_member(t.mono, SubalgebraTag::v_minus())) ok = false;
      break;
    }
    case SubalgebraKind::ScaledVMinus:
    case SubalgebraKind::ConstScaledVMinus:
    case SubalgebraKind::AffineScaled:
      ok = subalgebra_member(*g, SubalgebraTag::affine_scaled(domain.k));
      break;
  }
  if (!ok) throw std::logic_error("antiderivative left the subalgebra predicted for its domain");
  return g;
}

}  // namespace lenard
