// Kernels, densities and lowest flows of the (H0, H1) pair in closed form,
// written with D() and explicit operators rather than through H0, H1.
#ifndef LENARD_TESTS_FIXTURES_HPP
#define LENARD_TESTS_FIXTURES_HPP

#include <string>

#include "support/common.hpp"

namespace lenard::testing::fixtures {

inline std::string Dn(const std::string& e, int n) {
  std::string s = e;
  for (int i = 0; i < n; ++i) s = "D(" + s + ")";
  return s;
}

inline VectorFunction xi(int eps, int alpha) {
  if (eps == 0 && alpha == 0) return V("0", "1");
  if (eps == 0) return V("1/v", "-u/v^2 - 3/2*v'^2/v^4 + v''/v^3");
  if (alpha == 0) return V("1", "0");
  return V("u''+4*u^2", "v^2/2");
}

inline DiffFunction h(int eps, int alpha) {
  if (eps == 0 && alpha == 0) return P("v");
  if (eps == 0) return P("u/v - 1/2*v'^2/v^3");
  if (alpha == 0) return P("u");
  return P("1/2*u*u'' + 4/3*u^3 + 1/6*v^3");
}

// Order-5 flow started from xi^{0,0}. As printed, the v-equation is
// -w w^(5) + 3w(u w')'' + ... with w = 1/v^2; the entry -(1/v^2) Q o (1/v^2)
// of H1 puts the minus sign on all seven terms.
inline std::string flow00_tail() {
  const std::string w = "(1/v^2)";
  return "3/v^2*" + Dn("u*" + Dn(w, 1), 2) + " + 3/v^2*" + Dn("u*" + Dn(w, 2), 1) + " + 2/v^2*" +
         Dn("u/v^2", 3) + " + 2*u/v^2*" + Dn(w, 3) + " + 8/v^2*" + Dn("u^2/v^2", 1) + " + 8*u^2/v^2*" +
         Dn(w, 1);
}

inline VectorFunction flow00() {
  const std::string w = "(1/v^2)";
  return {P(Dn(w, 1)), P("-(1/v^2*" + Dn(w, 5) + " + " + flow00_tail() + ")")};
}

inline VectorFunction flow00_as_printed() {
  const std::string w = "(1/v^2)";
  return {P(Dn(w, 1)), P("-1/v^2*" + Dn(w, 5) + " + " + flow00_tail())};
}

// Order-7 flow started from xi^{0,1}.
inline VectorFunction flow01() {
  const DiffFunction g = P("-u/v^4 + v''/v^5 - 3/2*v'^2/v^6");
  const ScalarDiffOp op = Op("d^5 + 3*d^2*u*d + 3*d*u*d^2 + 2*d^3*u + 2*u*d^3 + 8*d*u^2 + 8*u^2*d");
  return {total_derivative(g), P("-v'/v^4") - P("1/v^2") * op(g)};
}

inline VectorFunction flow10() { return V("u'", "v'"); }

inline VectorFunction flow11() {
  return V("u^(5)+10*u*u'''+25*u'*u''+20*u^2*u'+v^2*v'", "u'''*v+u''*v'+8*u*u'*v+4*u^2*v'");
}

inline VectorFunction flow(int eps, int alpha) {
  if (eps == 0) return alpha == 0 ? flow00() : flow01();
  return alpha == 0 ? flow10() : flow11();
}

// Next density of the (1,0) chain and its order-7 flow.
inline DiffFunction h10_1() { return P("1/3*u*v^3 + 8/3*u^4 + 1/2*u*u^(4) - 6*u*u'^2"); }

inline VectorFunction flow10_1() {
  const std::string x = "(u^(4) + 12*u*u'' + 6*u'^2 + 32/3*u^3 + 1/3*v^3)";
  return {Op("d^3 + 2*u*d + u'")(P(x)) + P("v*D(u*v^2)"),
          P("D(v*u^(4) + 12*v*u*u'' + 6*v*u'^2 + 32/3*v*u^3 + 1/3*v^4)")};
}

}  // namespace lenard::testing::fixtures

#endif  // LENARD_TESTS_FIXTURES_HPP
