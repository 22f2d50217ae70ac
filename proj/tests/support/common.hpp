// Small helpers shared by the test suites.
#ifndef LENARD_TESTS_COMMON_HPP
#define LENARD_TESTS_COMMON_HPP

#include <string_view>

#include <doctest.h>

#include "lenard/emit.hpp"
#include "lenard/parse.hpp"
#include "lenard/pva.hpp"
#include "lenard/varcalc.hpp"

namespace lenard::testing {

inline DiffFunction P(std::string_view s) { return parse_function(s); }
inline ScalarDiffOp Op(std::string_view s) { return parse_operator(s); }
inline VectorFunction V(std::string_view a, std::string_view b) { return {P(a), P(b)}; }
inline LocalFunctional F(std::string_view s) { return {P(s)}; }
inline LocalFunctional F(const DiffFunction& f) { return {f}; }

}  // namespace lenard::testing

namespace doctest {
template <>
struct StringMaker<lenard::DiffFunction> {
  static String convert(const lenard::DiffFunction& f) { return lenard::to_text(f).c_str(); }
};
template <>
struct StringMaker<lenard::ScalarDiffOp> {
  static String convert(const lenard::ScalarDiffOp& op) { return lenard::to_text(op).c_str(); }
};
}  // namespace doctest

#endif  // LENARD_TESTS_COMMON_HPP
