// Serialization: canonical JSON (round-trips exactly), grammar text
// (re-parses to the same value) and LaTeX in the u, v notation.
#ifndef LENARD_EMIT_HPP
#define LENARD_EMIT_HPP

#include <string>

#include <json.hpp>

#include "lenard/lenard.hpp"

namespace lenard {

using Json = nlohmann::json;

// JSON: a function is a list of terms {"c": "p/q", "m": [[var, order, exp], ...]}
// with 1-based variables and log v written ["log", 0, exp]; an operator is a
// list of {"k": power of d, "c": function}; a matrix is a list of rows.
Json to_json(const DiffFunction& f);
Json to_json(const VectorFunction& f);
Json to_json(const ScalarDiffOp& op);
Json to_json(const MatrixDiffOp& op);
Json to_json(const HierarchyRun& run);

/// Throw SYNTAX_ERROR on malformed input.
DiffFunction function_from_json(const Json& j);
VectorFunction vector_from_json(const Json& j);
ScalarDiffOp operator_from_json(const Json& j);
MatrixDiffOp matrix_from_json(const Json& j);

std::string to_text(const DiffFunction& f);
std::string to_text(const ScalarDiffOp& op);

std::string to_latex(const DiffFunction& f);
std::string to_latex(const ScalarDiffOp& op);
/// Densities and flows of a run as LaTeX display equations.
std::string to_latex(const HierarchyRun& run);

}  // namespace lenard

#endif  // LENARD_EMIT_HPP
