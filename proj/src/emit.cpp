#include "lenard/emit.hpp"

#include <sstream>

namespace lenard {

namespace {

const char* var_name(int var) {
  static const char* names[] = {"u", "v", "w3", "w4", "w5", "w6", "w7", "w8"};
  return names[var];
}

[[noreturn]] void bad_json(const std::string& what) {
  throw Error(ErrorCode::SyntaxError, "malformed JSON: " + what);
}

std::string optional_json_order(const std::optional<int>& o) {
  return o ? std::to_string(*o) : "null";
}

// ---------------------------------------------------------------------------
// Text

std::string gen_text(Generator g) {
  if (g.is_log()) return "log(v)";
  std::string s = var_name(g.var());
  const int n = g.order();
  if (n >= 3) return s + "^(" + std::to_string(n) + ")";
  return s + std::string(n, '\'');
}

std::string mono_text(const Monomial& m) {
  std::string s;
  for (const auto& f : m.factors()) {
    if (!s.empty()) s += "*";
    s += gen_text(f.gen);
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
  }
  return s;
}

// Joins signed pieces as "a + b - c".
std::string join_signed(const std::vector<std::pair<bool, std::string>>& pieces) {
  if (pieces.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& [neg, body] = pieces[i];
    if (i == 0) s += neg ? "-" : "";
    else s += neg ? " - " : " + ";
    s += body;
  }
  return s;
}

std::vector<std::pair<bool, std::string>> text_terms(const DiffFunction& f) {
  std::vector<std::pair<bool, std::string>> out;
  for (const auto& t : f.terms()) {
    const bool neg = sgn(t.coeff) < 0;
    const Rational c = abs(t.coeff);
    std::string body;
    if (t.mono.is_one()) body = c.get_str();
    else if (c == 1) body = mono_text(t.mono);
    else body = c.get_str() + "*" + mono_text(t.mono);
    out.emplace_back(neg, body);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LaTeX

std::string sup(int e) {
  const std::string s = std::to_string(e);
  return s.size() == 1 ? "^" + s : "^{" + s + "}";
}

std::string gen_latex(Generator g, int exp) {
  if (g.is_log()) return exp == 1 ? "\\log v" : "(\\log v)" + sup(exp);
  std::string base = var_name(g.var());
  const int n = g.order();
  if (n >= 4) {
    base += "^{(" + std::to_string(n) + ")}";
    return exp == 1 ? base : "(" + base + ")" + sup(exp);
  }
  base += std::string(n, '\'');
  return exp == 1 ? base : base + sup(exp);
}

std::string latex_term(const Rational& c, const Monomial& m) {
  std::string num, den;
  for (const auto& f : m.factors()) {
    if (f.exp > 0) num += gen_latex(f.gen, f.exp);
  }
  const int k = m.laurent_exponent();
  if (k < 0) den = gen_latex(Generator::jet(kLaurentVar, 0), -k);
  const mpz_class p = c.get_num();
  const mpz_class q = c.get_den();
  if (p != 1 || num.empty()) num = p.get_str() + (num.empty() ? "" : " " + num);
  if (q != 1) den = q.get_str() + (den.empty() ? "" : " " + den);
  if (den.empty()) return num;
  return "\\frac{" + num + "}{" + den + "}";
}

std::vector<std::pair<bool, std::string>> latex_terms(const DiffFunction& f) {
  std::vector<std::pair<bool, std::string>> out;
  // Highest weight and order first, as in hand-written formulas.
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    out.emplace_back(sgn(it->coeff) < 0, latex_term(abs(it->coeff), it->mono));
  }
  return out;
}

std::string d_power_latex(int k) {
  if (k == 0) return "";
  return k == 1 ? "\\partial" : "\\partial" + sup(k);
}

}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const DiffFunction& f) {
  Json out = Json::array();
  for (const auto& t : f.terms()) {
    Json m = Json::array();
    for (const auto& fac : t.mono.factors()) {
      if (fac.gen.is_log()) m.push_back(Json::array({"log", 0, fac.exp}));
      else m.push_back(Json::array({fac.gen.var() + 1, fac.gen.order(), fac.exp}));
    }
    out.push_back({{"c", t.coeff.get_str()}, {"m", std::move(m)}});
  }
  return out;
}

Json to_json(const VectorFunction& f) {
  Json out = Json::array();
  for (const auto& c : f) out.push_back(to_json(c));
  return out;
}

Json to_json(const ScalarDiffOp& op) {
  Json out = Json::array();
  for (int k = 0; k <= op.degree(); ++k) {
    if (!op.coeff(k).is_zero()) out.push_back({{"k", k}, {"c", to_json(op.coeff(k))}});
  }
  return out;
}

Json to_json(const MatrixDiffOp& op) {
  Json out = Json::array();
  for (int i = 0; i < op.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < op.size(); ++j) row.push_back(to_json(op.at(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const HierarchyRun& run) {
  auto order = [](const std::optional<int>& o) { return o ? Json(*o) : Json(nullptr); };
  auto texts = [](const VectorFunction& f) {
    Json out = Json::array();
    for (const auto& c : f) out.push_back(to_text(c));
    return out;
  };
  Json steps = Json::array();
  Json table = Json::array();
  for (std::size_t n = 0; n < run.xis.size(); ++n) {
    Json s;
    s["n"] = n;
    s["xi"] = to_json(run.xis[n]);
    s["xi_text"] = texts(run.xis[n]);
    s["density"] = to_json(run.densities[n].density);
    s["density_text"] = to_text(run.densities[n].density);
    s["flow"] = to_json(run.flows[n]);
    s["flow_text"] = texts(run.flows[n]);
    s["order_f"] = order(run.orders[n].f);
    s["order_g"] = order(run.orders[n].g);
    s["order_flow"] = order(run.flow_orders[n]);
    table.push_back({order(run.orders[n].f), order(run.orders[n].g), order(run.flow_orders[n])});
    steps.push_back(std::move(s));
  }
  return {{"epsilon", run.seed.epsilon},
          {"alpha", run.seed.alpha},
          {"seed",
           {{"xi", to_json(run.seed.xi0)}, {"density", to_json(run.seed.h0.density)}}},
          {"steps", std::move(steps)},
          {"orders", std::move(table)}};
}

DiffFunction function_from_json(const Json& j) {
  if (!j.is_array()) bad_json("a function is a list of terms");
  std::vector<Term> raw;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("c") || !t.contains("m")) bad_json("term needs c and m");
    if (!t["c"].is_string()) bad_json("coefficient must be a string");
    Rational c;
    try {
      c = Rational(t["c"].get<std::string>());
    } catch (const std::invalid_argument&) {
      bad_json("bad coefficient " + t["c"].get<std::string>());
    }
    if (c.get_den() == 0) bad_json("zero denominator");
    c.canonicalize();
    if (!t["m"].is_array()) bad_json("monomial must be a list");
    Monomial m;
    for (const auto& f : t["m"]) {
      if (!f.is_array() || f.size() != 3 || !f[1].is_number_integer() || !f[2].is_number_integer()) {
        bad_json("factor must be [var, order, exp]");
      }
      const int exp = f[2].get<int>();
      Generator g;
      if (f[0].is_string() && f[0].get<std::string>() == "log") {
        g = Generator::log();
      } else if (f[0].is_number_integer()) {
        const int var = f[0].get<int>() - 1;
        const int order = f[1].get<int>();
        if (var < 0 || var >= kMaxVars || order < 0 || order > kMaxOrder) bad_json("jet out of range");
        g = Generator::jet(var, order);
        if (exp < 0 && !g.is_laurent()) {
          throw Error(ErrorCode::ExponentError, "negative exponent on a generator other than v");
        }
      } else {
        bad_json("variable must be an index or \"log\"");
      }
      if (exp == 0 || m.exponent(g) != 0) bad_json("repeated or zero-exponent factor");
      m = m.times(g, exp);
    }
    raw.push_back({m, c});
  }
  return DiffFunction::normalize(std::move(raw));
}

VectorFunction vector_from_json(const Json& j) {
  if (!j.is_array()) bad_json("a vector is a list of functions");
  VectorFunction out;
  for (const auto& c : j) out.push_back(function_from_json(c));
  return out;
}

ScalarDiffOp operator_from_json(const Json& j) {
  if (!j.is_array()) bad_json("an operator is a list of {k, c}");
  std::vector<DiffFunction> coeffs;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("k") || !t["k"].is_number_integer() || !t.contains("c")) {
      bad_json("operator term needs integer k and c");
    }
    const int k = t["k"].get<int>();
    if (k < 0 || k > kMaxOrder) bad_json("d power out of range");
    if (static_cast<int>(coeffs.size()) <= k) coeffs.resize(k + 1);
    coeffs[k] += function_from_json(t["c"]);
  }
  return ScalarDiffOp(std::move(coeffs));
}

MatrixDiffOp matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad_json("a matrix is a nonempty list of rows");
  const int n = static_cast<int>(j.size());
  MatrixDiffOp out(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) {
      throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
    }
    for (int k = 0; k < n; ++k) out.at(i, k) = operator_from_json(j[i][k]);
  }
  return out;
}

std::string to_text(const DiffFunction& f) { return join_signed(text_terms(f)); }

std::string to_text(const ScalarDiffOp& op) {
  std::vector<std::pair<bool, std::string>> pieces;
  for (int k = 0; k <= op.degree(); ++k) {
    const DiffFunction& c = op.coeff(k);
    if (c.is_zero()) continue;
    const std::string d = k == 0 ? "" : (k == 1 ? "d" : "d^" + std::to_string(k));
    if (k == 0) {
      for (auto& p : text_terms(c)) pieces.push_back(std::move(p));
    } else if (c == DiffFunction(1)) {
      pieces.emplace_back(false, d);
    } else if (c == DiffFunction(-1)) {
      pieces.emplace_back(true, d);
    } else {
      pieces.emplace_back(false, "(" + to_text(c) + ")*" + d);
    }
  }
  return join_signed(pieces);
}

std::string to_latex(const DiffFunction& f) {
  std::string s;
  const auto pieces = latex_terms(f);
  if (pieces.empty()) return "0";
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& [neg, body] = pieces[i];
    if (i == 0) s += neg ? "-" : "";
    else s += neg ? " - " : " + ";
    s += body;
  }
  return s;
}

std::string to_latex(const ScalarDiffOp& op) {
  std::string s;
  for (int k = op.degree(); k >= 0; --k) {
    const DiffFunction& c = op.coeff(k);
    if (c.is_zero()) continue;
    std::string piece;
    if (k > 0 && c == DiffFunction(1)) piece = d_power_latex(k);
    else if (k > 0 && c.size() == 1) piece = to_latex(c) + " " + d_power_latex(k);
    else if (k > 0) piece = "\\left(" + to_latex(c) + "\\right) " + d_power_latex(k);
    else piece = to_latex(c);
    if (!s.empty()) s += piece.front() == '-' ? " " : " + ";
    s += piece;
  }
  return s.empty() ? "0" : s;
}

std::string to_latex(const HierarchyRun& run) {
  std::ostringstream out;
  const std::string tag = std::to_string(run.seed.epsilon) + "," + std::to_string(run.seed.alpha);
  for (std::size_t n = 0; n < run.xis.size(); ++n) {
    const std::string idx = "^{" + tag + "}_{" + std::to_string(n) + "}";
    out << "% step " << n << ": orders |f| = " << optional_json_order(run.orders[n].f)
        << ", |g| = " << optional_json_order(run.orders[n].g)
        << ", |P| = " << optional_json_order(run.flow_orders[n]) << "\n";
    out << "\\begin{align*}\n";
    out << "  \\int h" << idx << " &= \\int \\left(" << to_latex(run.densities[n].density)
        << "\\right) \\\\\n";
    out << "  \\frac{du}{dt" << idx << "} &= " << to_latex(run.flows[n][0]) << " \\\\\n";
    out << "  \\frac{dv}{dt" << idx << "} &= " << to_latex(run.flows[n][1]) << "\n";
    out << "\\end{align*}\n";
  }
  return out.str();
}

}  // namespace lenard
