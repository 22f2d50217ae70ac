// Batch front end. Exit codes: 0 success, 2 verification failure,
// 3 no solution within the search bounds, 4 input error.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lenard/emit.hpp"
#include "lenard/parse.hpp"
#include "lenard/pva.hpp"
#include "lenard/varcalc.hpp"

using namespace lenard;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 2;
constexpr int kNoSolution = 3;
constexpr int kInputError = 4;

// "@path" reads a file; anything else is taken literally.
std::string slurp(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + arg.substr(1));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(const std::string& s) {
  auto p = s.find_first_not_of(" \t\r\n");
  return p != std::string::npos && (s[p] == '[' || s[p] == '{');
}

Json parse_json(const std::string& s) {
  try {
    return Json::parse(s);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SyntaxError, std::string("JSON: ") + e.what());
  }
}

DiffFunction read_function(const std::string& arg) {
  const std::string s = slurp(arg);
  return looks_like_json(s) ? function_from_json(parse_json(s)) : parse_function(s);
}

// JSON matrix: rows of operators, each either {k, c} lists or grammar strings.
MatrixDiffOp read_matrix(const std::string& arg) {
  const Json j = parse_json(slurp(arg));
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::SyntaxError, "matrix must be a list of rows");
  const int n = static_cast<int>(j.size());
  MatrixDiffOp out(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) {
      throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
    }
    for (int k = 0; k < n; ++k) {
      out.at(i, k) = j[i][k].is_string() ? parse_operator(j[i][k].get<std::string>())
                                         : operator_from_json(j[i][k]);
    }
  }
  return out;
}

const MatrixDiffOp& builtin(const std::string& name) {
  if (name == "h0" || name == "0") return builtin_pair().h0;
  if (name == "h1" || name == "1") return builtin_pair().h1;
  throw Error(ErrorCode::InvalidArgument, "unknown built-in structure " + name);
}

struct Output {
  bool latex = false;
  std::string file;

  void write(const std::string& text) const {
    if (file.empty()) {
      std::cout << text << "\n";
      return;
    }
    std::ofstream out(file);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + file);
    out << text << "\n";
  }
  void json(const Json& j) const { write(j.dump(2)); }
};

Json lambda_mu_json(const LambdaMuPoly& p) {
  Json out = Json::array();
  for (const auto& [key, c] : p.terms()) {
    out.push_back({{"lambda", key.first}, {"mu", key.second}, {"c", to_json(c)}, {"text", to_text(c)}});
  }
  return out;
}

Json failure_json(const JacobiFailure& f) {
  Json j = {{"triple", {f.i + 1, f.j + 1, f.k + 1}}, {"residual", lambda_mu_json(f.residual)}};
  if (f.pencil_t != 0) j["pencil_t"] = f.pencil_t.get_str();
  return j;
}

// verify-poisson on one operator; not skew-adjoint counts as a failure.
std::pair<bool, Json> poisson_report(const MatrixDiffOp& h) {
  if (!is_skew_adjoint(h)) return {false, {{"poisson", false}, {"reason", "not skew-adjoint"}}};
  auto f = find_jacobi_failure(h);
  Json j = {{"poisson", !f}};
  if (f) j["failure"] = failure_json(*f);
  return {!f, j};
}

std::string vector_latex(const VectorFunction& f) {
  std::string s = "\\begin{pmatrix}";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? " \\\\ " : " ") + to_latex(f[i]);
  return s + " \\end{pmatrix}";
}

std::string matrix_latex(const MatrixDiffOp& m) {
  std::string s = "\\begin{pmatrix}";
  for (int i = 0; i < m.size(); ++i) {
    s += i ? " \\\\ " : " ";
    for (int j = 0; j < m.size(); ++j) s += (j ? " & " : "") + to_latex(m.at(i, j));
  }
  return s + " \\end{pmatrix}";
}

Json vector_json(const VectorFunction& f) {
  Json texts = Json::array();
  for (const auto& c : f) texts.push_back(to_text(c));
  return {{"value", to_json(f)}, {"text", texts}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-Hamiltonian hierarchy toolkit for the (u, v) pair"};
  app.require_subcommand(1);
  // --out and --latex may follow the subcommand
  app.fallthrough();
  Output out;
  app.add_option("-o,--out", out.file, "Write the result to FILE");
  app.add_flag("--latex", out.latex, "LaTeX instead of JSON");
  int code = kOk;

  // verify-poisson
  auto* vp = app.add_subcommand("verify-poisson", "Check the Jacobi identity of a structure");
  std::string vp_builtin, vp_op;
  auto* vp_b = vp->add_option("--builtin", vp_builtin, "h0 or h1");
  vp->add_option("--op", vp_op, "Matrix operator as JSON (or @file)")->excludes(vp_b);
  vp->callback([&] {
    if (vp_builtin.empty() && vp_op.empty()) throw Error(ErrorCode::InvalidArgument, "need --builtin or --op");
    const MatrixDiffOp h = vp_op.empty() ? builtin(vp_builtin) : read_matrix(vp_op);
    auto [ok, j] = poisson_report(h);
    out.json(j);
    code = ok ? kOk : kVerifyFailed;
  });

  // verify-compatible
  auto* vc = app.add_subcommand("verify-compatible", "Check that two structures form a pencil");
  bool vc_builtin = false;
  std::string vc_h, vc_k;
  vc->add_flag("--builtin", vc_builtin, "Use the built-in pair (H0, H1)");
  vc->add_option("--first", vc_h, "First structure (JSON or @file)");
  vc->add_option("--second", vc_k, "Second structure (JSON or @file)");
  vc->callback([&] {
    MatrixDiffOp h, k;
    if (vc_builtin) {
      h = builtin_pair().h0;
      k = builtin_pair().h1;
    } else {
      if (vc_h.empty() || vc_k.empty()) throw Error(ErrorCode::InvalidArgument, "need --builtin or --first and --second");
      h = read_matrix(vc_h);
      k = read_matrix(vc_k);
    }
    if (h.size() != k.size()) throw Error(ErrorCode::DimensionMismatch, "structures of different sizes");
    auto [hp, hj] = poisson_report(h);
    auto [kp, kj] = poisson_report(k);
    Json j = {{"h", hj}, {"k", kj}};
    bool ok = hp && kp;
    if (ok) {
      auto f = find_compatibility_failure(h, k);
      if (f) j["failure"] = failure_json(*f);
      ok = !f;
    }
    j["compatible"] = ok;
    out.json(j);
    code = ok ? kOk : kVerifyFailed;
  });

  // casimir-check
  auto* cc = app.add_subcommand("casimir-check", "Check kernel elements and their densities");
  std::string cc_op, cc_xi, cc_density;
  cc->add_option("--op", cc_op, "Structure (JSON or @file); default: the four built-in seeds");
  cc->add_option("--xi", cc_xi, "Candidate kernel vector as a JSON list of functions or strings");
  cc->add_option("--density", cc_density, "Density whose variational derivative should be xi");
  cc->callback([&] {
    Json rows = Json::array();
    bool ok = true;
    auto check = [&](Json row, const MatrixDiffOp& h, const VectorFunction& xi,
                     const std::optional<LocalFunctional>& h0) {
      const bool ker = kernel_verify(h, xi);
      row["kernel"] = ker;
      ok = ok && ker;
      if (h0) {
        const bool dens = variational_derivative(*h0, h.size()) == xi;
        row["density"] = dens;
        ok = ok && dens;
      }
      rows.push_back(row);
    };
    if (cc_op.empty()) {
      for (int e = 0; e < 2; ++e)
        for (int a = 0; a < 2; ++a) {
          const HierarchySeed s = seed(e, a);
          check({{"epsilon", e}, {"alpha", a}}, builtin_pair()[e], s.xi0, s.h0);
        }
    } else {
      if (cc_xi.empty()) throw Error(ErrorCode::InvalidArgument, "--op needs --xi");
      const MatrixDiffOp h = read_matrix(cc_op);
      const Json j = parse_json(slurp(cc_xi));
      if (!j.is_array()) throw Error(ErrorCode::SyntaxError, "--xi must be a JSON list");
      VectorFunction xi;
      for (const auto& c : j) xi.push_back(c.is_string() ? parse_function(c.get<std::string>()) : function_from_json(c));
      std::optional<LocalFunctional> h0;
      if (!cc_density.empty()) h0 = LocalFunctional{read_function(cc_density)};
      check(Json::object(), h, xi, h0);
    }
    out.json({{"results", rows}, {"ok", ok}});
    code = ok ? kOk : kVerifyFailed;
  });

  // hierarchy
  auto* hy = app.add_subcommand("hierarchy", "Run the Lenard-Magri recursion from a seed");
  int hy_eps = 1, hy_alpha = 0, hy_steps = 1;
  std::string hy_method = "components";
  hy->add_option("--eps", hy_eps, "epsilon")->required()->check(CLI::Range(0, 1));
  hy->add_option("--alpha", hy_alpha, "alpha")->required()->check(CLI::Range(0, 1));
  hy->add_option("--steps", hy_steps, "Number of recursion steps")->required()->check(CLI::NonNegativeNumber);
  hy->add_option("--method", hy_method, "components or ansatz")
      ->check(CLI::IsMember({"components", "ansatz"}));
  std::optional<int> hy_bound;
  hy->add_option("--order-bound", hy_bound, "Initial ansatz order bound (ansatz method)")
      ->check(CLI::Range(0, 256));
  hy->callback([&] {
    StepOptions opts;
    opts.method = hy_method == "ansatz" ? StepMethod::Ansatz : StepMethod::Components;
    opts.order_bound = hy_bound;
    opts.widen_cap = widen_cap_from_env(opts.widen_cap);
    const HierarchyRun run = run_hierarchy(hy_eps, hy_alpha, hy_steps, opts);
    if (out.latex) out.write(to_latex(run));
    else out.json(to_json(run));
  });

  // bracket
  auto* br = app.add_subcommand("bracket", "Poisson bracket {F, G} of two local functionals");
  std::string br_f, br_g, br_op, br_builtin = "h0";
  br->add_option("f", br_f, "First density")->required();
  br->add_option("g", br_g, "Second density")->required();
  auto* br_b = br->add_option("--builtin", br_builtin, "h0 or h1 (default h0)");
  br->add_option("--op", br_op, "Structure (JSON or @file)")->excludes(br_b);
  br->callback([&] {
    const MatrixDiffOp h = br_op.empty() ? builtin(br_builtin) : read_matrix(br_op);
    const LocalFunctional b = canonical(poisson_bracket({read_function(br_f)}, {read_function(br_g)}, h));
    if (out.latex) out.write("\\int \\left(" + to_latex(b.density) + "\\right)");
    else out.json({{"density", to_json(b.density)}, {"text", to_text(b.density)},
                   {"zero", functional_is_zero(b, h.size())}});
  });

  // flow
  auto* fl = app.add_subcommand("flow", "Hamiltonian flow H(d) delta F");
  std::string fl_f, fl_op, fl_builtin = "h0";
  fl->add_option("f", fl_f, "Density")->required();
  auto* fl_b = fl->add_option("--builtin", fl_builtin, "h0 or h1 (default h0)");
  fl->add_option("--op", fl_op, "Structure (JSON or @file)")->excludes(fl_b);
  fl->callback([&] {
    const MatrixDiffOp h = fl_op.empty() ? builtin(fl_builtin) : read_matrix(fl_op);
    const VectorFunction p = hamiltonian_flow(h, {read_function(fl_f)});
    if (out.latex) out.write(vector_latex(p));
    else out.json(vector_json(p));
  });

  // reduce
  auto* rd = app.add_subcommand("reduce", "Canonical representative modulo total derivatives");
  std::string rd_f;
  rd->add_option("f", rd_f, "Density")->required();
  rd->callback([&] {
    const Reduction r = reduce_by_parts(read_function(rd_f));
    if (out.latex) {
      out.write("\\int \\left(" + to_latex(r.remainder) + "\\right)");
      return;
    }
    out.json({{"zero", r.remainder.is_zero()},
              {"remainder", to_json(r.remainder)},
              {"remainder_text", to_text(r.remainder)},
              {"primitive", to_json(r.primitive)},
              {"primitive_text", to_text(r.primitive)}});
  });

  // varder
  auto* vd = app.add_subcommand("varder", "Variational derivative of a density");
  std::string vd_f;
  int vd_vars = 2;
  vd->add_option("f", vd_f, "Density")->required();
  vd->add_option("--vars", vd_vars, "Number of variables")->check(CLI::Range(1, kMaxVars));
  vd->callback([&] {
    const VectorFunction d = variational_derivative({read_function(vd_f)}, vd_vars);
    if (out.latex) out.write(vector_latex(d));
    else out.json(vector_json(d));
  });

  // frechet
  auto* fr = app.add_subcommand("frechet", "Frechet derivative of a vector of functions");
  std::vector<std::string> fr_p;
  fr->add_option("components", fr_p, "Components P_1 ... P_n")->required();
  fr->callback([&] {
    VectorFunction p;
    for (const auto& s : fr_p) p.push_back(read_function(s));
    const MatrixDiffOp d = frechet(p);
    if (out.latex) {
      out.write(matrix_latex(d));
      return;
    }
    Json texts = Json::array();
    for (int i = 0; i < d.size(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < d.size(); ++j) row.push_back(to_text(d.at(i, j)));
      texts.push_back(row);
    }
    out.json({{"value", to_json(d)}, {"text", texts}, {"closed", is_closed(p).is_closed}});
  });

  // fmt
  auto* fm = app.add_subcommand("fmt", "Parse and print in canonical form");
  std::string fm_f;
  bool fm_operator = false;
  fm->add_option("f", fm_f, "Expression, or JSON")->required();
  fm->add_flag("--operator", fm_operator, "Read a scalar operator in the symbol d");
  fm->callback([&] {
    if (fm_operator) {
      const std::string s = slurp(fm_f);
      const ScalarDiffOp op = looks_like_json(s) ? operator_from_json(parse_json(s)) : parse_operator(s);
      if (out.latex) out.write(to_latex(op));
      else out.json({{"value", to_json(op)}, {"text", to_text(op)}});
      return;
    }
    const DiffFunction f = read_function(fm_f);
    if (out.latex) out.write(to_latex(f));
    else out.json({{"value", to_json(f)}, {"text", to_text(f)}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::NoSolution ? kNoSolution : kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::logic_error& e) {
    // failed runtime re-verification inside the engine
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}
