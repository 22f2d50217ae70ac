#include "lenard/parse.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <string>

namespace lenard {

namespace {

// Both value types used by the grammar: functions, and operators whose
// products compose.
struct FunctionOps {
  using Value = DiffFunction;
  static Value lift(const DiffFunction& f) { return f; }
  static Value product(const Value& a, const Value& b) { return a * b; }
  static std::size_t term_count(const Value& v) { return v.size(); }
  static bool is_function(const Value&) { return true; }
  static const DiffFunction& as_function(const Value& v) { return v; }
};

struct OperatorOps {
  using Value = ScalarDiffOp;
  static Value lift(const DiffFunction& f) { return ScalarDiffOp::mul(f); }
  static Value product(const Value& a, const Value& b) { return compose(a, b); }
  static std::size_t term_count(const Value& v) {
    std::size_t n = 0;
    for (const auto& c : v.coeffs()) n += c.size();
    return n;
  }
  static bool is_function(const Value& v) { return v.degree() <= 0; }
  static DiffFunction as_function(const Value& v) { return v.coeff(0); }
};

class Lexer {
public:
  explicit Lexer(std::string_view s) : s_(s) {}

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }
  bool at_end() {
    skip_space();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  // No whitespace skipping: used inside variable names.
  char raw_peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool accept(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }
  bool accept_word(std::string_view w) {
    skip_space();
    if (s_.substr(pos_, w.size()) != w) return false;
    for (std::size_t i = 0; i < w.size(); ++i) advance();
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  long read_nat() {
    skip_space();
    if (!std::isdigit(static_cast<unsigned char>(raw_peek()))) fail("expected a number");
    long n = 0;
    while (std::isdigit(static_cast<unsigned char>(raw_peek()))) {
      if (n > (LONG_MAX - 9) / 10) fail("number too large");
      n = n * 10 + (raw_peek() - '0');
      advance();
    }
    return n;
  }
  std::string read_digits() {
    skip_space();
    std::string d;
    while (std::isdigit(static_cast<unsigned char>(raw_peek()))) {
      d.push_back(raw_peek());
      advance();
    }
    return d;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_) + ", column " +
                                            std::to_string(col_) + ": " + what);
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

template <class Ops>
class Parser {
  using Value = typename Ops::Value;

public:
  explicit Parser(std::string_view s) : lex_(s) {}

  Value parse_all() {
    Value v = expr();
    if (!lex_.at_end()) lex_.fail(std::string("unexpected '") + lex_.peek() + "'");
    return v;
  }

private:
  static constexpr int kMaxDepth = 200;
  static constexpr int kMaxExpandedPower = 32;
  // Bound on the term count of an expanded product.
  static constexpr std::size_t kMaxTerms = 100000;

  Value checked_product(const Value& a, const Value& b) {
    const std::size_t na = std::max<std::size_t>(Ops::term_count(a), 1);
    const std::size_t nb = std::max<std::size_t>(Ops::term_count(b), 1);
    if (na > kMaxTerms / nb) lex_.fail("expression too large to expand");
    return Ops::product(a, b);
  }

  static bool is_single_term(const Value& v) {
    if constexpr (std::is_same_v<Value, DiffFunction>) {
      return v.size() <= 1;
    } else {
      return v.degree() <= 0 && v.coeff(0).size() <= 1;
    }
  }

  Value expr() {
    Depth guard(*this);
    bool neg = false;
    if (lex_.accept('-')) neg = true;
    else lex_.accept('+');
    Value acc = term();
    if (neg) acc = Rational(-1) * acc;
    while (true) {
      if (lex_.accept('+')) acc = acc + term();
      else if (lex_.accept('-')) acc = acc - term();
      else return acc;
    }
  }

  Value term() {
    Value acc = factor();
    while (true) {
      if (lex_.accept('*')) {
        acc = checked_product(acc, factor());
      } else if (lex_.accept('/')) {
        Value d = factor();
        if (!Ops::is_function(d)) lex_.fail("division by an operator");
        acc = Ops::product(acc, Ops::lift(invert(Ops::as_function(d))));
      } else {
        return acc;
      }
    }
  }

  Value factor() {
    Depth guard(*this);
    // unary minus inside products, e.g. 2*-u
    if (lex_.accept('-')) return Rational(-1) * factor();
    Value base = atom();
    if (!lex_.accept('^')) return base;
    return power(base, read_exponent());
  }

  // int or (int), after the caret.
  int read_exponent() {
    bool paren = lex_.accept('(');
    bool neg = lex_.accept('-');
    long e = lex_.read_nat();
    if (paren) lex_.expect(')');
    if (e > 4096) lex_.fail("exponent too large");
    return neg ? -static_cast<int>(e) : static_cast<int>(e);
  }

  Value power(const Value& base, int e) {
    if (e > kMaxExpandedPower && !is_single_term(base)) {
      lex_.fail("power of a sum too large to expand");
    }
    if constexpr (std::is_same_v<Value, DiffFunction>) {
      if (e < 0) return invert(base).pow(-e);
      if (is_single_term(base)) return base.pow(e);
      Value acc = DiffFunction(1);
      for (int i = 0; i < e; ++i) acc = checked_product(acc, base);
      return acc;
    } else {
      if (e < 0) {
        if (!Ops::is_function(base)) throw Error(ErrorCode::ExponentError, "negative power of d");
        return Ops::lift(invert(Ops::as_function(base)).pow(-e));
      }
      Value acc = ScalarDiffOp::mul(DiffFunction(1));
      for (int i = 0; i < e; ++i) acc = checked_product(acc, base);
      return acc;
    }
  }

  // Inverse of c * v^k; anything else is not invertible in the algebra.
  static DiffFunction invert(const DiffFunction& f) {
    if (f.size() == 1) {
      const Term& t = f.terms().front();
      const Monomial v0 = Monomial::of(Generator::jet(kLaurentVar, 0), t.mono.laurent_exponent());
      if (t.mono == v0 || t.mono.is_one()) {
        return DiffFunction(Monomial::of(Generator::jet(kLaurentVar, 0), -t.mono.laurent_exponent()),
                            1 / t.coeff);
      }
    }
    if (f.is_zero()) throw Error(ErrorCode::ExponentError, "division by zero");
    throw Error(ErrorCode::ExponentError, "only constants and powers of v can be inverted");
  }

  Value atom() {
    const char c = lex_.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Ops::lift(DiffFunction(Rational(mpz_class(lex_.read_digits()))));
    }
    if (lex_.accept('(')) {
      Value v = expr();
      lex_.expect(')');
      return v;
    }
    if (lex_.accept_word("log")) {
      lex_.expect('(');
      if (!lex_.accept('v')) lex_.fail("log is only defined for v");
      lex_.expect(')');
      return Ops::lift(DiffFunction::log_v());
    }
    if (lex_.accept_word("D")) {
      lex_.expect('(');
      Value v = expr();
      lex_.expect(')');
      if (!Ops::is_function(v)) lex_.fail("D() applies to functions");
      return Ops::lift(total_derivative(Ops::as_function(v)));
    }
    if (c == 'u' || c == 'v') {
      lex_.accept(c);
      const int var = c == 'u' ? kVarU : kVarV;
      int order = 0;
      while (lex_.raw_peek() == '\'') {
        lex_.advance();
        ++order;
      }
      // u^(n) is a jet; any other caret after a variable is a power.
      if (order == 0 && lex_.raw_peek() == '^') {
        lex_.advance();
        if (!lex_.accept('(')) return power(Ops::lift(DiffFunction::jet(var, 0)), read_exponent());
        if (lex_.accept('-')) {
          long e = lex_.read_nat();
          lex_.expect(')');
          if (e > 4096) lex_.fail("exponent too large");
          return power(Ops::lift(DiffFunction::jet(var, 0)), -static_cast<int>(e));
        }
        long n = lex_.read_nat();
        lex_.expect(')');
        if (n > kMaxOrder) lex_.fail("jet order too large");
        order = static_cast<int>(n);
      }
      return Ops::lift(DiffFunction::jet(var, order));
    }
    if constexpr (std::is_same_v<Value, ScalarDiffOp>) {
      if (lex_.accept('d')) return ScalarDiffOp::d(1);
    }
    if (lex_.at_end()) lex_.fail("unexpected end of input");
    lex_.fail(std::string("unexpected '") + c + "'");
  }

  struct Depth {
    explicit Depth(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) p_.lex_.fail("nesting too deep");
    }
    ~Depth() { --p_.depth_; }
    Parser& p_;
  };

  Lexer lex_;
  int depth_ = 0;
};

}  // namespace

DiffFunction parse_function(std::string_view src) { return Parser<FunctionOps>(src).parse_all(); }

ScalarDiffOp parse_operator(std::string_view src) { return Parser<OperatorOps>(src).parse_all(); }

}  // namespace lenard
