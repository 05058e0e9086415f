#pragma once

// Minimal arithmetic expression language for warp functions and custom metric
// entries: parser, evaluator, printer and exact symbolic differentiation.
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?          -- '^' right-associative
//   base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base
// Functions: sin cos exp log sqrt. Named constants: pi, e.
// Exponents of '^' must be constants (the tree invariant relied on by
// differentiate).

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "warpres/errors.hpp"

namespace warpres::expr {

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct Ast {
  enum class Kind { Constant, Variable, Neg, Sin, Cos, Exp, Log, Sqrt, Add, Sub, Mul, Div, Pow };

  Kind kind;
  double value = 0.0;   // Constant
  std::string name;     // Variable
  AstPtr a, b;          // children

  bool is_const(double v) const { return kind == Kind::Constant && value == v; }
};

inline AstPtr constant(double v) {
  auto n = std::make_shared<Ast>();
  n->kind = Ast::Kind::Constant;
  n->value = v;
  return n;
}

inline AstPtr variable(const std::string& name) {
  auto n = std::make_shared<Ast>();
  n->kind = Ast::Kind::Variable;
  n->name = name;
  return n;
}

inline AstPtr node(Ast::Kind k, AstPtr a, AstPtr b = nullptr) {
  auto n = std::make_shared<Ast>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

// Constructors with 0/1 folding, used by the parser and by differentiate.
inline AstPtr mk_neg(AstPtr u) {
  if (u->kind == Ast::Kind::Constant) return constant(-u->value);
  return node(Ast::Kind::Neg, std::move(u));
}
inline AstPtr mk_add(AstPtr u, AstPtr v) {
  if (u->is_const(0)) return v;
  if (v->is_const(0)) return u;
  if (u->kind == Ast::Kind::Constant && v->kind == Ast::Kind::Constant)
    return constant(u->value + v->value);
  return node(Ast::Kind::Add, std::move(u), std::move(v));
}
inline AstPtr mk_sub(AstPtr u, AstPtr v) {
  if (v->is_const(0)) return u;
  if (u->is_const(0)) return mk_neg(std::move(v));
  if (u->kind == Ast::Kind::Constant && v->kind == Ast::Kind::Constant)
    return constant(u->value - v->value);
  return node(Ast::Kind::Sub, std::move(u), std::move(v));
}
inline AstPtr mk_mul(AstPtr u, AstPtr v) {
  if (u->is_const(0) || v->is_const(0)) return constant(0);
  if (u->is_const(1)) return v;
  if (v->is_const(1)) return u;
  if (u->kind == Ast::Kind::Constant && v->kind == Ast::Kind::Constant)
    return constant(u->value * v->value);
  return node(Ast::Kind::Mul, std::move(u), std::move(v));
}
inline AstPtr mk_div(AstPtr u, AstPtr v) {
  if (u->is_const(0)) return constant(0);
  if (v->is_const(1)) return u;
  return node(Ast::Kind::Div, std::move(u), std::move(v));
}
inline AstPtr mk_pow(AstPtr u, AstPtr c) {
  if (c->kind != Ast::Kind::Constant)
    throw NonDifferentiable("'^' exponent must be a constant");
  if (c->is_const(0)) return constant(1);
  if (c->is_const(1)) return u;
  return node(Ast::Kind::Pow, std::move(u), std::move(c));
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  AstPtr parse() {
    skip_ws();
    if (eof()) throw ParseError("empty expression", 0);
    AstPtr e = expr();
    skip_ws();
    if (!eof()) throw ParseError("unexpected trailing input; expected operator or end", pos_);
    return e;
  }

 private:
  AstPtr expr() {
    AstPtr e = term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        e = mk_add(e, term());
      else if (accept('-'))
        e = mk_sub(e, term());
      else
        return e;
    }
  }

  AstPtr term() {
    AstPtr e = factor();
    for (;;) {
      skip_ws();
      if (accept('*'))
        e = mk_mul(e, factor());
      else if (accept('/'))
        e = mk_div(e, factor());
      else
        return e;
    }
  }

  AstPtr factor() {
    AstPtr b = base();
    skip_ws();
    if (accept('^')) {
      std::size_t at = pos_;
      AstPtr c = factor();  // right-associative
      if (c->kind != Ast::Kind::Constant)
        throw ParseError("exponent must be a constant", at);
      return mk_pow(b, c);
    }
    return b;
  }

  AstPtr base() {
    skip_ws();
    if (eof()) throw ParseError("expected number, name, '(' or '-'", pos_);
    char c = peek();
    if (c == '-') {
      ++pos_;
      return mk_neg(base());
    }
    if (c == '(') {
      ++pos_;
      AstPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    throw ParseError(std::string("unexpected character '") + c +
                         "'; expected number, name, '(' or '-'",
                     pos_);
  }

  AstPtr number() {
    std::size_t start = pos_;
    std::size_t consumed = 0;
    double v;
    try {
      v = std::stod(src_.substr(start), &consumed);
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    pos_ = start + consumed;
    return constant(v);
  }

  AstPtr ident() {
    std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    std::string name = src_.substr(start, pos_ - start);
    skip_ws();
    if (!eof() && peek() == '(') {
      ++pos_;
      AstPtr arg = expr();
      expect(')');
      Ast::Kind k;
      if (name == "sin")
        k = Ast::Kind::Sin;
      else if (name == "cos")
        k = Ast::Kind::Cos;
      else if (name == "exp")
        k = Ast::Kind::Exp;
      else if (name == "log")
        k = Ast::Kind::Log;
      else if (name == "sqrt")
        k = Ast::Kind::Sqrt;
      else if (name == "neg")
        return mk_neg(std::move(arg));
      else
        throw UnknownFunction("unknown function '" + name + "'");
      return node(k, std::move(arg));
    }
    if (name == "pi") return constant(M_PI);
    if (name == "e") return constant(M_E);
    return variable(name);
  }

  bool eof() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool accept(char c) {
    if (!eof() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline AstPtr parse(const std::string& src) { return detail::Parser(src).parse(); }

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

using Env = std::map<std::string, double>;

inline double eval(const AstPtr& a, const Env& env) {
  double r;
  switch (a->kind) {
    case Ast::Kind::Constant:
      r = a->value;
      break;
    case Ast::Kind::Variable: {
      auto it = env.find(a->name);
      if (it == env.end()) throw UnboundVariable("unbound variable '" + a->name + "'");
      r = it->second;
      break;
    }
    case Ast::Kind::Neg:
      r = -eval(a->a, env);
      break;
    case Ast::Kind::Sin:
      r = std::sin(eval(a->a, env));
      break;
    case Ast::Kind::Cos:
      r = std::cos(eval(a->a, env));
      break;
    case Ast::Kind::Exp:
      r = std::exp(eval(a->a, env));
      break;
    case Ast::Kind::Log: {
      double u = eval(a->a, env);
      if (u <= 0) throw DomainError("log of non-positive value");
      r = std::log(u);
      break;
    }
    case Ast::Kind::Sqrt: {
      double u = eval(a->a, env);
      if (u < 0) throw DomainError("sqrt of negative value");
      r = std::sqrt(u);
      break;
    }
    case Ast::Kind::Add:
      r = eval(a->a, env) + eval(a->b, env);
      break;
    case Ast::Kind::Sub:
      r = eval(a->a, env) - eval(a->b, env);
      break;
    case Ast::Kind::Mul:
      r = eval(a->a, env) * eval(a->b, env);
      break;
    case Ast::Kind::Div: {
      double v = eval(a->b, env);
      if (v == 0) throw DomainError("division by zero");
      r = eval(a->a, env) / v;
      break;
    }
    case Ast::Kind::Pow:
      r = std::pow(eval(a->a, env), a->b->value);
      break;
    default:
      throw Error("corrupt expression tree");
  }
  if (!std::isfinite(r)) throw DomainError("non-finite value in expression evaluation");
  return r;
}

// ---------------------------------------------------------------------------
// Symbolic differentiation (exact, with 0/1 folding)
// ---------------------------------------------------------------------------

inline AstPtr differentiate(const AstPtr& a, const std::string& var) {
  switch (a->kind) {
    case Ast::Kind::Constant:
      return constant(0);
    case Ast::Kind::Variable:
      return constant(a->name == var ? 1 : 0);
    case Ast::Kind::Neg:
      return mk_neg(differentiate(a->a, var));
    case Ast::Kind::Sin:
      return mk_mul(node(Ast::Kind::Cos, a->a), differentiate(a->a, var));
    case Ast::Kind::Cos:
      return mk_mul(mk_neg(node(Ast::Kind::Sin, a->a)), differentiate(a->a, var));
    case Ast::Kind::Exp:
      return mk_mul(node(Ast::Kind::Exp, a->a), differentiate(a->a, var));
    case Ast::Kind::Log:
      return mk_div(differentiate(a->a, var), a->a);
    case Ast::Kind::Sqrt:
      return mk_div(differentiate(a->a, var), mk_mul(constant(2), node(Ast::Kind::Sqrt, a->a)));
    case Ast::Kind::Add:
      return mk_add(differentiate(a->a, var), differentiate(a->b, var));
    case Ast::Kind::Sub:
      return mk_sub(differentiate(a->a, var), differentiate(a->b, var));
    case Ast::Kind::Mul:
      return mk_add(mk_mul(differentiate(a->a, var), a->b),
                    mk_mul(a->a, differentiate(a->b, var)));
    case Ast::Kind::Div:
      return mk_div(mk_sub(mk_mul(differentiate(a->a, var), a->b),
                           mk_mul(a->a, differentiate(a->b, var))),
                    mk_pow(a->b, constant(2)));
    case Ast::Kind::Pow: {
      double c = a->b->value;
      return mk_mul(mk_mul(constant(c), mk_pow(a->a, constant(c - 1))),
                    differentiate(a->a, var));
    }
    default:
      throw NonDifferentiable("corrupt expression tree");
  }
}

// Serializes an Ast back to parseable text (fully parenthesized).
inline std::string print(const AstPtr& a) {
  switch (a->kind) {
    case Ast::Kind::Constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", a->value);
      std::string s = buf;
      return a->value < 0 ? "(" + s + ")" : s;
    }
    case Ast::Kind::Variable:
      return a->name;
    case Ast::Kind::Neg:
      return "(-" + print(a->a) + ")";
    case Ast::Kind::Sin:
      return "sin(" + print(a->a) + ")";
    case Ast::Kind::Cos:
      return "cos(" + print(a->a) + ")";
    case Ast::Kind::Exp:
      return "exp(" + print(a->a) + ")";
    case Ast::Kind::Log:
      return "log(" + print(a->a) + ")";
    case Ast::Kind::Sqrt:
      return "sqrt(" + print(a->a) + ")";
    case Ast::Kind::Add:
      return "(" + print(a->a) + " + " + print(a->b) + ")";
    case Ast::Kind::Sub:
      return "(" + print(a->a) + " - " + print(a->b) + ")";
    case Ast::Kind::Mul:
      return "(" + print(a->a) + " * " + print(a->b) + ")";
    case Ast::Kind::Div:
      return "(" + print(a->a) + " / " + print(a->b) + ")";
    case Ast::Kind::Pow:
      return "(" + print(a->a) + ")^" + print(a->b);
    default:
      return "?";
  }
}

// Raises UnboundVariable if the tree references a name outside `declared`.
inline void check_vars(const AstPtr& a, const std::map<std::string, double>& declared) {
  switch (a->kind) {
    case Ast::Kind::Variable:
      if (!declared.count(a->name))
        throw UnboundVariable("unknown variable '" + a->name + "'");
      return;
    case Ast::Kind::Constant:
      return;
    default:
      if (a->a) check_vars(a->a, declared);
      if (a->b) check_vars(a->b, declared);
  }
}

}  // namespace warpres::expr
