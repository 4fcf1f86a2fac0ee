#include "uk/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>
#include <variant>

#include "uk/pauli.hpp"

namespace uk::expr {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Length of the longest numeric literal at the start of s: digits, optional
// fraction, optional exponent. Zero if none.
std::size_t number_length(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && is_digit(s[n])) ++n;
  if (n < s.size() && s[n] == '.') {
    std::size_t m = n + 1;
    while (m < s.size() && is_digit(s[m])) ++m;
    if (n == 0 && m == 1) return 0;  // lone '.'
    n = m;
  }
  if (n == 0) return 0;
  if (n < s.size() && (s[n] == 'e' || s[n] == 'E')) {
    std::size_t m = n + 1;
    if (m < s.size() && (s[m] == '+' || s[m] == '-')) ++m;
    if (m < s.size() && is_digit(s[m])) {
      while (m < s.size() && is_digit(s[m])) ++m;
      n = m;
    }
  }
  return n;
}

bool is_call(std::string_view name) { return name == "comm" || name == "acomm" || name == "dag"; }

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {
    if (tokens_.empty() || tokens_.back().kind != TokenKind::End)
      throw std::invalid_argument("parse: token stream must end with End");
  }

  Expr parse_all() {
    Expr e = parse_expr();
    if (peek().kind != TokenKind::End) fail("unexpected token '" + peek().lexeme + "'");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& what) const { fail_at(what, peek().position); }
  [[noreturn]] static void fail_at(const std::string& what, std::size_t position) {
    throw ParseError(what, position);
  }

  void expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) {
      fail(std::string("expected ") + what + ", found " +
           (peek().kind == TokenKind::End ? std::string("end of input")
                                          : "'" + peek().lexeme + "'"));
    }
    advance();
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
      const NodeKind kind = advance().kind == TokenKind::Plus ? NodeKind::Add : NodeKind::Sub;
      lhs = Expr::binary(kind, std::move(lhs), parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    while (peek().kind == TokenKind::Star) {
      advance();
      lhs = Expr::binary(NodeKind::Mul, std::move(lhs), parse_factor());
    }
    return lhs;
  }

  Expr parse_factor() {
    if (peek().kind == TokenKind::Minus) {
      advance();
      return Expr::unary(NodeKind::Neg, parse_atom());
    }
    return parse_atom();
  }

  Expr parse_atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::Number: {
        advance();
        double value = 0;
        const auto res = std::from_chars(tok.lexeme.data(), tok.lexeme.data() + tok.lexeme.size(),
                                         value);
        if (res.ec != std::errc() || !std::isfinite(value))
          fail_at("invalid number '" + tok.lexeme + "'", tok.position);
        return Expr::scalar(value);
      }
      case TokenKind::ImaginaryUnit:
        advance();
        return Expr::scalar({0.0, 1.0});
      case TokenKind::LParen: {
        advance();
        Expr inner = parse_expr();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      case TokenKind::Identifier:
        return parse_identifier();
      default:
        fail(tok.kind == TokenKind::End ? "unexpected end of input"
                                        : "unexpected token '" + tok.lexeme + "'");
    }
  }

  Expr parse_identifier() {
    const Token& name = advance();
    if (peek().kind != TokenKind::LParen) {
      if (is_call(name.lexeme)) fail_at("'" + name.lexeme + "' must be called", name.position);
      return Expr::ref(name.lexeme);
    }
    if (!is_call(name.lexeme)) fail_at("unknown function '" + name.lexeme + "'", name.position);
    advance();
    std::vector<Expr> args{parse_expr()};
    while (peek().kind == TokenKind::Comma) {
      advance();
      args.push_back(parse_expr());
    }
    expect(TokenKind::RParen, "')'");

    const std::size_t arity = name.lexeme == "dag" ? 1 : 2;
    if (args.size() != arity) {
      fail_at("'" + name.lexeme + "' takes " + std::to_string(arity) + " argument(s), got " +
                  std::to_string(args.size()),
              name.position);
    }
    if (name.lexeme == "dag") return Expr::unary(NodeKind::Dag, std::move(args[0]));
    const NodeKind kind = name.lexeme == "comm" ? NodeKind::Comm : NodeKind::Acomm;
    return Expr::binary(kind, std::move(args[0]), std::move(args[1]));
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

enum class Prec { Sum, Product, Atom };

Prec precedence(const Expr& e) {
  switch (e.kind) {
    case NodeKind::Add:
    case NodeKind::Sub:
      return Prec::Sum;
    case NodeKind::Mul:
    case NodeKind::Neg:
      return Prec::Product;
    default:
      return Prec::Atom;
  }
}

std::string print_scalar(std::complex<double> v) {
  if (v == std::complex<double>(0.0, 1.0)) return "i";
  if (v.imag() != 0.0 || std::signbit(v.real()) || !std::isfinite(v.real()))
    throw std::invalid_argument("to_string: scalar literal must be a nonnegative real or i");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v.real());
  return std::string(buf, res.ptr);
}

std::string print(const Expr& e);

std::string wrap_if(const Expr& e, bool parens) {
  return parens ? "(" + print(e) + ")" : print(e);
}

std::string print(const Expr& e) {
  switch (e.kind) {
    case NodeKind::OperatorRef:
      return e.name;
    case NodeKind::ScalarLit:
      return print_scalar(e.value);
    case NodeKind::Neg:
      return "-" + wrap_if(e.args[0], precedence(e.args[0]) != Prec::Atom);
    case NodeKind::Add:
    case NodeKind::Sub:
      return print(e.args[0]) + (e.kind == NodeKind::Add ? " + " : " - ") +
             wrap_if(e.args[1], precedence(e.args[1]) == Prec::Sum);
    case NodeKind::Mul:
      return wrap_if(e.args[0], precedence(e.args[0]) == Prec::Sum) + "*" +
             wrap_if(e.args[1], precedence(e.args[1]) == Prec::Sum ||
                                    e.args[1].kind == NodeKind::Mul);
    case NodeKind::Comm:
    case NodeKind::Acomm:
      return std::string(e.kind == NodeKind::Comm ? "comm(" : "acomm(") + print(e.args[0]) +
             ", " + print(e.args[1]) + ")";
    case NodeKind::Dag:
      return "dag(" + print(e.args[0]) + ")";
  }
  throw std::logic_error("to_string: bad node kind");
}

// Scalars stay scalars until they meet an operator.
using Value = std::variant<ComplexScalar, ComplexMatrix>;

ComplexMatrix as_operator(const Value& v, Index dim) {
  if (const auto* m = std::get_if<ComplexMatrix>(&v)) return *m;
  return std::get<ComplexScalar>(v) * ComplexMatrix::Identity(dim, dim);
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  detail::require_same_dim(a.rows(), b.rows(), what);
  detail::require_same_dim(a.cols(), b.cols(), what);
}

Value eval(const Expr& e, const OperatorEnv& env) {
  switch (e.kind) {
    case NodeKind::OperatorRef: {
      const ComplexMatrix* op = env.find(e.name);
      if (!op) throw UnknownName("unknown operator '" + e.name + "'");
      return *op;
    }
    case NodeKind::ScalarLit:
      return e.value;
    case NodeKind::Neg:
      return std::visit([](const auto& x) -> Value { return Value(-x); }, eval(e.args[0], env));
    case NodeKind::Dag: {
      const Value x = eval(e.args[0], env);
      if (const auto* c = std::get_if<ComplexScalar>(&x)) return std::conj(*c);
      return ComplexMatrix(std::get<ComplexMatrix>(x).adjoint());
    }
    case NodeKind::Mul: {
      const Value l = eval(e.args[0], env);
      const Value r = eval(e.args[1], env);
      const auto* ls = std::get_if<ComplexScalar>(&l);
      const auto* rs = std::get_if<ComplexScalar>(&r);
      if (ls && rs) return *ls * *rs;
      if (ls) return ComplexMatrix(*ls * std::get<ComplexMatrix>(r));
      if (rs) return ComplexMatrix(std::get<ComplexMatrix>(l) * *rs);
      const auto& lm = std::get<ComplexMatrix>(l);
      const auto& rm = std::get<ComplexMatrix>(r);
      detail::require_same_dim(lm.cols(), rm.rows(), "product");
      return ComplexMatrix(lm * rm);
    }
    case NodeKind::Add:
    case NodeKind::Sub: {
      const Value l = eval(e.args[0], env);
      const Value r = eval(e.args[1], env);
      const double sign = e.kind == NodeKind::Add ? 1.0 : -1.0;
      const auto* ls = std::get_if<ComplexScalar>(&l);
      const auto* rs = std::get_if<ComplexScalar>(&r);
      if (ls && rs) return *ls + sign * *rs;
      const Index dim = ls ? std::get<ComplexMatrix>(r).rows() : std::get<ComplexMatrix>(l).rows();
      const ComplexMatrix lm = as_operator(l, dim);
      const ComplexMatrix rm = as_operator(r, dim);
      require_same_shape(lm, rm, "sum");
      return ComplexMatrix(lm + sign * rm);
    }
    case NodeKind::Comm:
    case NodeKind::Acomm: {
      const Value l = eval(e.args[0], env);
      const Value r = eval(e.args[1], env);
      const auto* ls = std::get_if<ComplexScalar>(&l);
      const auto* rs = std::get_if<ComplexScalar>(&r);
      if (ls && rs) return e.kind == NodeKind::Comm ? ComplexScalar(0) : 2.0 * *ls * *rs;
      const Index dim = ls ? std::get<ComplexMatrix>(r).rows() : std::get<ComplexMatrix>(l).rows();
      const ComplexMatrix lm = as_operator(l, dim);
      const ComplexMatrix rm = as_operator(r, dim);
      return e.kind == NodeKind::Comm ? commutator(lm, rm) : anticommutator(lm, rm);
    }
  }
  throw std::logic_error("evaluate: bad node kind");
}

}  // namespace

std::vector<Token> tokenize(std::string_view input) {
  std::vector<Token> out;
  std::size_t pos = 0;
  while (pos < input.size()) {
    const char c = input[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    if (const std::size_t n = number_length(input.substr(pos)); n > 0) {
      out.push_back({TokenKind::Number, std::string(input.substr(pos, n)), pos});
      pos += n;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t end = pos + 1;
      while (end < input.size() && is_ident_char(input[end])) ++end;
      std::string lexeme(input.substr(pos, end - pos));
      const TokenKind kind = lexeme == "i" ? TokenKind::ImaginaryUnit : TokenKind::Identifier;
      out.push_back({kind, std::move(lexeme), pos});
      pos = end;
      continue;
    }
    TokenKind kind;
    switch (c) {
      case '+': kind = TokenKind::Plus; break;
      case '-': kind = TokenKind::Minus; break;
      case '*': kind = TokenKind::Star; break;
      case '(': kind = TokenKind::LParen; break;
      case ')': kind = TokenKind::RParen; break;
      case ',': kind = TokenKind::Comma; break;
      default:
        throw ParseError(std::string("illegal character '") + c + "'", pos);
    }
    out.push_back({kind, std::string(1, c), pos});
    ++pos;
  }
  out.push_back({TokenKind::End, "", input.size()});
  return out;
}

Expr Expr::ref(std::string name) { return {NodeKind::OperatorRef, std::move(name), {}, {}}; }

Expr Expr::scalar(std::complex<double> value) { return {NodeKind::ScalarLit, {}, value, {}}; }

Expr Expr::unary(NodeKind kind, Expr arg) {
  Expr e{kind, {}, {}, {}};
  e.args.push_back(std::move(arg));
  return e;
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
  Expr e{kind, {}, {}, {}};
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr parse(const std::vector<Token>& tokens) { return Parser(tokens).parse_all(); }

Expr parse(std::string_view input) { return parse(tokenize(input)); }

std::string to_string(const Expr& e) { return print(e); }

OperatorEnv::OperatorEnv() : dim_(2) {
  ops_.emplace("id", ComplexMatrix::Identity(2, 2));
  ops_.emplace("sx", pauli_x());
  ops_.emplace("sy", pauli_y());
  ops_.emplace("sz", pauli_z());
}

OperatorEnv::OperatorEnv(Index dim) : dim_(dim) {
  if (dim <= 0) throw DimensionMismatch("operator environment: dimension must be positive");
}

void OperatorEnv::define(const std::string& name, ComplexMatrix op) {
  const std::vector<Token> toks = tokenize(name);
  if (toks.size() != 2 || toks[0].kind != TokenKind::Identifier || is_call(name))
    throw InputError("operator environment: '" + name + "' is not a usable operator name");
  detail::require_same_dim(op.rows(), dim_, "operator environment");
  detail::require_same_dim(op.cols(), dim_, "operator environment");
  detail::require_finite(op, "operator environment");
  ops_.insert_or_assign(name, std::move(op));
}

const ComplexMatrix* OperatorEnv::find(std::string_view name) const {
  const auto it = ops_.find(name);
  return it == ops_.end() ? nullptr : &it->second;
}

ComplexMatrix evaluate(const Expr& e, const OperatorEnv& env) {
  return as_operator(eval(e, env), env.dim());
}

ComplexMatrix evaluate(std::string_view input) { return evaluate(parse(input), OperatorEnv()); }

}  // namespace uk::expr
