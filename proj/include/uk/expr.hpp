#pragma once

// Operator expression language.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := ['-'] atom
//   atom   := number | 'i' | ident | ident '(' expr ',' expr ')'
//           | ident '(' expr ')' | '(' expr ')'
//
// Call forms: comm(a,b) = ab - ba, acomm(a,b) = ab + ba, dag(a) = a†.
// `i` is the imaginary unit and cannot name an operator. Products must be
// written with '*'. A scalar added to an operator stands for c·I.

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "uk/linalg.hpp"

namespace uk::expr {

enum class TokenKind {
  Identifier,
  Number,
  ImaginaryUnit,
  Plus,
  Minus,
  Star,
  LParen,
  RParen,
  Comma,
  End,
};

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;

  bool operator==(const Token&) const = default;
};

/// Always ends with an End token positioned at input.size().
std::vector<Token> tokenize(std::string_view input);

enum class NodeKind { OperatorRef, ScalarLit, Neg, Add, Sub, Mul, Comm, Acomm, Dag };

struct Expr {
  NodeKind kind;
  std::string name;            // OperatorRef
  std::complex<double> value;  // ScalarLit
  std::vector<Expr> args;

  bool operator==(const Expr&) const = default;

  static Expr ref(std::string name);
  static Expr scalar(std::complex<double> value);
  static Expr unary(NodeKind kind, Expr arg);
  static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
};

Expr parse(const std::vector<Token>& tokens);
Expr parse(std::string_view input);

/// Source text that parses back to the same tree. Scalar literals must be a
/// nonnegative real or exactly i; anything else throws std::invalid_argument.
std::string to_string(const Expr& e);

/// Named operators sharing one dimension. The default environment holds the
/// 2×2 set id, sx, sy, sz.
class OperatorEnv {
 public:
  OperatorEnv();
  explicit OperatorEnv(Index dim);

  void define(const std::string& name, ComplexMatrix op);
  const ComplexMatrix* find(std::string_view name) const;
  Index dim() const { return dim_; }

 private:
  Index dim_;
  std::map<std::string, ComplexMatrix, std::less<>> ops_;
};

/// Throws UnknownName for unresolved names and DimensionMismatch for
/// inconsistent shapes. A purely scalar expression evaluates to c·I.
ComplexMatrix evaluate(const Expr& e, const OperatorEnv& env);

/// tokenize + parse + evaluate against the default environment.
ComplexMatrix evaluate(std::string_view input);

}  // namespace uk::expr
