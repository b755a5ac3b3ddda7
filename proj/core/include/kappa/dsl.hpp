#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "kappa/calculus.hpp"
#include "kappa/errors.hpp"
#include "kappa/grid.hpp"
#include "kappa/hopf.hpp"
#include "kappa/rieffel.hpp"
#include "kappa/symbolic.hpp"

namespace kappa::dsl {

// Expression language over both engines. '*' always means the deformed
// product (word concatenation on words); pointwise multiplication does not
// exist. Statements are "name := expr" bindings or bare expressions.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*      '/' takes a scalar divisor
//   factor := ['-'] atom
//   atom   := number | '(' expr [',' expr] ')' | ident | name '(' args ')'
//   args   := [arg (',' arg)*],  arg := [ident '='] expr
//
// Builtin idents: t, x, one (exact coordinates and unit), wt, wx (words),
// i, kappa (scalars), bump1, bump2, gauss1 (grid presets). The operator
// names E, P, N, eps, epsinv, id are only meaningful as the first argument
// of act(...). Calls: adj, T, act, d, wedge, lmul, rmul, trace, gtrace,
// phi, comm, eval, jstar, eta, and the fixture makers bump, gauss,
// unit_approx with named parameters, e.g. bump(v0=1.0, w=0.5).

struct Expr {
  enum class Kind { Number, Pair, Ident, Call, Unary, Binary };

  Kind kind = Kind::Number;
  SourceLocation pos;
  double number = 0.0;
  std::string name;  // Ident and Call names, Unary/Binary operator text
  std::vector<Expr> args;
  std::vector<std::string> keywords;  // Call only; "" for positional args
};

// Parse a single expression; throws SyntaxError with source location.
Expr parse(const std::string& source);

// Canonical text form; parse(print(e)) reproduces e node for node.
std::string print(const Expr& e);
bool ast_equal(const Expr& lhs, const Expr& rhs);

using SymbolicForm = Form<SymbolicAlgebra>;
using NumericForm = Form<GridAlgebra>;

using Value = std::variant<Complex, Element, PolyWord, SpectralGrid,
                           SymbolicForm, NumericForm>;

// Human-readable rendering of a value (grids render as a summary line).
std::string describe(const Value& v);

class Session {
 public:
  struct Config {
    double kappa = 1.0;
    GridSpec spec;
    bool strict = false;
  };

  explicit Session(const Config& cfg);

  struct Outcome {
    std::string name;  // empty for bare expressions
    Value value;
  };

  // Run one statement: "name := expr" binds (collisions rejected), a bare
  // expression just evaluates. Throws SyntaxError / TypeError / UnknownName
  // with source locations, ConfigError for rebinding or bad parameters.
  Outcome run(const std::string& statement);

  // Evaluate an already parsed expression.
  Value evaluate(const Expr& e) const;

  const Config& config() const { return cfg_; }
  bool has(const std::string& name) const { return table_.count(name) != 0; }
  const Value& lookup(const std::string& name) const;

 private:
  Config cfg_;
  std::map<std::string, Value> table_;
};

}  // namespace kappa::dsl
