#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kappa/symbolic.hpp"

namespace kappa {

// Complex combination of ordered words in the coordinate letters 't','x'.
// Words represent products in the abstract coordinate algebra before any
// normal ordering; the empty word is the unit.
class PolyWord {
 public:
  struct WordTerm {
    std::string word;  // over the alphabet {'t','x'}
    Complex coeff{0.0, 0.0};
  };

  PolyWord() = default;
  explicit PolyWord(std::vector<WordTerm> terms);

  static PolyWord zero();
  static PolyWord unit();
  static PolyWord letter_t();
  static PolyWord letter_x();
  static PolyWord monomial(const std::string& word,
                           Complex c = Complex{1.0, 0.0});

  const std::vector<WordTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero(double tol = kCoeffDropEps) const;

  PolyWord& operator+=(const PolyWord& rhs);
  PolyWord& operator-=(const PolyWord& rhs);
  PolyWord& operator*=(Complex scale);

 private:
  void canonicalize();
  std::vector<WordTerm> terms_;
};

PolyWord operator+(PolyWord lhs, const PolyWord& rhs);
PolyWord operator-(PolyWord lhs, const PolyWord& rhs);
PolyWord operator*(Complex scale, PolyWord w);
PolyWord operator*(double scale, PolyWord w);

// Bilinear concatenation (the product of the abstract coordinate algebra).
PolyWord concat(const PolyWord& lhs, const PolyWord& rhs);

double word_distance(const PolyWord& f, const PolyWord& g);
std::string to_string(const PolyWord& w);

// Normal-ordered symbol of a word: the iterated deformed product of the
// coordinate elements, left to right.
Element word_eval(const PolyWord& w, double kappa);

// Symmetry generators. E and P are the two momenta (E classical, P twisted
// by the grading automorphism eps = T_{1/kappa}), N is the boost. eps is
// group-like; its inverse is epsinv. Id is the identity, handy for writing
// relations like id - eps^2 as one expression.
enum class Gen { E, P, Eps, EpsInv, N, Id };

// Operator expressions: generators combined by scaling, sums and
// composition. Built programmatically or parsed from a compact prefix
// string such as "compose(epsinv,P)" or "sum(E,scale(-0.5,P))".
class OperatorExpr {
 public:
  enum class Kind { Generator, Scale, Sum, Compose };

  static OperatorExpr generator(Gen g);
  static OperatorExpr scale(Complex c, OperatorExpr inner);
  static OperatorExpr sum(std::vector<OperatorExpr> parts);
  static OperatorExpr compose(std::vector<OperatorExpr> factors);

  Kind kind() const { return kind_; }
  Gen gen() const { return gen_; }
  Complex factor() const { return factor_; }
  const std::vector<OperatorExpr>& children() const { return children_; }

 private:
  OperatorExpr() = default;
  Kind kind_ = Kind::Generator;
  Gen gen_ = Gen::E;
  Complex factor_{1.0, 0.0};
  std::vector<OperatorExpr> children_;
};

// Parse the prefix syntax above; throws ConfigError on malformed input.
OperatorExpr parse_operator(const std::string& text);
std::string to_string(const OperatorExpr& op);

// Counit: 0 on E, P, N; 1 on eps and epsinv; extended multiplicatively
// over compositions and linearly over sums.
Complex counit(const OperatorExpr& op);

// Hopf action on words (all generators, including the boost).
PolyWord apply_op(const OperatorExpr& op, const PolyWord& w, double kappa);

// Action on symbols. The boost does not preserve the symbol class and
// throws ConfigError; act on words instead.
Element apply_op(const OperatorExpr& op, const Element& f, double kappa);

// Single-generator fast paths on symbols.
Element act_E(const Element& f);
Element act_P(const Element& f);
Element act_eps(const Element& f, double kappa, int power = 1);

// Right-hand side of the module-algebra law for f*g under one generator:
//   E:   (E f)*g + f*(E g)
//   P:   (P f)*g + (eps f)*(P g)
//   eps / epsinv: (eps f)*(eps g), multiplicative
Element twisted_product_action(Gen g, const Element& f, const Element& h,
                               double kappa);

// The defining commutation relations as (lhs, rhs) expression pairs:
//   [E, P]   = 0
//   [N, E]   = P
//   [N, eps] = (i/kappa) eps P
//   [N, P]   = (i kappa/2)(id - eps^2) + (i/(2 kappa)) P^2
std::vector<std::pair<OperatorExpr, OperatorExpr>> defining_relations(
    double kappa);

}  // namespace kappa
