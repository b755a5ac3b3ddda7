#include "kappa/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include "kappa/errors.hpp"
#include "kappa/trace.hpp"

namespace kappa::dsl {
namespace {

// ---------------------------------------------------------------- lexing

struct Token {
  enum class Kind {
    Number,
    Ident,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Assign,  // :=
    Equals,  // =
    End
  };
  Kind kind = Kind::End;
  double number = 0.0;
  std::string text;
  SourceLocation pos;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  SourceLocation pos{1, 1};
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (i < src.size() && src[i] == '\n') {
        ++pos.line;
        pos.col = 1;
      } else {
        ++pos.col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    const SourceLocation here = pos;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[j])) ||
              src[j] == '.'))
        ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() &&
                 std::isdigit(static_cast<unsigned char>(src[j])))
            ++j;
        }
      }
      const std::string text = src.substr(i, j - i);
      if (std::count(text.begin(), text.end(), '.') > 1)
        throw SyntaxError("malformed number '" + text + "'", here);
      Token t;
      t.kind = Token::Kind::Number;
      t.number = std::strtod(text.c_str(), nullptr);
      t.text = text;
      t.pos = here;
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_'))
        ++j;
      Token t;
      t.kind = Token::Kind::Ident;
      t.text = src.substr(i, j - i);
      t.pos = here;
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    Token t;
    t.pos = here;
    switch (c) {
      case '(':
        t.kind = Token::Kind::LParen;
        break;
      case ')':
        t.kind = Token::Kind::RParen;
        break;
      case ',':
        t.kind = Token::Kind::Comma;
        break;
      case '+':
        t.kind = Token::Kind::Plus;
        break;
      case '-':
        t.kind = Token::Kind::Minus;
        break;
      case '*':
        t.kind = Token::Kind::Star;
        break;
      case '/':
        t.kind = Token::Kind::Slash;
        break;
      case '=':
        t.kind = Token::Kind::Equals;
        break;
      case ':':
        if (i + 1 < src.size() && src[i + 1] == '=') {
          t.kind = Token::Kind::Assign;
          advance(1);
          break;
        }
        throw SyntaxError("stray ':'", here);
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'",
                          here);
    }
    out.push_back(t);
    advance(1);
  }
  Token end;
  end.kind = Token::Kind::End;
  end.pos = pos;
  out.push_back(end);
  return out;
}

// --------------------------------------------------------------- parsing

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr expression() {
    Expr lhs = term();
    while (peek().kind == Token::Kind::Plus ||
           peek().kind == Token::Kind::Minus) {
      const Token op = next();
      Expr node;
      node.kind = Expr::Kind::Binary;
      node.pos = op.pos;
      node.name = op.kind == Token::Kind::Plus ? "+" : "-";
      node.args.push_back(std::move(lhs));
      node.args.push_back(term());
      lhs = std::move(node);
    }
    return lhs;
  }

  const Token& peek(int ahead = 0) const { return toks_[at_ + ahead]; }
  Token next() { return toks_[at_++]; }

  void finish() {
    if (peek().kind != Token::Kind::End)
      throw SyntaxError("unexpected trailing input", peek().pos);
  }

 private:
  Expr term() {
    Expr lhs = factor();
    while (peek().kind == Token::Kind::Star ||
           peek().kind == Token::Kind::Slash) {
      const Token op = next();
      Expr node;
      node.kind = Expr::Kind::Binary;
      node.pos = op.pos;
      node.name = op.kind == Token::Kind::Star ? "*" : "/";
      node.args.push_back(std::move(lhs));
      node.args.push_back(factor());
      lhs = std::move(node);
    }
    return lhs;
  }

  Expr factor() {
    if (peek().kind == Token::Kind::Minus) {
      const Token op = next();
      Expr node;
      node.kind = Expr::Kind::Unary;
      node.pos = op.pos;
      node.name = "-";
      node.args.push_back(atom());
      return node;
    }
    return atom();
  }

  Expr atom() {
    const Token t = next();
    switch (t.kind) {
      case Token::Kind::Number: {
        Expr node;
        node.kind = Expr::Kind::Number;
        node.pos = t.pos;
        node.number = t.number;
        return node;
      }
      case Token::Kind::LParen: {
        Expr first = expression();
        if (peek().kind == Token::Kind::Comma) {
          next();
          Expr node;
          node.kind = Expr::Kind::Pair;
          node.pos = t.pos;
          node.args.push_back(std::move(first));
          node.args.push_back(expression());
          expect(Token::Kind::RParen, "expected ')' after pair literal");
          return node;
        }
        expect(Token::Kind::RParen, "expected ')'");
        return first;
      }
      case Token::Kind::Ident: {
        if (peek().kind == Token::Kind::LParen) {
          next();
          Expr node;
          node.kind = Expr::Kind::Call;
          node.pos = t.pos;
          node.name = t.text;
          if (peek().kind != Token::Kind::RParen) {
            while (true) {
              std::string kw;
              if (peek().kind == Token::Kind::Ident &&
                  peek(1).kind == Token::Kind::Equals) {
                kw = next().text;
                next();
              }
              node.keywords.push_back(kw);
              node.args.push_back(expression());
              if (peek().kind != Token::Kind::Comma) break;
              next();
            }
          }
          expect(Token::Kind::RParen, "expected ')' after arguments");
          return node;
        }
        Expr node;
        node.kind = Expr::Kind::Ident;
        node.pos = t.pos;
        node.name = t.text;
        return node;
      }
      default:
        throw SyntaxError("expected a value", t.pos);
    }
  }

  void expect(Token::Kind k, const char* what) {
    if (peek().kind != k) throw SyntaxError(what, peek().pos);
    next();
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

int precedence(const Expr& e) {
  if (e.kind == Expr::Kind::Binary) return (e.name == "+" || e.name == "-") ? 1 : 2;
  if (e.kind == Expr::Kind::Unary) return 3;
  return 4;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// ------------------------------------------------------------ evaluation

const Element& unit_element() {
  static const Element one = Element::constant(Complex{1.0, 0.0});
  return one;
}

bool is_zero_complex(Complex c) { return c.real() == 0.0 && c.imag() == 0.0; }

struct Evaluator {
  const Session::Config& cfg;
  const std::map<std::string, Value>& table;

  SymbolicAlgebra salg() const {
    SymbolicAlgebra a;
    a.kappa = cfg.kappa;
    a.strict = cfg.strict;
    return a;
  }
  GridAlgebra galg() const {
    GridAlgebra a;
    a.kappa = cfg.kappa;
    a.strict = cfg.strict;
    a.spec = cfg.spec;
    return a;
  }

  // ---- coercions

  static const char* kind_name(const Value& v) {
    switch (v.index()) {
      case 0:
        return "scalar";
      case 1:
        return "symbolic element";
      case 2:
        return "word";
      case 3:
        return "grid field";
      case 4:
        return "symbolic form";
      default:
        return "grid form";
    }
  }

  Complex as_scalar(const Value& v, SourceLocation pos) const {
    if (const Complex* c = std::get_if<Complex>(&v)) return *c;
    throw TypeError(std::string("expected a scalar, got ") + kind_name(v),
                    pos);
  }

  double as_real(const Value& v, SourceLocation pos) const {
    const Complex c = as_scalar(v, pos);
    if (c.imag() != 0.0)
      throw TypeError("expected a real scalar", pos);
    return c.real();
  }

  Element as_element(const Value& v, SourceLocation pos) const {
    if (const Element* f = std::get_if<Element>(&v)) return *f;
    if (const PolyWord* w = std::get_if<PolyWord>(&v))
      return word_eval(*w, cfg.kappa);
    if (const Complex* c = std::get_if<Complex>(&v))
      return Element::constant(*c);
    throw TypeError(
        std::string("expected a symbolic element, got ") + kind_name(v), pos);
  }

  const SpectralGrid& as_grid(const Value& v, SourceLocation pos) const {
    if (const SpectralGrid* g = std::get_if<SpectralGrid>(&v)) return *g;
    throw TypeError(std::string("expected a grid field, got ") + kind_name(v),
                    pos);
  }

  // ---- arithmetic

  Value add(Value l, Value r, bool subtract, SourceLocation pos) const {
    if (std::holds_alternative<SymbolicForm>(l) ||
        std::holds_alternative<SymbolicForm>(r)) {
      if (!std::holds_alternative<SymbolicForm>(l) ||
          !std::holds_alternative<SymbolicForm>(r))
        throw TypeError("can only add forms to forms of the same engine", pos);
      const SymbolicAlgebra a = salg();
      const SymbolicForm& fr = std::get<SymbolicForm>(r);
      return subtract ? sub(a, std::get<SymbolicForm>(l), fr)
                      : kappa::add(a, std::get<SymbolicForm>(l), fr);
    }
    if (std::holds_alternative<NumericForm>(l) ||
        std::holds_alternative<NumericForm>(r)) {
      if (!std::holds_alternative<NumericForm>(l) ||
          !std::holds_alternative<NumericForm>(r))
        throw TypeError("can only add forms to forms of the same engine", pos);
      const GridAlgebra a = galg();
      const NumericForm& fr = std::get<NumericForm>(r);
      return subtract ? sub(a, std::get<NumericForm>(l), fr)
                      : kappa::add(a, std::get<NumericForm>(l), fr);
    }
    if (std::holds_alternative<SpectralGrid>(l) ||
        std::holds_alternative<SpectralGrid>(r)) {
      if (!std::holds_alternative<SpectralGrid>(l) ||
          !std::holds_alternative<SpectralGrid>(r))
        throw TypeError(
            "grids only combine with grids (constants have no grid "
            "representation; see unit_approx)",
            pos);
      SpectralGrid a = std::get<SpectralGrid>(std::move(l));
      const SpectralGrid& b = std::get<SpectralGrid>(r);
      return subtract ? grid_sub(std::move(a), b) : grid_add(std::move(a), b);
    }
    if (std::holds_alternative<Element>(l) ||
        std::holds_alternative<Element>(r)) {
      Element a = as_element(l, pos);
      const Element b = as_element(r, pos);
      return subtract ? a -= b : a += b;
    }
    if (std::holds_alternative<PolyWord>(l) ||
        std::holds_alternative<PolyWord>(r)) {
      PolyWord a = as_word(l, pos);
      const PolyWord b = as_word(r, pos);
      return subtract ? a -= b : a += b;
    }
    const Complex a = as_scalar(l, pos), b = as_scalar(r, pos);
    return subtract ? a - b : a + b;
  }

  PolyWord as_word(const Value& v, SourceLocation pos) const {
    if (const PolyWord* w = std::get_if<PolyWord>(&v)) return *w;
    if (const Complex* c = std::get_if<Complex>(&v))
      return PolyWord::monomial("", *c);
    throw TypeError(std::string("expected a word, got ") + kind_name(v), pos);
  }

  Value scale_value(Complex c, const Value& v) const {
    switch (v.index()) {
      case 0:
        return c * std::get<Complex>(v);
      case 1:
        return c * std::get<Element>(v);
      case 2:
        return c * std::get<PolyWord>(v);
      case 3:
        return grid_scale(c, std::get<SpectralGrid>(v));
      case 4:
        return scale(salg(), c, std::get<SymbolicForm>(v));
      default:
        return scale(galg(), c, std::get<NumericForm>(v));
    }
  }

  Value mul(const Value& l, const Value& r, SourceLocation pos) const {
    if (std::holds_alternative<Complex>(l))
      return scale_value(std::get<Complex>(l), r);
    if (std::holds_alternative<Complex>(r))
      return scale_value(std::get<Complex>(r), l);
    if (std::holds_alternative<SymbolicForm>(l) ||
        std::holds_alternative<SymbolicForm>(r) ||
        std::holds_alternative<NumericForm>(l) ||
        std::holds_alternative<NumericForm>(r))
      throw TypeError("'*' does not act on forms; use wedge, lmul or rmul",
                      pos);
    if (std::holds_alternative<SpectralGrid>(l) ||
        std::holds_alternative<SpectralGrid>(r)) {
      if (!std::holds_alternative<SpectralGrid>(l) ||
          !std::holds_alternative<SpectralGrid>(r))
        throw TypeError("cannot mix exact and grid operands in one product",
                        pos);
      return grid_star(std::get<SpectralGrid>(l), std::get<SpectralGrid>(r),
                       cfg.kappa, cfg.strict);
    }
    if (std::holds_alternative<PolyWord>(l) &&
        std::holds_alternative<PolyWord>(r))
      return concat(std::get<PolyWord>(l), std::get<PolyWord>(r));
    return star_mul(as_element(l, pos), as_element(r, pos), cfg.kappa);
  }

  Value divide(const Value& l, const Value& r, SourceLocation pos) const {
    const Complex d = as_scalar(r, pos);
    if (is_zero_complex(d)) throw TypeError("division by zero", pos);
    return scale_value(Complex{1.0, 0.0} / d, l);
  }

  // ---- forms

  Value to_form(const Value& v, SourceLocation pos) const {
    if (std::holds_alternative<SymbolicForm>(v) ||
        std::holds_alternative<NumericForm>(v))
      return v;
    if (std::holds_alternative<SpectralGrid>(v))
      return function_form(galg(), std::get<SpectralGrid>(v));
    if (std::holds_alternative<Element>(v) ||
        std::holds_alternative<PolyWord>(v))
      return function_form(salg(), as_element(v, pos));
    throw TypeError("expected a differential form or a function", pos);
  }

  // ---- builtin names

  Value ident(const std::string& name, SourceLocation pos) const {
    if (auto it = table.find(name); it != table.end()) return it->second;
    if (name == "t") return Element::coordinate_t();
    if (name == "x") return Element::coordinate_x();
    if (name == "one") return unit_element();
    if (name == "wt") return PolyWord::letter_t();
    if (name == "wx") return PolyWord::letter_x();
    if (name == "i") return Complex{0.0, 1.0};
    if (name == "kappa") return Complex{cfg.kappa, 0.0};
    if (name == "bump1")
      return make_bump(cfg.spec, 1.0, 0.05, 0.8, 0.2, 1.0);
    if (name == "bump2")
      return make_bump(cfg.spec, 0.8, -0.1, 0.7, -0.3, 0.9);
    if (name == "gauss1")
      return make_gaussian(cfg.spec, 1.1, 0.25, 0.5, 0.3, 1.0);
    if (name == "E" || name == "P" || name == "N" || name == "eps" ||
        name == "epsinv" || name == "id")
      throw UnknownName("'" + name +
                            "' is an operator name; use it as the first "
                            "argument of act(...)",
                        pos);
    throw UnknownName("unknown name '" + name + "'", pos);
  }

  // ---- calls

  void no_keywords(const Expr& e) const {
    for (const std::string& kw : e.keywords)
      if (!kw.empty())
        throw TypeError("'" + e.name + "' takes no named arguments", e.pos);
  }

  void arity(const Expr& e, std::size_t n) const {
    if (e.args.size() != n)
      throw TypeError("'" + e.name + "' expects " + std::to_string(n) +
                          " argument(s), got " + std::to_string(e.args.size()),
                      e.pos);
  }

  Value fixture(const Expr& e, const std::vector<std::string>& names,
                std::vector<double> defaults) const {
    std::vector<bool> seen(names.size(), false);
    std::size_t positional = 0;
    for (std::size_t a = 0; a < e.args.size(); ++a) {
      std::size_t slot;
      if (e.keywords[a].empty()) {
        if (positional >= names.size() ||
            (a > 0 && !e.keywords[a - 1].empty()))
          throw TypeError("positional argument after a named one in '" +
                              e.name + "'",
                          e.pos);
        slot = positional++;
      } else {
        auto it = std::find(names.begin(), names.end(), e.keywords[a]);
        if (it == names.end())
          throw TypeError("'" + e.name + "' has no parameter '" +
                              e.keywords[a] + "'",
                          e.args[a].pos);
        slot = std::size_t(it - names.begin());
      }
      if (seen[slot])
        throw TypeError("parameter '" + names[slot] + "' given twice",
                        e.args[a].pos);
      seen[slot] = true;
      defaults[slot] = as_real(eval(e.args[a]), e.args[a].pos);
    }
    if (e.name == "bump")
      return make_bump(cfg.spec, defaults[0], defaults[1], defaults[2],
                       defaults[3], defaults[4]);
    if (e.name == "gauss")
      return make_gaussian(cfg.spec, defaults[0], defaults[1], defaults[2],
                           defaults[3], defaults[4]);
    return unit_approx(cfg.spec, defaults[0]);
  }

  Value call(const Expr& e) const {
    const std::string& fn = e.name;

    if (fn == "bump")
      return fixture(e, {"amp", "v0", "w", "b0", "sb"},
                     {1.0, 0.0, 0.8, 0.0, 1.0});
    if (fn == "gauss")
      return fixture(e, {"amp", "v0", "sv", "b0", "sb"},
                     {1.0, 0.0, 0.5, 0.0, 1.0});
    if (fn == "unit_approx") return fixture(e, {"w"}, {0.3});

    no_keywords(e);

    if (fn == "adj") {
      arity(e, 1);
      const Value v = eval(e.args[0]);
      if (std::holds_alternative<SpectralGrid>(v))
        return grid_involution(std::get<SpectralGrid>(v), cfg.kappa,
                               cfg.strict);
      if (std::holds_alternative<Complex>(v))
        return std::conj(std::get<Complex>(v));
      if (std::holds_alternative<Element>(v) ||
          std::holds_alternative<PolyWord>(v))
        return involution(as_element(v, e.args[0].pos), cfg.kappa);
      throw TypeError("adj acts on functions, not forms", e.pos);
    }
    if (fn == "T") {
      arity(e, 2);
      const double gamma = as_real(eval(e.args[0]), e.args[0].pos);
      const Value v = eval(e.args[1]);
      if (std::holds_alternative<SpectralGrid>(v))
        return grid_translate(std::get<SpectralGrid>(v), gamma);
      return translate(as_element(v, e.args[1].pos), gamma);
    }
    if (fn == "act") {
      arity(e, 2);
      if (e.args[0].kind != Expr::Kind::Ident)
        throw TypeError(
            "act needs an operator name (E, P, N, eps, epsinv, id) first",
            e.pos);
      const std::string& g = e.args[0].name;
      Gen gen;
      if (g == "E")
        gen = Gen::E;
      else if (g == "P")
        gen = Gen::P;
      else if (g == "N")
        gen = Gen::N;
      else if (g == "eps")
        gen = Gen::Eps;
      else if (g == "epsinv")
        gen = Gen::EpsInv;
      else if (g == "id")
        gen = Gen::Id;
      else
        throw TypeError("unknown operator '" + g + "' in act(...)",
                        e.args[0].pos);
      const OperatorExpr op = OperatorExpr::generator(gen);
      const Value v = eval(e.args[1]);
      if (std::holds_alternative<PolyWord>(v))
        return apply_op(op, std::get<PolyWord>(v), cfg.kappa);
      if (std::holds_alternative<SpectralGrid>(v)) {
        if (gen == Gen::N)
          throw TypeError("the boost does not act on grid fields; act on "
                          "words instead",
                          e.pos);
        return grid_apply_op(op, std::get<SpectralGrid>(v), cfg.kappa);
      }
      if (gen == Gen::N)
        throw TypeError(
            "the boost does not preserve the symbol class; act on words",
            e.pos);
      return apply_op(op, as_element(v, e.args[1].pos), cfg.kappa);
    }
    if (fn == "d") {
      arity(e, 1);
      const Value v = to_form(eval(e.args[0]), e.args[0].pos);
      if (std::holds_alternative<SymbolicForm>(v))
        return exterior_d(salg(), std::get<SymbolicForm>(v));
      return exterior_d(galg(), std::get<NumericForm>(v));
    }
    if (fn == "wedge") {
      arity(e, 2);
      const Value l = to_form(eval(e.args[0]), e.args[0].pos);
      const Value r = to_form(eval(e.args[1]), e.args[1].pos);
      if (std::holds_alternative<SymbolicForm>(l) &&
          std::holds_alternative<SymbolicForm>(r))
        return wedge(salg(), std::get<SymbolicForm>(l),
                     std::get<SymbolicForm>(r));
      if (std::holds_alternative<NumericForm>(l) &&
          std::holds_alternative<NumericForm>(r))
        return wedge(galg(), std::get<NumericForm>(l),
                     std::get<NumericForm>(r));
      throw TypeError("wedge operands must come from the same engine", e.pos);
    }
    if (fn == "lmul" || fn == "rmul") {
      arity(e, 2);
      const Value fv = eval(e.args[fn == "lmul" ? 0 : 1]);
      const Value wv = eval(e.args[fn == "lmul" ? 1 : 0]);
      if (std::holds_alternative<Complex>(fv))
        return scale_value(std::get<Complex>(fv), wv);
      if (const NumericForm* gf = std::get_if<NumericForm>(&wv)) {
        const SpectralGrid& f = as_grid(fv, e.pos);
        return fn == "lmul" ? left_mul(galg(), f, *gf)
                            : right_mul(galg(), *gf, f);
      }
      if (const SymbolicForm* sf = std::get_if<SymbolicForm>(&wv)) {
        const Element f = as_element(fv, e.pos);
        return fn == "lmul" ? left_mul(salg(), f, *sf)
                            : right_mul(salg(), *sf, f);
      }
      throw TypeError(std::string(fn) + " needs a differential form operand",
                      e.pos);
    }
    if (fn == "trace") {
      arity(e, 1);
      const Value v = eval(e.args[0]);
      if (std::holds_alternative<SpectralGrid>(v))
        return lebesgue_integral(std::get<SpectralGrid>(v));
      if (std::holds_alternative<Element>(v) ||
          std::holds_alternative<PolyWord>(v))
        throw TypeError(
            "symbolic elements are not integrable; trace needs a grid field",
            e.pos);
      if (std::holds_alternative<SymbolicForm>(v) ||
          std::holds_alternative<NumericForm>(v))
        throw TypeError("trace acts on functions; use gtrace for forms",
                        e.pos);
      throw TypeError("trace needs a grid field", e.pos);
    }
    if (fn == "gtrace") {
      arity(e, 1);
      const Value v = eval(e.args[0]);
      if (const NumericForm* f = std::get_if<NumericForm>(&v))
        return graded_trace(galg(), *f);
      throw TypeError("gtrace needs a grid-backed three-form", e.pos);
    }
    if (fn == "phi") {
      arity(e, 4);
      const Value v0 = eval(e.args[0]), v1 = eval(e.args[1]),
                  v2 = eval(e.args[2]), v3 = eval(e.args[3]);
      return cocycle_phi(galg(), as_grid(v0, e.args[0].pos),
                         as_grid(v1, e.args[1].pos),
                         as_grid(v2, e.args[2].pos),
                         as_grid(v3, e.args[3].pos));
    }
    if (fn == "comm") {
      arity(e, 2);
      const Value a = eval(e.args[0]);
      const Value b = eval(e.args[1]);
      return add(mul(a, b, e.pos), mul(b, a, e.pos), true, e.pos);
    }
    if (fn == "eval") {
      arity(e, 3);
      const Value v = eval(e.args[0]);
      const Complex alpha = as_scalar(eval(e.args[1]), e.args[1].pos);
      const double beta = as_real(eval(e.args[2]), e.args[2].pos);
      if (std::holds_alternative<SpectralGrid>(v))
        return grid_eval(std::get<SpectralGrid>(v), alpha, beta);
      return eval_point(as_element(v, e.args[0].pos), alpha, beta);
    }
    if (fn == "jstar") {
      arity(e, 2);
      const Value a = eval(e.args[0]);
      const Value b = eval(e.args[1]);
      return rows_to_grid(rieffel_star_rows(as_grid(a, e.args[0].pos),
                                            as_grid(b, e.args[1].pos),
                                            cfg.kappa));
    }
    if (fn == "eta") {
      arity(e, 3);
      const double r = as_real(eval(e.args[0]), e.args[0].pos);
      const double s = as_real(eval(e.args[1]), e.args[1].pos);
      const Value v = eval(e.args[2]);
      return eta_act(EtaParams{r, s}, as_grid(v, e.args[2].pos), cfg.strict);
    }
    throw UnknownName("unknown function '" + fn + "'", e.pos);
  }

  Value eval(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Number:
        return Complex{e.number, 0.0};
      case Expr::Kind::Pair: {
        const double re = as_real(eval(e.args[0]), e.args[0].pos);
        const double im = as_real(eval(e.args[1]), e.args[1].pos);
        return Complex{re, im};
      }
      case Expr::Kind::Ident:
        return ident(e.name, e.pos);
      case Expr::Kind::Call:
        return call(e);
      case Expr::Kind::Unary:
        return scale_value(Complex{-1.0, 0.0}, eval(e.args[0]));
      case Expr::Kind::Binary: {
        const Value l = eval(e.args[0]);
        const Value r = eval(e.args[1]);
        if (e.name == "+") return add(l, r, false, e.pos);
        if (e.name == "-") return add(l, r, true, e.pos);
        if (e.name == "*") return mul(l, r, e.pos);
        return divide(l, r, e.pos);
      }
    }
    throw SyntaxError("corrupt expression tree", e.pos);
  }
};

const std::set<std::string>& reserved_names() {
  static const std::set<std::string> names = {
      "t",     "x",     "one",   "wt",     "wx",    "i",      "kappa",
      "bump1", "bump2", "gauss1", "E",     "P",     "N",      "eps",
      "epsinv", "id",   "adj",   "T",      "act",   "d",      "wedge",
      "lmul",  "rmul",  "trace", "gtrace", "phi",   "comm",   "eval",
      "jstar", "eta",   "bump",  "gauss",  "unit_approx"};
  return names;
}

}  // namespace

Expr parse(const std::string& source) {
  Parser p(lex(source));
  Expr e = p.expression();
  p.finish();
  return e;
}

std::string print(const Expr& e) {
  auto wrap = [](const Expr& child, bool need) {
    const std::string inner = print(child);
    return need ? "(" + inner + ")" : inner;
  };
  switch (e.kind) {
    case Expr::Kind::Number:
      return format_number(e.number);
    case Expr::Kind::Pair:
      return "(" + print(e.args[0]) + ", " + print(e.args[1]) + ")";
    case Expr::Kind::Ident:
      return e.name;
    case Expr::Kind::Call: {
      std::string out = e.name + "(";
      for (std::size_t a = 0; a < e.args.size(); ++a) {
        if (a) out += ", ";
        if (!e.keywords[a].empty()) out += e.keywords[a] + "=";
        out += print(e.args[a]);
      }
      return out + ")";
    }
    case Expr::Kind::Unary:
      return "-" + wrap(e.args[0], precedence(e.args[0]) <= 3);
    case Expr::Kind::Binary: {
      const int prec = precedence(e);
      std::string out = wrap(e.args[0], precedence(e.args[0]) < prec);
      out += e.name == "+" || e.name == "-" ? " " + e.name + " " : e.name;
      out += wrap(e.args[1], precedence(e.args[1]) <= prec);
      return out;
    }
  }
  return {};
}

bool ast_equal(const Expr& lhs, const Expr& rhs) {
  if (lhs.kind != rhs.kind || lhs.name != rhs.name ||
      lhs.args.size() != rhs.args.size() || lhs.keywords != rhs.keywords)
    return false;
  if (lhs.kind == Expr::Kind::Number && lhs.number != rhs.number) return false;
  for (std::size_t a = 0; a < lhs.args.size(); ++a)
    if (!ast_equal(lhs.args[a], rhs.args[a])) return false;
  return true;
}

std::string describe(const Value& v) {
  auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
  };
  auto cplx = [&](Complex c) {
    if (c.imag() == 0.0) return num(c.real());
    return "(" + num(c.real()) + ", " + num(c.imag()) + ")";
  };
  switch (v.index()) {
    case 0:
      return cplx(std::get<Complex>(v));
    case 1:
      return to_string(std::get<Element>(v));
    case 2:
      return to_string(std::get<PolyWord>(v));
    case 3: {
      const SpectralGrid& g = std::get<SpectralGrid>(v);
      double sup = 0.0;
      for (const Complex& c : g.values()) sup = std::max(sup, std::abs(c));
      const GridSpec& sp = g.spec();
      return "grid " + std::to_string(sp.v_cells) + "x" +
             std::to_string(sp.beta_cells) + " on [" + num(sp.v_min) + ", " +
             num(sp.v_max) + "]x[" + num(sp.beta_min) + ", " +
             num(sp.beta_max) + "], sup " + num(sup) + ", leakage " +
             num(g.leakage());
    }
    case 4: {
      const SymbolicForm& f = std::get<SymbolicForm>(v);
      std::string out;
      for (const auto& [mask, coeff] : f.comps()) {
        if (coeff_l1(coeff) == 0.0) continue;
        if (!out.empty()) out += " + ";
        out += basis_name(mask) + "·(" + to_string(coeff) + ")";
      }
      if (out.empty())
        out = "0 (degree " + std::to_string(f.degree()) + " form)";
      return out;
    }
    default: {
      const NumericForm& f = std::get<NumericForm>(v);
      std::string out;
      for (const auto& [mask, coeff] : f.comps()) {
        double sup = 0.0;
        for (const Complex& c : coeff.values()) sup = std::max(sup, std::abs(c));
        if (sup == 0.0) continue;
        if (!out.empty()) out += " + ";
        out += basis_name(mask) + "·(grid, sup " + num(sup) + ")";
      }
      if (out.empty())
        out = "0 (degree " + std::to_string(f.degree()) + " form)";
      return out;
    }
  }
}

Session::Session(const Config& cfg) : cfg_(cfg) {
  if (!(cfg.kappa > 0.0)) throw ConfigError("kappa must be positive");
  cfg_.spec.validate();
}

const Value& Session::lookup(const std::string& name) const {
  auto it = table_.find(name);
  if (it == table_.end())
    throw UnknownName("unknown name '" + name + "'", SourceLocation{1, 1});
  return it->second;
}

Value Session::evaluate(const Expr& e) const {
  Evaluator ev{cfg_, table_};
  return ev.eval(e);
}

Session::Outcome Session::run(const std::string& statement) {
  std::vector<Token> toks = lex(statement);
  std::string name;
  std::size_t skip = 0;
  if (toks.size() >= 2 && toks[0].kind == Token::Kind::Ident &&
      toks[1].kind == Token::Kind::Assign) {
    name = toks[0].text;
    if (reserved_names().count(name))
      throw ConfigError("'" + name + "' is a reserved name");
    if (table_.count(name))
      throw ConfigError("'" + name + "' is already bound");
    skip = 2;
  }
  Parser p(std::vector<Token>(toks.begin() + skip, toks.end()));
  Expr e = p.expression();
  p.finish();
  Value v = evaluate(e);
  if (!name.empty()) table_.emplace(name, v);
  return {name, std::move(v)};
}

}  // namespace kappa::dsl
