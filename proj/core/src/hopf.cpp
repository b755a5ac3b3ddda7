#include "kappa/hopf.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "kappa/errors.hpp"

namespace kappa {
namespace {

void require_kappa(double kappa) {
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
}

void validate_word(const std::string& w) {
  for (char c : w)
    if (c != 't' && c != 'x')
      throw ConfigError("word letters must be 't' or 'x', got '" +
                        std::string(1, c) + "'");
}

// Action of a generator on a single letter.
PolyWord act_letter(Gen g, char y, double kappa) {
  const bool is_t = (y == 't');
  switch (g) {
    case Gen::E:
      return is_t ? PolyWord::unit() : PolyWord::zero();
    case Gen::P:
      return is_t ? PolyWord::zero() : PolyWord::unit();
    case Gen::N:
      return Complex{-1.0, 0.0} *
             (is_t ? PolyWord::letter_x() : PolyWord::letter_t());
    case Gen::Eps:
      return is_t ? PolyWord::letter_t() +
                        Complex{0.0, 1.0 / kappa} * PolyWord::unit()
                  : PolyWord::letter_x();
    case Gen::EpsInv:
      return is_t ? PolyWord::letter_t() -
                        Complex{0.0, 1.0 / kappa} * PolyWord::unit()
                  : PolyWord::letter_x();
    case Gen::Id:
      return PolyWord::monomial(std::string(1, y));
  }
  throw ConfigError("unreachable generator");
}

// Action on a single word, extended to sums by the caller. E is a classical
// derivation, P and N are twisted (the unit-shifted factor passes through
// eps), eps and epsinv are multiplicative letter by letter.
PolyWord act_word(Gen g, const std::string& w, double kappa) {
  if (g == Gen::Id) return PolyWord::monomial(w);
  if (w.empty()) {
    if (g == Gen::Eps || g == Gen::EpsInv) return PolyWord::unit();
    return PolyWord::zero();
  }
  const char y = w.front();
  const std::string rest = w.substr(1);
  const PolyWord rest_word = PolyWord::monomial(rest);
  switch (g) {
    case Gen::E:
      return concat(act_letter(g, y, kappa), rest_word) +
             concat(PolyWord::monomial(std::string(1, y)),
                    act_word(g, rest, kappa));
    case Gen::P:
    case Gen::N:
      return concat(act_letter(g, y, kappa), rest_word) +
             concat(act_letter(Gen::Eps, y, kappa), act_word(g, rest, kappa));
    case Gen::Eps:
    case Gen::EpsInv:
      return concat(act_letter(g, y, kappa), act_word(g, rest, kappa));
    case Gen::Id:
      break;  // handled above
  }
  throw ConfigError("unreachable generator");
}

PolyWord act_poly(Gen g, const PolyWord& w, double kappa) {
  PolyWord out;
  for (const auto& term : w.terms())
    out += term.coeff * act_word(g, term.word, kappa);
  return out;
}

Element act_gen_element(Gen g, const Element& f, double kappa) {
  switch (g) {
    case Gen::E:
      return act_E(f);
    case Gen::P:
      return act_P(f);
    case Gen::Eps:
      return act_eps(f, kappa, 1);
    case Gen::EpsInv:
      return act_eps(f, kappa, -1);
    case Gen::N:
      throw ConfigError(
          "the boost does not preserve the symbol class; apply it to words");
    case Gen::Id:
      return f;
  }
  throw ConfigError("unreachable generator");
}

}  // namespace

PolyWord::PolyWord(std::vector<WordTerm> terms) : terms_(std::move(terms)) {
  canonicalize();
}

void PolyWord::canonicalize() {
  for (const auto& t : terms_) validate_word(t.word);
  std::sort(terms_.begin(), terms_.end(),
            [](const WordTerm& a, const WordTerm& b) { return a.word < b.word; });
  std::vector<WordTerm> merged;
  merged.reserve(terms_.size());
  for (const WordTerm& t : terms_) {
    if (!merged.empty() && merged.back().word == t.word)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const WordTerm& t) {
                                return std::abs(t.coeff) <= kCoeffDropEps;
                              }),
               merged.end());
  terms_ = std::move(merged);
}

PolyWord PolyWord::zero() { return PolyWord{}; }
PolyWord PolyWord::unit() { return monomial(""); }
PolyWord PolyWord::letter_t() { return monomial("t"); }
PolyWord PolyWord::letter_x() { return monomial("x"); }

PolyWord PolyWord::monomial(const std::string& word, Complex c) {
  return PolyWord{{WordTerm{word, c}}};
}

bool PolyWord::is_zero(double tol) const {
  for (const auto& t : terms_)
    if (std::abs(t.coeff) > tol) return false;
  return true;
}

PolyWord& PolyWord::operator+=(const PolyWord& rhs) {
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  canonicalize();
  return *this;
}

PolyWord& PolyWord::operator-=(const PolyWord& rhs) {
  for (const auto& t : rhs.terms_)
    terms_.push_back(WordTerm{t.word, -t.coeff});
  canonicalize();
  return *this;
}

PolyWord& PolyWord::operator*=(Complex scale) {
  for (auto& t : terms_) t.coeff *= scale;
  canonicalize();
  return *this;
}

PolyWord operator+(PolyWord lhs, const PolyWord& rhs) { return lhs += rhs; }
PolyWord operator-(PolyWord lhs, const PolyWord& rhs) { return lhs -= rhs; }
PolyWord operator*(Complex scale, PolyWord w) { return w *= scale; }
PolyWord operator*(double scale, PolyWord w) {
  return w *= Complex{scale, 0.0};
}

PolyWord concat(const PolyWord& lhs, const PolyWord& rhs) {
  std::vector<PolyWord::WordTerm> out;
  out.reserve(lhs.terms().size() * rhs.terms().size());
  for (const auto& a : lhs.terms())
    for (const auto& b : rhs.terms())
      out.push_back({a.word + b.word, a.coeff * b.coeff});
  return PolyWord{std::move(out)};
}

double word_distance(const PolyWord& f, const PolyWord& g) {
  PolyWord diff = f - g;
  double worst = 0.0;
  for (const auto& t : diff.terms())
    worst = std::max(worst, std::abs(t.coeff));
  return worst;
}

std::string to_string(const PolyWord& w) {
  if (w.terms().empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& t : w.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+")
       << t.coeff.imag() << "i)";
    os << "*" << (t.word.empty() ? "1" : t.word);
  }
  return os.str();
}

Element word_eval(const PolyWord& w, double kappa) {
  require_kappa(kappa);
  Element out = Element::zero();
  for (const auto& term : w.terms()) {
    Element acc = Element::constant({1.0, 0.0});
    for (char y : term.word)
      acc = star_mul(acc, y == 't' ? Element::coordinate_t()
                                   : Element::coordinate_x(),
                     kappa);
    out += term.coeff * acc;
  }
  return out;
}

OperatorExpr OperatorExpr::generator(Gen g) {
  OperatorExpr e;
  e.kind_ = Kind::Generator;
  e.gen_ = g;
  return e;
}

OperatorExpr OperatorExpr::scale(Complex c, OperatorExpr inner) {
  OperatorExpr e;
  e.kind_ = Kind::Scale;
  e.factor_ = c;
  e.children_.push_back(std::move(inner));
  return e;
}

OperatorExpr OperatorExpr::sum(std::vector<OperatorExpr> parts) {
  if (parts.empty()) throw ConfigError("operator sum needs at least one part");
  OperatorExpr e;
  e.kind_ = Kind::Sum;
  e.children_ = std::move(parts);
  return e;
}

OperatorExpr OperatorExpr::compose(std::vector<OperatorExpr> factors) {
  if (factors.empty())
    throw ConfigError("operator composition needs at least one factor");
  OperatorExpr e;
  e.kind_ = Kind::Compose;
  e.children_ = std::move(factors);
  return e;
}

namespace {

struct OpParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c))
      throw ConfigError("operator syntax: expected '" + std::string(1, c) +
                        "' at offset " + std::to_string(pos) + " in \"" +
                        text + "\"");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum((unsigned char)text[pos]) || text[pos] == '_'))
      ++pos;
    if (start == pos)
      throw ConfigError("operator syntax: expected name at offset " +
                        std::to_string(pos) + " in \"" + text + "\"");
    return text.substr(start, pos - start);
  }

  double number() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    while (pos < text.size() &&
           (std::isdigit((unsigned char)text[pos]) || text[pos] == '.' ||
            text[pos] == 'e' || text[pos] == 'E' ||
            ((text[pos] == '+' || text[pos] == '-') &&
             (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
      ++pos;
    if (start == pos)
      throw ConfigError("operator syntax: expected number at offset " +
                        std::to_string(pos) + " in \"" + text + "\"");
    return std::stod(text.substr(start, pos - start));
  }

  OperatorExpr expr() {
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      // not allowed at expression level; scale handles pairs itself
      throw ConfigError("operator syntax: unexpected '(' in \"" + text + "\"");
    }
    const std::string name = ident();
    if (name == "E") return OperatorExpr::generator(Gen::E);
    if (name == "P") return OperatorExpr::generator(Gen::P);
    if (name == "N") return OperatorExpr::generator(Gen::N);
    if (name == "eps") return OperatorExpr::generator(Gen::Eps);
    if (name == "epsinv") return OperatorExpr::generator(Gen::EpsInv);
    if (name == "id") return OperatorExpr::generator(Gen::Id);
    if (name == "compose" || name == "sum") {
      expect('(');
      std::vector<OperatorExpr> parts;
      parts.push_back(expr());
      while (eat(',')) parts.push_back(expr());
      expect(')');
      return name == "compose" ? OperatorExpr::compose(std::move(parts))
                               : OperatorExpr::sum(std::move(parts));
    }
    if (name == "scale") {
      expect('(');
      Complex c;
      skip_ws();
      if (pos < text.size() && text[pos] == '(') {
        expect('(');
        const double re = number();
        expect(',');
        const double im = number();
        expect(')');
        c = Complex{re, im};
      } else {
        c = Complex{number(), 0.0};
      }
      expect(',');
      OperatorExpr inner = expr();
      expect(')');
      return OperatorExpr::scale(c, std::move(inner));
    }
    throw ConfigError("unknown operator name \"" + name + "\"");
  }
};

const char* gen_name(Gen g) {
  switch (g) {
    case Gen::E: return "E";
    case Gen::P: return "P";
    case Gen::Eps: return "eps";
    case Gen::EpsInv: return "epsinv";
    case Gen::N: return "N";
    case Gen::Id: return "id";
  }
  return "?";
}

}  // namespace

OperatorExpr parse_operator(const std::string& text) {
  OpParser p{text};
  OperatorExpr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size())
    throw ConfigError("operator syntax: trailing input in \"" + text + "\"");
  return e;
}

std::string to_string(const OperatorExpr& op) {
  switch (op.kind()) {
    case OperatorExpr::Kind::Generator:
      return gen_name(op.gen());
    case OperatorExpr::Kind::Scale: {
      std::ostringstream os;
      os.precision(12);
      os << "scale((" << op.factor().real() << "," << op.factor().imag()
         << ")," << to_string(op.children()[0]) << ")";
      return os.str();
    }
    case OperatorExpr::Kind::Sum:
    case OperatorExpr::Kind::Compose: {
      std::string out =
          op.kind() == OperatorExpr::Kind::Sum ? "sum(" : "compose(";
      for (std::size_t i = 0; i < op.children().size(); ++i) {
        if (i) out += ",";
        out += to_string(op.children()[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

Complex counit(const OperatorExpr& op) {
  switch (op.kind()) {
    case OperatorExpr::Kind::Generator:
      return (op.gen() == Gen::Eps || op.gen() == Gen::EpsInv ||
              op.gen() == Gen::Id)
                 ? Complex{1.0, 0.0}
                 : Complex{0.0, 0.0};
    case OperatorExpr::Kind::Scale:
      return op.factor() * counit(op.children()[0]);
    case OperatorExpr::Kind::Sum: {
      Complex acc{0.0, 0.0};
      for (const auto& c : op.children()) acc += counit(c);
      return acc;
    }
    case OperatorExpr::Kind::Compose: {
      Complex acc{1.0, 0.0};
      for (const auto& c : op.children()) acc *= counit(c);
      return acc;
    }
  }
  return {0.0, 0.0};
}

PolyWord apply_op(const OperatorExpr& op, const PolyWord& w, double kappa) {
  require_kappa(kappa);
  switch (op.kind()) {
    case OperatorExpr::Kind::Generator:
      return act_poly(op.gen(), w, kappa);
    case OperatorExpr::Kind::Scale:
      return op.factor() * apply_op(op.children()[0], w, kappa);
    case OperatorExpr::Kind::Sum: {
      PolyWord acc;
      for (const auto& c : op.children()) acc += apply_op(c, w, kappa);
      return acc;
    }
    case OperatorExpr::Kind::Compose: {
      PolyWord acc = w;
      for (auto it = op.children().rbegin(); it != op.children().rend(); ++it)
        acc = apply_op(*it, acc, kappa);
      return acc;
    }
  }
  throw ConfigError("unreachable operator kind");
}

Element apply_op(const OperatorExpr& op, const Element& f, double kappa) {
  require_kappa(kappa);
  switch (op.kind()) {
    case OperatorExpr::Kind::Generator:
      return act_gen_element(op.gen(), f, kappa);
    case OperatorExpr::Kind::Scale:
      return op.factor() * apply_op(op.children()[0], f, kappa);
    case OperatorExpr::Kind::Sum: {
      Element acc;
      for (const auto& c : op.children()) acc += apply_op(c, f, kappa);
      return acc;
    }
    case OperatorExpr::Kind::Compose: {
      Element acc = f;
      for (auto it = op.children().rbegin(); it != op.children().rend(); ++it)
        acc = apply_op(*it, acc, kappa);
      return acc;
    }
  }
  throw ConfigError("unreachable operator kind");
}

Element act_E(const Element& f) { return d_alpha(f); }

Element act_P(const Element& f) { return d_beta(f); }

Element act_eps(const Element& f, double kappa, int power) {
  require_kappa(kappa);
  return translate(f, double(power) / kappa);
}

std::vector<std::pair<OperatorExpr, OperatorExpr>> defining_relations(
    double kappa) {
  require_kappa(kappa);
  using OE = OperatorExpr;
  auto gen = [](Gen g) { return OE::generator(g); };
  auto comm = [&](Gen a, Gen b) {
    return OE::sum({OE::compose({gen(a), gen(b)}),
                    OE::scale({-1.0, 0.0}, OE::compose({gen(b), gen(a)}))});
  };
  std::vector<std::pair<OE, OE>> rels;
  // [E, P] = 0
  rels.emplace_back(comm(Gen::E, Gen::P), OE::scale({0.0, 0.0}, gen(Gen::Id)));
  // [N, E] = P
  rels.emplace_back(comm(Gen::N, Gen::E), gen(Gen::P));
  // [N, eps] = (i/kappa) eps P
  rels.emplace_back(comm(Gen::N, Gen::Eps),
                    OE::scale({0.0, 1.0 / kappa},
                              OE::compose({gen(Gen::Eps), gen(Gen::P)})));
  // [N, P] = (i kappa/2)(id - eps^2) + (i/(2 kappa)) P^2
  rels.emplace_back(
      comm(Gen::N, Gen::P),
      OE::sum({OE::scale({0.0, 0.5 * kappa}, gen(Gen::Id)),
               OE::scale({0.0, -0.5 * kappa},
                         OE::compose({gen(Gen::Eps), gen(Gen::Eps)})),
               OE::scale({0.0, 0.5 / kappa},
                         OE::compose({gen(Gen::P), gen(Gen::P)}))}));
  return rels;
}

Element twisted_product_action(Gen g, const Element& f, const Element& h,
                               double kappa) {
  require_kappa(kappa);
  switch (g) {
    case Gen::E:
      return star_mul(act_E(f), h, kappa) + star_mul(f, act_E(h), kappa);
    case Gen::P:
      return star_mul(act_P(f), h, kappa) +
             star_mul(act_eps(f, kappa, 1), act_P(h), kappa);
    case Gen::Eps:
      return star_mul(act_eps(f, kappa, 1), act_eps(h, kappa, 1), kappa);
    case Gen::EpsInv:
      return star_mul(act_eps(f, kappa, -1), act_eps(h, kappa, -1), kappa);
    case Gen::N:
      throw ConfigError("the boost has no symbol-level product law here");
    case Gen::Id:
      return star_mul(f, h, kappa);
  }
  throw ConfigError("unreachable generator");
}

}  // namespace kappa
