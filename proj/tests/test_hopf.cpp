#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "kappa/errors.hpp"
#include "kappa/hopf.hpp"
#include "test_util.hpp"

using kappa::Complex;
using kappa::Element;
using kappa::Gen;
using kappa::OperatorExpr;
using kappa::PolyWord;
using kappa::kImag;

namespace {

std::vector<std::string> words_up_to_length(int maxlen) {
  std::vector<std::string> out{""};
  std::vector<std::string> frontier{""};
  for (int l = 0; l < maxlen; ++l) {
    std::vector<std::string> next;
    for (const auto& w : frontier) {
      next.push_back(w + "t");
      next.push_back(w + "x");
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("hopf");

TEST_CASE("word algebra basics") {
  PolyWord w = concat(PolyWord::letter_t(), PolyWord::letter_x());
  REQUIRE(w.size() == 1);
  CHECK(w.terms()[0].word == "tx");

  PolyWord s = PolyWord::monomial("tx", {1.0, 0.0}) +
               PolyWord::monomial("tx", {2.0, 0.0});
  REQUIRE(s.size() == 1);
  CHECK(std::abs(s.terms()[0].coeff - Complex{3.0, 0.0}) <= 1e-15);

  CHECK_THROWS_AS(PolyWord::monomial("ty"), kappa::ConfigError);
}

TEST_CASE("word evaluation pins the ordering convention") {
  const double kp = 1.25;
  CHECK(kappa::distance(word_eval(PolyWord::unit(), kp),
                        Element::constant({1.0, 0.0})) <= 1e-14);
  CHECK(kappa::distance(word_eval(PolyWord::monomial("t"), kp),
                        Element::coordinate_t()) <= 1e-14);

  // tx evaluates to the deformed product t*x = alpha beta + (i/kappa) beta.
  Element tx = word_eval(PolyWord::monomial("tx"), kp);
  Element expected = star_mul(Element::coordinate_t(),
                              Element::coordinate_x(), kp);
  CHECK(kappa::distance(tx, expected) <= 1e-14);

  // Concatenation maps to the deformed product.
  PolyWord w1 = PolyWord::monomial("tx") + 0.5 * PolyWord::monomial("x");
  PolyWord w2 = PolyWord::monomial("xt") - 2.0 * PolyWord::unit();
  Element lhs = word_eval(concat(w1, w2), kp);
  Element rhs = star_mul(word_eval(w1, kp), word_eval(w2, kp), kp);
  CHECK(kappa::distance(lhs, rhs) <= 1e-12);
}

TEST_CASE("generator actions on words: pinned values") {
  const double kp = 2.0;
  auto E = OperatorExpr::generator(Gen::E);
  auto P = OperatorExpr::generator(Gen::P);
  auto eps = OperatorExpr::generator(Gen::Eps);
  auto N = OperatorExpr::generator(Gen::N);

  // E is a plain derivation.
  CHECK(kappa::word_distance(apply_op(E, PolyWord::monomial("tx"), kp),
                             PolyWord::monomial("x")) <= 1e-14);
  // P sees x only; passing t costs nothing here since P t = 0 and the
  // twisted factor acts on what remains.
  CHECK(kappa::word_distance(apply_op(P, PolyWord::monomial("tx"), kp),
                             PolyWord::monomial("t") +
                                 Complex{0.0, 1.0 / kp} * PolyWord::unit())
        <= 1e-14);
  // eps shifts every t by i/kappa.
  CHECK(kappa::word_distance(apply_op(eps, PolyWord::monomial("t"), kp),
                             PolyWord::monomial("t") +
                                 Complex{0.0, 1.0 / kp} * PolyWord::unit())
        <= 1e-14);
  // Boost on tx: -xx - tt - (i/kappa) t.
  PolyWord expected = Complex{-1.0, 0.0} * PolyWord::monomial("xx") -
                      PolyWord::monomial("tt") -
                      Complex{0.0, 1.0 / kp} * PolyWord::monomial("t");
  CHECK(kappa::word_distance(apply_op(N, PolyWord::monomial("tx"), kp),
                             expected) <= 1e-14);
}

TEST_CASE("defining relations hold on all words up to length 3") {
  for (double kp : {0.7, 1.0, 3.0}) {
    auto rels = kappa::defining_relations(kp);
    REQUIRE(rels.size() == 4);
    const auto words = words_up_to_length(3);
    REQUIRE(words.size() == 15);
    for (const auto& [lhs, rhs] : rels) {
      for (const auto& w : words) {
        PolyWord pw = PolyWord::monomial(w);
        const double d = kappa::word_distance(apply_op(lhs, pw, kp),
                                              apply_op(rhs, pw, kp));
        CHECK_MESSAGE(d <= 1e-10,
                      "relation ", kappa::to_string(lhs), " vs ",
                      kappa::to_string(rhs), " on word \"", w, "\"");
      }
    }
  }
}

TEST_CASE("boost respects the coordinate commutation relation") {
  // tx and xt + (i/kappa) x are the same algebra element; N must send both
  // representatives to the same symbol.
  for (double kp : {0.5, 1.0, 2.0}) {
    auto N = OperatorExpr::generator(Gen::N);
    Element via_tx = word_eval(apply_op(N, PolyWord::monomial("tx"), kp), kp);
    PolyWord other = PolyWord::monomial("xt") +
                     Complex{0.0, 1.0 / kp} * PolyWord::monomial("x");
    Element via_xt = word_eval(apply_op(N, other, kp), kp);
    CHECK(kappa::distance(via_tx, via_xt) <= 1e-12);
  }
}

TEST_CASE("word actions agree with symbol actions through evaluation") {
  const double kp = 1.4;
  for (Gen g : {Gen::E, Gen::P, Gen::Eps, Gen::EpsInv}) {
    for (const auto& w : words_up_to_length(3)) {
      PolyWord pw = PolyWord::monomial(w);
      Element lhs =
          word_eval(apply_op(OperatorExpr::generator(g), pw, kp), kp);
      Element rhs = apply_op(OperatorExpr::generator(g), word_eval(pw, kp), kp);
      CHECK_MESSAGE(kappa::distance(lhs, rhs) <= 1e-12, "generator on \"",
                    w, "\"");
    }
  }
}

TEST_CASE("module-algebra law on symbols") {
  std::mt19937 rng(314159);
  for (int trial = 0; trial < 12; ++trial) {
    const double kp = 0.6 + 0.3 * trial;
    Element f = testutil::random_element(rng);
    Element g = testutil::random_element(rng);
    for (Gen gen : {Gen::E, Gen::P, Gen::Eps, Gen::EpsInv}) {
      Element lhs = apply_op(OperatorExpr::generator(gen),
                             star_mul(f, g, kp), kp);
      Element rhs = kappa::twisted_product_action(gen, f, g, kp);
      const double scale =
          std::max({1.0, kappa::coeff_l1(lhs), kappa::coeff_l1(rhs)});
      CHECK(kappa::distance(lhs, rhs) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("operator expression parsing, printing, counit") {
  auto op = kappa::parse_operator("compose(epsinv,P)");
  CHECK(kappa::to_string(op) == "compose(epsinv,P)");

  // (epsinv P) t x-profile: applies P first, then shifts alpha.
  const double kp = 2.5;
  Element f = star_mul(Element::coordinate_t(), Element::coordinate_x(), kp);
  Element got = apply_op(op, f, kp);
  Element expected = kappa::act_eps(kappa::act_P(f), kp, -1);
  CHECK(kappa::distance(got, expected) <= 1e-14);

  auto scaled = kappa::parse_operator("sum(E,scale((0,-0.5),compose(P,P)))");
  CHECK(std::abs(counit(scaled)) <= 1e-15);
  CHECK(std::abs(counit(kappa::parse_operator("compose(eps,epsinv)")) -
                 Complex{1.0, 0.0}) <= 1e-15);
  CHECK(std::abs(counit(kappa::parse_operator("id")) - Complex{1.0, 0.0}) <=
        1e-15);

  CHECK_THROWS_AS(kappa::parse_operator("compose(eps"), kappa::ConfigError);
  CHECK_THROWS_AS(kappa::parse_operator("boost"), kappa::ConfigError);
  CHECK_THROWS_AS(kappa::parse_operator("eps,P"), kappa::ConfigError);

  // The boost must refuse to act on symbols.
  CHECK_THROWS_AS(apply_op(OperatorExpr::generator(Gen::N),
                           Element::coordinate_t(), 1.0),
                  kappa::ConfigError);
}

TEST_SUITE_END();
