#include <cmath>
#include <random>

#include <doctest.h>

#include "kappa/errors.hpp"
#include "kappa/symbolic.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using kappa::Complex;
using kappa::Element;
using kappa::Term;
using kappa::kImag;

namespace {

Element single(Complex c, int m, double a, int n, double b, double w) {
  return Element{{Term{c, m, a, n, b, w}}};
}

}  // namespace

TEST_SUITE_BEGIN("symbolic");

TEST_CASE("quadrature oracle integrates a Gaussian exactly enough") {
  auto gauss = [](double x) { return Complex{std::exp(-x * x), 0.0}; };
  const Complex got = oracle::integrate_gl(gauss, -7.0, 7.0, 14);
  CHECK(std::abs(got - Complex{std::sqrt(kappa::kPi), 0.0}) < 1e-12);
}

TEST_CASE("finite-difference oracle differentiates sin") {
  auto f = [](double x) { return Complex{std::sin(x), 0.0}; };
  const Complex d1 = oracle::fd_derivative(f, 0.4, 1, 1e-3);
  const Complex d2 = oracle::fd_derivative(f, 0.4, 2, 1e-3);
  CHECK(std::abs(d1 - Complex{std::cos(0.4), 0.0}) < 1e-10);
  CHECK(std::abs(d2 + Complex{std::sin(0.4), 0.0}) < 1e-7);
}

TEST_CASE("adaptive Simpson reference") {
  auto f = [](double x) { return std::exp(-x * x); };
  CHECK(std::abs(oracle::simpson_adaptive(f, -8.0, 8.0, 1e-10) -
                 std::sqrt(kappa::kPi)) < 1e-9);
}

TEST_CASE("coordinate products and commutator at several kappa") {
  for (double kp : {0.5, 1.0, 2.0, 10.0}) {
    const Element t = Element::coordinate_t();
    const Element x = Element::coordinate_x();

    Element tx = star_mul(t, x, kp);
    Element expected_tx = single({1.0, 0.0}, 1, 0.0, 1, 0.0, 0.0) +
                          single(kImag / kp, 0, 0.0, 1, 0.0, 0.0);
    CHECK(kappa::distance(tx, expected_tx) <= 1e-12);

    Element xt = star_mul(x, t, kp);
    CHECK(kappa::distance(xt, single({1.0, 0.0}, 1, 0.0, 1, 0.0, 0.0)) <=
          1e-12);

    // [t, x] = (i/kappa) x
    Element comm = tx - xt;
    CHECK(kappa::distance(comm, (kImag / kp) * x) <= 1e-12);

    CHECK(kappa::distance(star_mul(t, t, kp),
                          single({1.0, 0.0}, 2, 0.0, 0, 0.0, 0.0)) <= 1e-12);
    CHECK(kappa::distance(star_mul(x, x, kp),
                          single({1.0, 0.0}, 0, 0.0, 2, 0.0, 0.0)) <= 1e-12);
  }
}

TEST_CASE("plane wave times beta profile: the rescale is e^{-a/kappa}") {
  const double kp = 1.7, a = 0.9;
  Element f = Element::plane_wave(a, 0.0, 0.0);
  Element got = star_mul(f, Element::coordinate_x(), kp);
  Element expected =
      single(Complex{std::exp(-a / kp), 0.0}, 0, a, 1, 0.0, 0.0);
  CHECK(kappa::distance(got, expected) <= 1e-12);

  // Reverse order twists by g's frequency instead.
  Element got2 = star_mul(Element::coordinate_x(), f, kp);
  CHECK(kappa::distance(got2, single({1.0, 0.0}, 0, a, 1, 0.0, 0.0)) <= 1e-12);
}

TEST_CASE("alpha powers act as derivatives: finite-difference cross-check") {
  const double kp = 1.3;
  const Term g{Complex{0.8, -0.1}, 1, -0.5, 2, -0.7, 0.2};
  const double a1 = 0.6, b1 = 0.4, w1 = 0.3;
  const Complex alpha{0.35, 0.0};
  const double beta = -0.6;

  for (int m : {1, 2, 3}) {
    Element f = single({1.0, 0.0}, m, a1, 0, b1, w1);
    const Complex direct =
        eval_point(star_mul(f, Element{{g}}, kp), alpha, beta);

    auto wave_product = [&](double s) {
      Element fs = single({1.0, 0.0}, 0, s, 0, b1, w1);
      return eval_point(star_mul(fs, Element{{g}}, kp), alpha, beta);
    };
    const Complex viaFD =
        kappa::ipow(Complex{0.0, -1.0}, m) *
        oracle::fd_derivative(wave_product, a1, m, 2e-2);
    CHECK(std::abs(direct - viaFD) <= 2e-5 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("associativity on random elements") {
  std::mt19937 rng(20260816);
  for (int trial = 0; trial < 20; ++trial) {
    const double kp = (trial % 2) ? 0.8 : 1.6;
    Element f = testutil::random_element(rng);
    Element g = testutil::random_element(rng);
    Element h = testutil::random_element(rng);
    Element lhs = star_mul(star_mul(f, g, kp), h, kp);
    Element rhs = star_mul(f, star_mul(g, h, kp), kp);
    const double scale =
        std::max({1.0, kappa::coeff_l1(lhs), kappa::coeff_l1(rhs)});
    CHECK(kappa::distance(lhs, rhs) <= 1e-10 * scale);
  }
}

TEST_CASE("involution: pinned values") {
  const double kp = 2.0;
  const Element t = Element::coordinate_t();
  const Element x = Element::coordinate_x();
  CHECK(kappa::distance(involution(t, kp), t) <= 1e-12);
  CHECK(kappa::distance(involution(x, kp), x) <= 1e-12);

  // (t x)* = t x + (i/kappa) x  for the plain monomial alpha beta.
  Element axb = single({1.0, 0.0}, 1, 0.0, 1, 0.0, 0.0);
  Element expected = axb + (kImag / kp) * x;
  CHECK(kappa::distance(involution(axb, kp), expected) <= 1e-12);
}

TEST_CASE("involution via finite differences on alpha powers") {
  const double kp = 0.9;
  const double a1 = -0.7, b1 = 0.5, w1 = 0.25;
  const Complex c{0.6, 0.3};
  const Complex alpha{0.2, 0.0};
  const double beta = 0.8;
  for (int m : {1, 2}) {
    Element f = single(c, m, a1, 1, b1, w1);
    const Complex direct = eval_point(involution(f, kp), alpha, beta);
    auto wave_inv = [&](double s) {
      Element fs = single(c, 0, s, 1, b1, w1);
      return eval_point(involution(fs, kp), alpha, beta);
    };
    const Complex viaFD = kappa::ipow(Complex{0.0, 1.0}, m) *
                          oracle::fd_derivative(wave_inv, a1, m, 2e-2);
    CHECK(std::abs(direct - viaFD) <= 2e-5 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("involution is an antilinear anti-homomorphism and involutive") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const double kp = 0.6 + 0.4 * trial;
    Element f = testutil::random_element(rng);
    Element g = testutil::random_element(rng);

    // (f g)* = g* f*
    Element lhs = involution(star_mul(f, g, kp), kp);
    Element rhs = star_mul(involution(g, kp), involution(f, kp), kp);
    double scale = std::max({1.0, kappa::coeff_l1(lhs), kappa::coeff_l1(rhs)});
    CHECK(kappa::distance(lhs, rhs) <= 1e-10 * scale);

    // f** = f
    Element twice = involution(involution(f, kp), kp);
    CHECK(kappa::distance(twice, f) <= 1e-10 * std::max(1.0, kappa::coeff_l1(f)));

    // (c f)* = conj(c) f*
    const Complex cc{0.3, -1.1};
    CHECK(kappa::distance(involution(cc * f, kp),
                          std::conj(cc) * involution(f, kp)) <=
          1e-10 * std::max(1.0, kappa::coeff_l1(f)));
  }
}

TEST_CASE("translation twist: pinned values, automorphism, group law") {
  const double kp = 1.4;
  const Element t = Element::coordinate_t();

  // T_gamma t = t + i gamma
  Element got = translate(t, 0.3);
  CHECK(kappa::distance(got, t + Element::constant(Complex{0.0, 0.3})) <=
        1e-12);

  // On a plane wave the twist is the damping e^{-a gamma}.
  Element pw = Element::plane_wave(0.8, -0.2, 0.1);
  Element tpw = translate(pw, 0.5);
  CHECK(kappa::distance(tpw, Element::plane_wave(0.8, -0.2, 0.1,
                                                 Complex{std::exp(-0.4), 0.0}))
        <= 1e-12);

  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Element f = testutil::random_element(rng);
    Element g = testutil::random_element(rng);
    const double gamma = -0.8 + 0.2 * trial;

    // Automorphism of the deformed product.
    Element lhs = translate(star_mul(f, g, kp), gamma);
    Element rhs = star_mul(translate(f, gamma), translate(g, gamma), kp);
    double scale = std::max({1.0, kappa::coeff_l1(lhs), kappa::coeff_l1(rhs)});
    CHECK(kappa::distance(lhs, rhs) <= 1e-10 * scale);

    // Group law and inverse.
    Element two = translate(translate(f, gamma), 0.35);
    CHECK(kappa::distance(two, translate(f, gamma + 0.35)) <=
          1e-10 * std::max(1.0, kappa::coeff_l1(f)));

    // Interplay with the involution: (T_gamma f)* = T_{-gamma}(f*).
    Element star_of_shift = involution(translate(f, gamma), kp);
    Element shift_of_star = translate(involution(f, kp), -gamma);
    CHECK(kappa::distance(star_of_shift, shift_of_star) <=
          1e-10 * std::max(1.0, kappa::coeff_l1(f)));
  }
}

TEST_CASE("translation matches complex-argument evaluation") {
  std::mt19937 rng(123);
  Element f = testutil::random_element(rng, 4);
  const double gamma = 0.45;
  for (double alpha : {-1.0, 0.2, 1.3}) {
    for (double beta : {-0.7, 0.5}) {
      const Complex via_translate =
          eval_point(translate(f, gamma), Complex{alpha, 0.0}, beta);
      const Complex via_eval = eval_point(f, Complex{alpha, gamma}, beta);
      CHECK(std::abs(via_translate - via_eval) <= 1e-12);
    }
  }
}

TEST_CASE("derivatives against finite differences") {
  std::mt19937 rng(5);
  Element f = testutil::random_element(rng, 4);
  const double beta = 0.3;
  auto along_alpha = [&](double s) {
    return eval_point(f, Complex{s, 0.0}, beta);
  };
  const Complex fd = oracle::fd_derivative(along_alpha, 0.7, 1, 1e-3);
  CHECK(std::abs(eval_point(d_alpha(f), Complex{0.7, 0.0}, beta) - fd) <=
        1e-9);

  auto along_beta = [&](double s) {
    return eval_point(f, Complex{0.7, 0.0}, s);
  };
  const Complex fdb = oracle::fd_derivative(along_beta, beta, 1, 1e-3);
  CHECK(std::abs(eval_point(d_beta(f), Complex{0.7, 0.0}, beta) - fdb) <=
        1e-9);
}

TEST_CASE("canonical form merges nearby keys and drops dust") {
  Term t1{Complex{1.0, 0.0}, 0, 0.5, 0, 0.0, 0.0};
  Term t2{Complex{2.0, 0.0}, 0, 0.5 + 1e-13, 0, 0.0, 0.0};
  Element e{{t1, t2}};
  REQUIRE(e.size() == 1);
  CHECK(std::abs(e.terms()[0].coeff - Complex{3.0, 0.0}) <= 1e-12);

  Term tiny{Complex{1e-15, 0.0}, 1, 0.0, 0, 0.0, 0.0};
  CHECK(Element{{tiny}}.is_zero());
}

TEST_CASE("JSON round-trip preserves canonical order") {
  std::mt19937 rng(42);
  Element f = testutil::random_element(rng, 5);
  Element back = kappa::element_from_json_string(kappa::to_json_string(f));
  CHECK(kappa::distance(f, back) == 0.0);
  REQUIRE(back.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(f.terms()[i].alpha_power == back.terms()[i].alpha_power);
    CHECK(f.terms()[i].beta_width == back.terms()[i].beta_width);
  }
}

TEST_CASE("invalid inputs raise typed errors") {
  CHECK_THROWS_AS((Element{{Term{{1.0, 0.0}, -1, 0.0, 0, 0.0, 0.0}}}),
                  kappa::ConfigError);
  CHECK_THROWS_AS((Element{{Term{{1.0, 0.0}, 0, 0.0, 0, 0.0, -0.5}}}),
                  kappa::ConfigError);
  CHECK_THROWS_AS(star_mul(Element::coordinate_t(), Element::coordinate_x(),
                           -1.0),
                  kappa::ConfigError);
  CHECK_THROWS_AS(kappa::element_from_json_string("{\"not\":\"array\"}"),
                  kappa::FileFormatError);
  CHECK_THROWS_AS(kappa::element_from_json_string("[{\"m\":1}]"),
                  kappa::FileFormatError);
}

TEST_SUITE_END();
