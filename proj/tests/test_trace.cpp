#include <cmath>
#include <vector>

#include <doctest.h>

#include "kappa/errors.hpp"
#include "kappa/trace.hpp"

using kappa::Complex;
using kappa::GridAlgebra;
using kappa::GridForm;
using kappa::GridSpec;
using kappa::SpectralGrid;

namespace {

// Compactly supported spectra keep the four-fold product supports inside
// the v box: widths sum to well under the half-width of 6.
// The star's v-Simpson error is the accuracy bottleneck for the cocycle
// identities (bump profiles carry large fourth derivatives), so the v axis
// gets the fine spacing.
GridSpec trace_spec() {
  GridSpec sp;
  sp.v_min = -6.0;
  sp.v_max = 6.0;
  sp.v_cells = 384;
  sp.beta_cells = 256;
  return sp;
}

GridAlgebra trace_alg(double kappa) {
  GridAlgebra alg;
  alg.kappa = kappa;
  alg.spec = trace_spec();
  return alg;
}

struct Fixture {
  SpectralGrid b1, b2, b3, b4, g5;

  explicit Fixture(const GridSpec& sp)
      : b1(kappa::make_bump(sp, 1.0, 0.05, 0.8, 0.2, 1.0)),
        b2(kappa::make_bump(sp, 0.8, -0.1, 0.7, -0.3, 0.9)),
        b3(kappa::make_bump(sp, 1.2, 0.0, 0.9, 0.1, 1.1)),
        b4(kappa::make_bump(sp, 0.9, 0.1, 0.6, 0.0, 1.0)),
        g5(kappa::make_gaussian(sp, 1.0, 0.0, 0.12, 0.25, 1.0)) {}
};

}  // namespace

TEST_SUITE_BEGIN("trace");

TEST_CASE("graded trace reads the top coefficient and guards degrees") {
  const GridAlgebra alg = trace_alg(1.0);
  const Fixture fx(alg.spec);

  const GridForm top = kappa::basis_form(alg, kappa::kMaskTop, fx.b1);
  const Complex got = kappa::graded_trace(alg, top);
  CHECK(std::abs(got - kappa::lebesgue_integral(fx.b1)) <= 1e-14);

  const GridForm two = kappa::basis_form(alg, kappa::kMaskDx | kappa::kMaskPsiPlus,
                                         fx.b2);
  CHECK_THROWS_AS(kappa::graded_trace(alg, two), kappa::WrongDegree);
  CHECK_THROWS_AS(kappa::closedness_defect(alg, top), kappa::WrongDegree);
}

TEST_CASE("integrals of exact forms vanish") {
  for (double kv : {0.8, 1.0, 2.0}) {
    CAPTURE(kv);
    const GridAlgebra alg = trace_alg(kv);
    const Fixture fx(alg.spec);

    const std::vector<GridForm> rhos = {
        kappa::basis_form(alg, kappa::kMaskDx | kappa::kMaskPsiPlus, fx.b1),
        kappa::basis_form(alg, kappa::kMaskDx | kappa::kMaskPsiMinus, fx.b2),
        kappa::basis_form(alg, kappa::kMaskPsiPlus | kappa::kMaskPsiMinus,
                          fx.b3),
        kappa::add(alg,
                   kappa::basis_form(alg, kappa::kMaskDx | kappa::kMaskPsiMinus,
                                     fx.g5),
                   kappa::basis_form(alg,
                                     kappa::kMaskPsiPlus | kappa::kMaskPsiMinus,
                                     fx.b4))};
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      CAPTURE(i);
      const double defect = kappa::closedness_defect(alg, rhos[i]);
      CHECK(defect <= 1e-5 * std::max(1.0, kappa::form_norm(alg, rhos[i])));
    }
  }
}

TEST_CASE("the functional is twisted-tracial on top forms") {
  const GridAlgebra alg = trace_alg(1.0);
  const Fixture fx(alg.spec);

  const GridForm omega = kappa::basis_form(alg, kappa::kMaskTop, fx.b2);
  const Complex lhs =
      kappa::graded_trace(alg, kappa::right_mul(alg, omega, fx.b1));
  const Complex rhs = kappa::graded_trace(
      alg, kappa::left_mul(alg, kappa::grid_translate(fx.b1, 1.0 / alg.kappa),
                           omega));
  const double budget =
      1e-5 * std::max(1.0, kappa::grid_l1(fx.b1) * kappa::grid_l1(fx.b2));
  CHECK(std::abs(lhs - rhs) <= budget);
}

TEST_CASE("the character is twisted-cyclic with sign -1") {
  const GridAlgebra alg = trace_alg(1.0);
  const Fixture fx(alg.spec);

  const kappa::PhiResult phi_a =
      kappa::cocycle_phi_full(alg, fx.b1, fx.b2, fx.b3, fx.b4);
  const auto [defect, scale] =
      kappa::cyclicity_defect(alg, fx.b1, fx.b2, fx.b3, fx.b4);
  CAPTURE(phi_a.value.real());
  CAPTURE(phi_a.value.imag());
  CAPTURE(defect);
  CAPTURE(scale);
  REQUIRE(scale > 1e-3);
  REQUIRE(std::abs(phi_a.value) > 1e-5);
  CHECK(defect <= 1e-4 * scale);
  // The identity fails without the modular twist, so the twist carries
  // real content: the untwisted pairing misses by orders of magnitude more.
  const Complex untwisted = kappa::cocycle_phi(alg, fx.b4, fx.b1, fx.b2, fx.b3);
  CHECK(std::abs(phi_a.value + untwisted) > 50.0 * defect);
}

TEST_CASE("the character is a twisted hochschild cocycle") {
  const GridAlgebra alg = trace_alg(1.0);
  const Fixture fx(alg.spec);

  const auto [defect, scale] =
      kappa::hochschild_defect(alg, fx.b1, fx.b2, fx.b3, fx.b4, fx.g5);
  CAPTURE(scale);
  CAPTURE(defect);
  REQUIRE(scale > 5e-5);
  CHECK(defect <= 1e-4 * scale);
}

TEST_SUITE_END();
