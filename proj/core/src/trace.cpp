#include "kappa/trace.hpp"

#include <cmath>

#include "kappa/errors.hpp"

namespace kappa {
namespace {

GridForm three_form(const GridAlgebra& alg, const SpectralGrid& f0,
                    const SpectralGrid& f1, const SpectralGrid& f2,
                    const SpectralGrid& f3) {
  const GridForm d1 = exterior_d(alg, function_form(alg, f1));
  const GridForm d2 = exterior_d(alg, function_form(alg, f2));
  const GridForm d3 = exterior_d(alg, function_form(alg, f3));
  return left_mul(alg, f0, wedge(alg, d1, wedge(alg, d2, d3)));
}

PhiResult trace_of(const GridAlgebra& alg, const GridForm& omega) {
  PhiResult out{Complex{0.0, 0.0}, 0.0};
  for (const auto& [mask, coeff] : omega.comps()) {
    if (mask != kMaskTop)
      throw WrongDegree("3-form carries a non-top component");
    out.value += lebesgue_integral(coeff);
    out.mass += lebesgue_abs_mass(coeff);
  }
  (void)alg;
  return out;
}

}  // namespace

Complex graded_trace(const GridAlgebra& alg, const GridForm& omega) {
  if (omega.degree() != 3)
    throw WrongDegree("graded trace is defined on 3-forms only");
  return trace_of(alg, omega).value;
}

double closedness_defect(const GridAlgebra& alg, const GridForm& rho) {
  if (rho.degree() != 2)
    throw WrongDegree("closedness defect takes a 2-form");
  return std::abs(graded_trace(alg, exterior_d(alg, rho)));
}

PhiResult cocycle_phi_full(const GridAlgebra& alg, const SpectralGrid& f0,
                           const SpectralGrid& f1, const SpectralGrid& f2,
                           const SpectralGrid& f3) {
  return trace_of(alg, three_form(alg, f0, f1, f2, f3));
}

Complex cocycle_phi(const GridAlgebra& alg, const SpectralGrid& f0,
                    const SpectralGrid& f1, const SpectralGrid& f2,
                    const SpectralGrid& f3) {
  return cocycle_phi_full(alg, f0, f1, f2, f3).value;
}

DefectReport cyclicity_defect(const GridAlgebra& alg, const SpectralGrid& f0,
                              const SpectralGrid& f1, const SpectralGrid& f2,
                              const SpectralGrid& f3) {
  const PhiResult a = cocycle_phi_full(alg, f0, f1, f2, f3);
  const PhiResult b = cocycle_phi_full(
      alg, grid_translate(f3, 1.0 / alg.kappa), f0, f1, f2);
  return {std::abs(a.value + b.value), std::max(a.mass, b.mass)};
}

DefectReport hochschild_defect(const GridAlgebra& alg, const SpectralGrid& f0,
                               const SpectralGrid& f1, const SpectralGrid& f2,
                               const SpectralGrid& f3,
                               const SpectralGrid& f4) {
  const PhiResult t0 = cocycle_phi_full(alg, alg.star(f0, f1), f2, f3, f4);
  const PhiResult t1 = cocycle_phi_full(alg, f0, alg.star(f1, f2), f3, f4);
  const PhiResult t2 = cocycle_phi_full(alg, f0, f1, alg.star(f2, f3), f4);
  const PhiResult t3 = cocycle_phi_full(alg, f0, f1, f2, alg.star(f3, f4));
  const PhiResult t4 = cocycle_phi_full(
      alg, alg.star(grid_translate(f4, 1.0 / alg.kappa), f0), f1, f2, f3);
  const Complex sum =
      t0.value - t1.value + t2.value - t3.value + t4.value;
  const double scale = std::max(
      {t0.mass, t1.mass, t2.mass, t3.mass, t4.mass});
  return {std::abs(sum), scale};
}

}  // namespace kappa
