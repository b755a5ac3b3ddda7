#pragma once

#include "kappa/calculus.hpp"
#include "kappa/grid.hpp"

namespace kappa {

using GridForm = Form<GridAlgebra>;

// Lebesgue functional of the top coefficient of a 3-form. Together with
// exterior_d this is a closed graded trace: integrals of exact forms vanish
// because every boundary operator either kills the v = 0 spectral row
// exactly (the modular flow parts) or integrates a derivative to zero.
Complex graded_trace(const GridAlgebra& alg, const GridForm& omega);

// |graded_trace(d rho)| for a 2-form rho; the closedness defect.
double closedness_defect(const GridAlgebra& alg, const GridForm& rho);

// Character of the calculus: phi(f0, f1, f2, f3) =
// graded_trace(f0 . d f1 ^ d f2 ^ d f3).
Complex cocycle_phi(const GridAlgebra& alg, const SpectralGrid& f0,
                    const SpectralGrid& f1, const SpectralGrid& f2,
                    const SpectralGrid& f3);

// Value of phi together with the absolute mass the functional integrated;
// the mass is the honest scale for cancellation defects, since phi itself
// is the small remainder of an oscillatory integral.
struct PhiResult {
  Complex value;
  double mass;
};
PhiResult cocycle_phi_full(const GridAlgebra& alg, const SpectralGrid& f0,
                           const SpectralGrid& f1, const SpectralGrid& f2,
                           const SpectralGrid& f3);

// A cancellation defect together with the scale it should be judged against.
struct DefectReport {
  double defect;
  double scale;
};

// Twisted cyclicity phi(f0, f1, f2, f3) = -phi(sigma(f3), f0, f1, f2) with
// sigma the modular translation by 1/kappa. scale = max integrated mass.
DefectReport cyclicity_defect(const GridAlgebra& alg, const SpectralGrid& f0,
                              const SpectralGrid& f1, const SpectralGrid& f2,
                              const SpectralGrid& f3);

// Twisted Hochschild boundary of phi on five arguments:
//   sum_{j=0..3} (-1)^j phi(..., f_j * f_{j+1}, ...)
//   + phi(sigma(f4) * f0, f1, f2, f3).
// defect = |sum|, scale = max integrated mass across the five terms.
DefectReport hochschild_defect(const GridAlgebra& alg, const SpectralGrid& f0,
                               const SpectralGrid& f1, const SpectralGrid& f2,
                               const SpectralGrid& f3, const SpectralGrid& f4);

}  // namespace kappa
