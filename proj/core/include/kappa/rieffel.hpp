#pragma once

#include <vector>

#include "kappa/grid.hpp"

namespace kappa {

// Deformation presentation of the algebra: the product is an oscillatory
// integral over the translation group action
//   (f x g)(alpha, beta) =
//     (2 pi)^{-1} Int du dv f(alpha + u/kappa, beta) g(alpha, e^{-v} beta)
//                 e^{-i u v},
// evaluated entirely in position space on trapezoid lattices (the phase
// images sit far outside the spectral box, where nothing lives), with the
// residual v integral done by Simpson. This is an independent computational
// route to the same product as the spectral twisted convolution.
struct RieffelOptions {
  double alpha_half = 12.0;  // half-width of the position lattice
  double u_half = 16.0;      // half-width of the u/kappa offset lattice
  double step = 0.25;        // lattice spacing (alpha and u/kappa alike)
  int beta_lo = 0;           // first beta column to produce
  int beta_hi = -1;          // last beta column (-1 means the final node)
  int beta_stride = 1;       // produce every stride-th column
};

// Spectral rows on a subset of beta columns of the ambient grid.
struct RowSpectra {
  GridSpec spec;
  std::vector<int> columns;
  std::vector<std::vector<Complex>> rows;  // rows[c][j], j over v nodes
};

RowSpectra rieffel_star_rows(const SpectralGrid& f, const SpectralGrid& g,
                             double kappa, const RieffelOptions& opt = {});

// The involution in the same presentation:
//   f^*(alpha, beta) = (kappa / 2 pi) Int du1 du2
//       conj f(alpha + u1, e^{-u2} beta) e^{-i kappa u1 u2}.
RowSpectra rieffel_involution_rows(const SpectralGrid& f, double kappa,
                                   const RieffelOptions& opt = {});

// sup |rows - reference| over the sampled nodes.
double rows_sup_distance(const RowSpectra& rows, const SpectralGrid& ref);

// Embed sampled rows into a grid (zeros on columns that were not produced).
SpectralGrid rows_to_grid(const RowSpectra& rows);

// Translation-group element: alpha shift r, beta log-scale s.
struct EtaParams {
  double r = 0.0;
  double s = 0.0;
};

// eta_{(r,s)} f = f(alpha + r, e^{-s} beta); spectrally e^{i r v} times a
// beta rescale. An automorphism of both the pointwise and the deformed
// product.
SpectralGrid eta_act(const EtaParams& x, const SpectralGrid& f,
                     bool strict = false);

// The skew form driving the deformation pairs (r, s) against (s/kappa, 0);
// j_map is nilpotent, which the acceptance gate checks exactly.
EtaParams j_map(const EtaParams& x, double kappa);

}  // namespace kappa
