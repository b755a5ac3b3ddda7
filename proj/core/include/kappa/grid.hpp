#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kappa/common.hpp"
#include "kappa/hopf.hpp"

namespace kappa {

// Uniform node grid for the spectral engine. Cell counts must be even
// (composite Simpson) and v = 0 must land exactly on a node: the modular
// twist and the Lebesgue functional both read the v = 0 row exactly.
struct GridSpec {
  double v_min = -8.0;
  double v_max = 8.0;
  double beta_min = -8.0;
  double beta_max = 8.0;
  int v_cells = 256;
  int beta_cells = 256;

  void validate() const;
  int v_nodes() const { return v_cells + 1; }
  int beta_nodes() const { return beta_cells + 1; }
  double dv() const { return (v_max - v_min) / v_cells; }
  double dbeta() const { return (beta_max - beta_min) / beta_cells; }
  double v_at(int j) const { return v_min + j * dv(); }
  double beta_at(int k) const { return beta_min + k * dbeta(); }
  int zero_v_index() const;
  bool symmetric_v() const;
  bool operator==(const GridSpec&) const = default;
};

// Field sampled on the spectral side: values are ftilde(v_j, beta_k) where
// f(alpha, beta) = (2 pi)^{-1/2} Int ftilde(v, beta) e^{i alpha v} dv.
// Row-major, v outer, beta inner. `leakage` accumulates the absolute mass
// the twisted convolution had to drop at grid edges (its honesty meter).
class SpectralGrid {
 public:
  explicit SpectralGrid(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  Complex& at(int j, int k) { return values_[j * spec_.beta_nodes() + k]; }
  const Complex& at(int j, int k) const {
    return values_[j * spec_.beta_nodes() + k];
  }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }

  double leakage() const { return leakage_; }
  void set_leakage(double v) { leakage_ = v; }
  void add_leakage(double v) { leakage_ += v; }

 private:
  GridSpec spec_;
  std::vector<Complex> values_;
  double leakage_ = 0.0;
};

SpectralGrid sample_spectrum(
    const GridSpec& spec, const std::function<Complex(double, double)>& ftilde);

// Gaussian spectrum in v and beta: closed-form position values make these
// the oracle-friendly fixtures.
SpectralGrid make_gaussian(const GridSpec& spec, double amplitude,
                           double v_center, double v_sigma,
                           double beta_center, double beta_sigma);

// Compactly supported bump profile exp(1 - 1/(1-s^2)) in v, Gaussian in
// beta. Exactly zero outside |v - v_center| < v_width.
SpectralGrid make_bump(const GridSpec& spec, double amplitude,
                       double v_center, double v_width, double beta_center,
                       double beta_sigma);

// Narrow v-bump normalized on the grid so that the field is an approximate
// unit for the deformed product; constant in beta.
SpectralGrid unit_approx(const GridSpec& spec, double v_width);

SpectralGrid grid_add(SpectralGrid f, const SpectralGrid& g);
SpectralGrid grid_sub(SpectralGrid f, const SpectralGrid& g);
SpectralGrid grid_scale(Complex c, SpectralGrid f);

// Deformed product as a twisted convolution over the v axis:
//   (f*g)~(w, beta) = (2 pi)^{-1/2} Int dv ftilde(v, beta)
//                                          gtilde(w - v, e^{-v/kappa} beta)
// v offsets are exact node shifts; the beta rescale uses 4-point
// interpolation. Throws SupportOverflow when the essential v-supports
// cannot fit in the box; out-of-box beta reads throw in strict mode and
// otherwise contribute zero plus leakage.
SpectralGrid grid_star(const SpectralGrid& f, const SpectralGrid& g,
                       double kappa, bool strict = false);

// T_gamma on the spectral side: multiply the v_j row by e^{-gamma v_j}.
SpectralGrid grid_translate(const SpectralGrid& f, double gamma);

// E = d/d alpha: multiply the v_j row by (i v_j).
SpectralGrid grid_apply_E(const SpectralGrid& f);

// P = d/d beta: fourth-order finite differences along beta.
SpectralGrid grid_apply_P(const SpectralGrid& f);

// Involution: (f^*)~(v, beta) = conj ftilde(-v, e^{-v/kappa} beta).
SpectralGrid grid_involution(const SpectralGrid& f, double kappa,
                             bool strict = false);

// Operator expressions restricted to grid-representable generators
// (E, P, eps, epsinv, id and their sums/scales/compositions).
SpectralGrid grid_apply_op(const OperatorExpr& op, const SpectralGrid& f,
                           double kappa);

// Position-space evaluation; alpha may be complex. Throws EvalOutOfRange
// when beta lies outside the box.
Complex grid_eval(const SpectralGrid& f, Complex alpha, double beta);

// Int Int f(alpha, beta) d alpha d beta = sqrt(2 pi) Int ftilde(0, beta) d beta.
Complex lebesgue_integral(const SpectralGrid& f);

// sqrt(2 pi) Int |ftilde(0, beta)| d beta: the mass the functional sees
// before cancellation, the natural scale for trace-identity defects.
double lebesgue_abs_mass(const SpectralGrid& f);

// 4-point Lagrange read of spectral row j at an arbitrary beta. Returns
// false (and writes 0) when beta lies outside the box.
bool sample_row(const SpectralGrid& f, int j, double beta, Complex& out);

// Int Int |ftilde| dv dbeta: the scale used by numerical tolerances.
double grid_l1(const SpectralGrid& f);

double grid_sup_distance(const SpectralGrid& f, const SpectralGrid& g);

// Single-file JSON container with a base64 payload of raw little-endian
// (re, im) doubles; exact round-trip. The kappa the field was built with is
// stored alongside the data.
void save_grid(const SpectralGrid& f, const std::string& path, double kappa);
std::pair<SpectralGrid, double> load_grid(const std::string& path);

// Coefficient backend over spectral grids for the differential calculus.
struct GridAlgebra {
  using Fn = SpectralGrid;
  double kappa = 1.0;
  bool strict = false;
  GridSpec spec;

  Fn zero() const { return SpectralGrid(spec); }
  Fn add(Fn f, const Fn& g) const { return grid_add(std::move(f), g); }
  Fn scale(Complex c, Fn f) const { return grid_scale(c, std::move(f)); }
  Fn star(const Fn& f, const Fn& g) const {
    return grid_star(f, g, kappa, strict);
  }
  Fn apply_P(const Fn& f) const { return grid_apply_P(f); }
  Fn apply_eps(const Fn& f, int power) const {
    return grid_translate(f, double(power) / kappa);
  }
  double distance(const Fn& f, const Fn& g) const {
    return grid_l1(grid_sub(f, g));
  }
  double norm(const Fn& f) const { return grid_l1(f); }
};

}  // namespace kappa
