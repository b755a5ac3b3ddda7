#pragma once

#include <string>
#include <vector>

#include "kappa/common.hpp"

namespace kappa {

// One additive term of the symbolic algebra:
//
//   coeff * alpha^m * e^{i a alpha} * beta^n * e^{i b beta} * e^{-w beta^2}
//
// with m, n >= 0 integers, a, b real, w >= 0. The class of such sums is
// closed under the deformed product, the involution, translation twists and
// the symmetry-generator actions, which is what makes an exact engine
// possible.
struct Term {
  Complex coeff{0.0, 0.0};
  int alpha_power = 0;      // m
  double alpha_freq = 0.0;  // a
  int beta_power = 0;       // n
  double beta_freq = 0.0;   // b
  double beta_width = 0.0;  // w
};

// Finite sum of Terms kept in canonical order: terms sorted lexicographically
// by (m, a, n, b, w), like keys merged (exact on integers, kMergeEps on the
// reals), coefficients below kCoeffDropEps dropped.
class Element {
 public:
  Element() = default;
  explicit Element(std::vector<Term> terms);

  static Element zero();
  static Element constant(Complex c);
  // Time coordinate t: the variable alpha.
  static Element coordinate_t();
  // Space coordinate x: the variable beta.
  static Element coordinate_x();
  // e^{i a alpha} e^{i b beta} e^{-w beta^2}, scaled by c.
  static Element plane_wave(double a, double b, double w = 0.0,
                            Complex c = Complex{1.0, 0.0});

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero(double tol = kCoeffDropEps) const;

  Element& operator+=(const Element& rhs);
  Element& operator-=(const Element& rhs);
  Element& operator*=(Complex scale);

 private:
  void canonicalize();
  std::vector<Term> terms_;
};

Element operator+(Element lhs, const Element& rhs);
Element operator-(Element lhs, const Element& rhs);
Element operator*(Complex scale, Element e);
Element operator*(double scale, Element e);
Element operator-(Element e);

// Deformed (star) product at deformation scale kappa > 0.
Element star_mul(const Element& f, const Element& g, double kappa);

// Involution f -> f*: antilinear, reverses star products.
Element involution(const Element& f, double kappa);

// Translation twist T_gamma: alpha -> alpha + i*gamma. A *-automorphism of
// the deformed product for every real gamma; T_{1/kappa} is the modular
// twist of the trace.
Element translate(const Element& f, double gamma);

// Pointwise evaluation; alpha may be complex (entire in alpha).
Complex eval_point(const Element& f, Complex alpha, double beta);

// Partial derivatives (term-by-term, exact).
Element d_alpha(const Element& f);
Element d_beta(const Element& f);

// Sum of coefficient magnitudes; the scale used by symbolic tolerances.
double coeff_l1(const Element& f);

// Max coefficient distance between canonicalized forms, infinity if the
// term patterns cannot be aligned within tolerance.
double distance(const Element& f, const Element& g);
bool equals_within(const Element& f, const Element& g, double tol);

std::string to_string(const Term& t);
std::string to_string(const Element& f);

// JSON round-trip (array of term objects {"coeff":[re,im],"m":..,"a":..,
// "n":..,"b":..,"w":..} in canonical order).
std::string to_json_string(const Element& f);
Element element_from_json_string(const std::string& text);

}  // namespace kappa
