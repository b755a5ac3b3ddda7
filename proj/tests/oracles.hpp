#pragma once

#include <functional>

#include "kappa/common.hpp"

// Reference implementations used only by tests. Everything here is
// deliberately independent of the engines under test: plain quadrature and
// finite differences against closed-form integrands.
namespace oracle {

using kappa::Complex;
using Field = std::function<Complex(double, double)>;

// Composite 16-point Gauss-Legendre integration of h over [lo, hi].
Complex integrate_gl(const std::function<Complex(double)>& h, double lo,
                     double hi, int panels);

// Deformed product evaluated by direct iterated quadrature:
//   (f*g)(alpha,beta) = (2pi)^{-1} Int dv e^{i alpha v} g(alpha, e^{-v/kappa} beta)
//                                  Int du f(u,beta) e^{-i u v}
// Requires f, g integrable in their first argument over the given boxes.
Complex star_quadrature(const Field& f, const Field& g, double alpha,
                        double beta, double kappa, double u_half_width,
                        double v_half_width, int panels_per_unit = 2);

// m-th derivative at `at` by iterated 4th-order central differences.
Complex fd_derivative(const std::function<Complex(double)>& h, double at,
                      int order, double step);

// Adaptive Simpson quadrature for real integrands.
double simpson_adaptive(const std::function<double(double)>& h, double lo,
                        double hi, double tol);

}  // namespace oracle
