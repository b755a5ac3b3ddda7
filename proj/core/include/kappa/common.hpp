#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

namespace kappa {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kImag{0.0, 1.0};

// Fuzzy-key epsilon used when merging symbolic terms on (a, b, w).
inline constexpr double kMergeEps = 1e-12;
// Terms whose coefficient magnitude falls below this are dropped.
inline constexpr double kCoeffDropEps = 1e-14;

inline double sqrt_two_pi() { return std::sqrt(2.0 * kPi); }

inline bool almost_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

inline bool almost_equal(const Complex& a, const Complex& b, double tol) {
  return std::abs(a - b) <= tol;
}

// Integer power of a complex base (m small and non-negative throughout).
inline Complex ipow(const Complex& z, int m) {
  Complex out{1.0, 0.0};
  for (int k = 0; k < m; ++k) out *= z;
  return out;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out = out * double(n - k + j) / double(j);
  return out;
}

}  // namespace kappa
