#pragma once

#include <map>
#include <vector>

#include "kappa/errors.hpp"
#include "kappa/hopf.hpp"
#include "kappa/symbolic.hpp"

namespace kappa {

// Three-dimensional covariant first-order calculus over the deformed
// algebra. The module of forms is free over the algebra with basis
// generators dx < psi+ < psi- (encoded as mask bits), all of them d-closed,
// and every form is written with basis factors on the LEFT and function
// coefficients on the RIGHT:  omega = sum_B  B * f_B.
//
// The exterior differential on functions is
//   d f = dx   * (einv P f)
//       + psi+ * (-i kappa/2 (einv - 1) f)
//       + psi- * ( i/(2 kappa) einv P^2 f + i kappa/2 (e - 1) f)
// with e the grading automorphism T_{1/kappa} and einv its inverse. The
// bimodule structure transporting coefficients from the left of a basis
// generator to the right is
//   f dx   = dx (f)            + psi- ( i/kappa P f)
//   f psi+ = psi+ (einv f)     + dx   (2i/kappa einv P f)
//                              - psi- (1/kappa^2 einv P^2 f)
//   f psi- = psi- (e f)
// Together these satisfy the graded Leibniz rule and d^2 = 0; the top
// basis form dx^psi+^psi- is exactly central.
//
// Everything below is generic over a coefficient backend A providing:
//   typename A::Fn, A.kappa, A.strict,
//   zero(), add(f,g), scale(c,f), star(f,g),
//   apply_P(f), apply_eps(f,power), distance(f,g), norm(f).

inline constexpr int kMaskDx = 1;
inline constexpr int kMaskPsiPlus = 2;
inline constexpr int kMaskPsiMinus = 4;
inline constexpr int kMaskTop = kMaskDx | kMaskPsiPlus | kMaskPsiMinus;

inline int mask_degree(int mask) {
  int n = 0;
  for (int b = 0; b < 3; ++b) n += (mask >> b) & 1;
  return n;
}

// Name of a basis monomial, e.g. "dx^psi+". Empty mask gives "1".
std::string basis_name(int mask);
// Inverse of basis_name; throws ConfigError on unknown names.
int basis_mask(const std::string& name);

template <class A>
class Form {
 public:
  using Fn = typename A::Fn;

  explicit Form(int degree) : degree_(degree) {
    if (degree < 0 || degree > 3)
      throw WrongDegree("form degree must be between 0 and 3");
  }

  int degree() const { return degree_; }
  const std::map<int, Fn>& comps() const { return comps_; }

  // Accumulate coeff onto the component at mask.
  void accumulate(const A& alg, int mask, const Fn& coeff) {
    if (mask_degree(mask) != degree_)
      throw WrongDegree("component mask does not match form degree");
    auto it = comps_.find(mask);
    if (it == comps_.end())
      comps_.emplace(mask, coeff);
    else
      it->second = alg.add(it->second, coeff);
  }

  Fn component(const A& alg, int mask) const {
    auto it = comps_.find(mask);
    return it == comps_.end() ? alg.zero() : it->second;
  }

 private:
  int degree_;
  std::map<int, Fn> comps_;
};

template <class A>
Form<A> zero_form(const A&, int degree) {
  return Form<A>(degree);
}

template <class A>
Form<A> function_form(const A& alg, const typename A::Fn& f) {
  Form<A> out(0);
  out.accumulate(alg, 0, f);
  return out;
}

template <class A>
Form<A> basis_form(const A& alg, int mask, const typename A::Fn& coeff) {
  Form<A> out(mask_degree(mask));
  out.accumulate(alg, mask, coeff);
  return out;
}

template <class A>
Form<A> add(const A& alg, Form<A> lhs, const Form<A>& rhs) {
  if (lhs.degree() != rhs.degree())
    throw WrongDegree("cannot add forms of different degree");
  for (const auto& [mask, coeff] : rhs.comps()) lhs.accumulate(alg, mask, coeff);
  return lhs;
}

template <class A>
Form<A> scale(const A& alg, Complex c, const Form<A>& f) {
  Form<A> out(f.degree());
  for (const auto& [mask, coeff] : f.comps())
    out.accumulate(alg, mask, alg.scale(c, coeff));
  return out;
}

template <class A>
Form<A> sub(const A& alg, const Form<A>& lhs, const Form<A>& rhs) {
  return add(alg, lhs, scale(alg, Complex{-1.0, 0.0}, rhs));
}

namespace detail {

// Sign of appending one generator bit to a sorted basis word, or 0 if the
// bit is already present: move the new generator left past every generator
// of the word that is strictly greater.
inline int append_sign(int mask, int bit) {
  if (mask & bit) return 0;
  int swaps = 0;
  for (int b = bit << 1; b <= kMaskPsiMinus; b <<= 1)
    if (mask & b) ++swaps;
  return (swaps % 2) ? -1 : 1;
}

// One-generator coefficients of the exterior differential.
template <class A>
std::vector<std::pair<int, typename A::Fn>> d_components(
    const A& alg, const typename A::Fn& f) {
  using Fn = typename A::Fn;
  const double kp = alg.kappa;
  std::vector<std::pair<int, Fn>> out;
  // dx: einv P f
  out.emplace_back(kMaskDx, alg.apply_eps(alg.apply_P(f), -1));
  // psi+: -i kappa/2 (einv f - f)
  Fn shift_down = alg.add(alg.apply_eps(f, -1), alg.scale({-1.0, 0.0}, f));
  out.emplace_back(kMaskPsiPlus, alg.scale({0.0, -0.5 * kp}, shift_down));
  // psi-: i/(2 kappa) einv P^2 f + i kappa/2 (e f - f)
  Fn p2 = alg.apply_eps(alg.apply_P(alg.apply_P(f)), -1);
  Fn shift_up = alg.add(alg.apply_eps(f, 1), alg.scale({-1.0, 0.0}, f));
  out.emplace_back(kMaskPsiMinus,
                   alg.add(alg.scale({0.0, 0.5 / kp}, p2),
                           alg.scale({0.0, 0.5 * kp}, shift_up)));
  return out;
}

// f theta = sum theta' (M f): transport one function past one generator.
template <class A>
std::vector<std::pair<int, typename A::Fn>> push_through_generator(
    const A& alg, const typename A::Fn& f, int bit) {
  using Fn = typename A::Fn;
  const double kp = alg.kappa;
  std::vector<std::pair<int, Fn>> out;
  switch (bit) {
    case kMaskDx: {
      out.emplace_back(kMaskDx, f);
      out.emplace_back(kMaskPsiMinus,
                       alg.scale({0.0, 1.0 / kp}, alg.apply_P(f)));
      break;
    }
    case kMaskPsiPlus: {
      Fn einv_f = alg.apply_eps(f, -1);
      Fn einv_pf = alg.apply_eps(alg.apply_P(f), -1);
      Fn einv_ppf = alg.apply_eps(alg.apply_P(alg.apply_P(f)), -1);
      out.emplace_back(kMaskPsiPlus, einv_f);
      out.emplace_back(kMaskDx, alg.scale({0.0, 2.0 / kp}, einv_pf));
      out.emplace_back(kMaskPsiMinus,
                       alg.scale({-1.0 / (kp * kp), 0.0}, einv_ppf));
      break;
    }
    case kMaskPsiMinus: {
      out.emplace_back(kMaskPsiMinus, alg.apply_eps(f, 1));
      break;
    }
    default:
      throw ConfigError("push through unknown generator");
  }
  return out;
}

// f (c1 ^ c2 ^ ...) = sum_B B (g_B): transport f past a whole basis word.
// Output masks carry the permutation sign folded into the coefficient.
template <class A>
std::vector<std::pair<int, typename A::Fn>> push_through_word(
    const A& alg, const typename A::Fn& f, int word_mask) {
  using Fn = typename A::Fn;
  std::vector<std::pair<int, Fn>> acc{{0, f}};
  for (int bit = kMaskDx; bit <= kMaskPsiMinus; bit <<= 1) {
    if (!(word_mask & bit)) continue;
    std::vector<std::pair<int, Fn>> next;
    for (const auto& [mask, g] : acc) {
      for (const auto& [theta, h] : push_through_generator(alg, g, bit)) {
        const int sign = append_sign(mask, theta);
        if (sign == 0) continue;
        next.emplace_back(mask | theta,
                          sign > 0 ? h : alg.scale({-1.0, 0.0}, h));
      }
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace detail

// Exterior differential: d(B f) = (-1)^{|B|} B ^ d f, with d-closed basis.
// There is no degree four: d of a top form is the zero top form.
template <class A>
Form<A> exterior_d(const A& alg, const Form<A>& omega) {
  if (omega.degree() >= 3) return Form<A>(3);
  Form<A> out(omega.degree() + 1);
  const double par = (omega.degree() % 2) ? -1.0 : 1.0;
  for (const auto& [mask, f] : omega.comps()) {
    for (const auto& [theta, df] : detail::d_components(alg, f)) {
      const int sign = detail::append_sign(mask, theta);
      if (sign == 0) continue;
      out.accumulate(alg, mask | theta,
                     alg.scale({par * sign, 0.0}, df));
    }
  }
  return out;
}

// Wedge product. Degree overflow yields the zero form of the formal degree
// unless the backend is strict, in which case it throws DegreeOverflow.
template <class A>
Form<A> wedge(const A& alg, const Form<A>& lhs, const Form<A>& rhs) {
  const int deg = lhs.degree() + rhs.degree();
  if (deg > 3) {
    if (alg.strict)
      throw DegreeOverflow("wedge product exceeds the top degree");
    return Form<A>(3);  // identically zero in degree > 3; report as empty top
  }
  Form<A> out(deg);
  for (const auto& [bmask, f] : lhs.comps()) {
    for (const auto& [cmask, g] : rhs.comps()) {
      // B f ^ C g = sum over f C = sum theta (h):  (B ^ theta) (h g)
      for (const auto& [theta, h] : detail::push_through_word(alg, f, cmask)) {
        // sign of interleaving theta after B
        int sign = 1;
        int combined = bmask;
        bool dead = false;
        for (int bit = kMaskDx; bit <= kMaskPsiMinus; bit <<= 1) {
          if (!(theta & bit)) continue;
          const int s = detail::append_sign(combined, bit);
          if (s == 0) {
            dead = true;
            break;
          }
          sign *= s;
          combined |= bit;
        }
        if (dead) continue;
        out.accumulate(alg, combined,
                       alg.scale({double(sign), 0.0}, alg.star(h, g)));
      }
    }
  }
  return out;
}

// f omega: transport a function in from the left.
template <class A>
Form<A> left_mul(const A& alg, const typename A::Fn& f, const Form<A>& omega) {
  return wedge(alg, function_form(alg, f), omega);
}

// omega f: multiply every coefficient from the right.
template <class A>
Form<A> right_mul(const A& alg, const Form<A>& omega,
                  const typename A::Fn& f) {
  Form<A> out(omega.degree());
  for (const auto& [mask, g] : omega.comps())
    out.accumulate(alg, mask, alg.star(g, f));
  return out;
}

template <class A>
double form_distance(const A& alg, const Form<A>& lhs, const Form<A>& rhs) {
  if (lhs.degree() != rhs.degree())
    throw WrongDegree("cannot compare forms of different degree");
  double worst = 0.0;
  for (int mask = 0; mask <= kMaskTop; ++mask) {
    if (mask_degree(mask) != lhs.degree()) continue;
    const bool in_l = lhs.comps().count(mask) > 0;
    const bool in_r = rhs.comps().count(mask) > 0;
    if (!in_l && !in_r) continue;
    worst = std::max(worst, alg.distance(lhs.component(alg, mask),
                                         rhs.component(alg, mask)));
  }
  return worst;
}

template <class A>
double form_norm(const A& alg, const Form<A>& omega) {
  double acc = 0.0;
  for (const auto& [mask, f] : omega.comps()) acc += alg.norm(f);
  return acc;
}

// Exact symbolic coefficient backend.
struct SymbolicAlgebra {
  using Fn = Element;
  double kappa = 1.0;
  bool strict = false;

  Fn zero() const { return Element::zero(); }
  Fn add(Fn f, const Fn& g) const { return f += g; }
  Fn scale(Complex c, Fn f) const { return f *= c; }
  Fn star(const Fn& f, const Fn& g) const { return star_mul(f, g, kappa); }
  Fn apply_P(const Fn& f) const { return act_P(f); }
  Fn apply_eps(const Fn& f, int power) const {
    return act_eps(f, kappa, power);
  }
  double distance(const Fn& f, const Fn& g) const {
    return kappa::distance(f, g);
  }
  double norm(const Fn& f) const { return coeff_l1(f); }
};

}  // namespace kappa
