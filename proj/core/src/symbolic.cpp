#include "kappa/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "kappa/errors.hpp"

namespace kappa {
namespace {

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ConfigError("kappa must be positive and finite");
}

bool term_key_less(const Term& u, const Term& v) {
  if (u.alpha_power != v.alpha_power) return u.alpha_power < v.alpha_power;
  if (u.alpha_freq != v.alpha_freq) return u.alpha_freq < v.alpha_freq;
  if (u.beta_power != v.beta_power) return u.beta_power < v.beta_power;
  if (u.beta_freq != v.beta_freq) return u.beta_freq < v.beta_freq;
  return u.beta_width < v.beta_width;
}

bool term_key_equal(const Term& u, const Term& v) {
  return u.alpha_power == v.alpha_power && u.beta_power == v.beta_power &&
         u.alpha_freq == v.alpha_freq && u.beta_freq == v.beta_freq &&
         u.beta_width == v.beta_width;
}

// Snap the real keys of all terms to a representative of their kMergeEps
// cluster, so that sorting and merging can use exact comparisons. Clusters
// are chains: consecutive sorted values closer than kMergeEps.
void snap_real_keys(std::vector<Term>& terms, double Term::*field) {
  std::vector<double> vals;
  vals.reserve(terms.size());
  for (const Term& t : terms) vals.push_back(t.*field);
  std::sort(vals.begin(), vals.end());
  std::vector<double> starts;  // first value of each cluster
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (i == 0 || vals[i] - vals[i - 1] > kMergeEps) starts.push_back(vals[i]);
  for (Term& t : terms) {
    auto it = std::upper_bound(starts.begin(), starts.end(), t.*field);
    t.*field = *(it - 1);
  }
}

// Monomial in the intermediate expansion of the product/involution rules:
// q * alpha^p * beta^r * lam^s, with lam the running rescale factor.
struct PMono {
  Complex q;
  int p = 0;
  int r = 0;
  int s = 0;
};

}  // namespace

Element::Element(std::vector<Term> terms) : terms_(std::move(terms)) {
  canonicalize();
}

void Element::canonicalize() {
  for (const Term& t : terms_) {
    if (t.alpha_power < 0 || t.beta_power < 0)
      throw ConfigError("negative monomial power in term");
    if (t.beta_width < 0.0)
      throw ConfigError("negative Gaussian width in term");
  }
  snap_real_keys(terms_, &Term::alpha_freq);
  snap_real_keys(terms_, &Term::beta_freq);
  snap_real_keys(terms_, &Term::beta_width);
  std::sort(terms_.begin(), terms_.end(), term_key_less);
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!merged.empty() && term_key_equal(merged.back(), t))
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) {
                                return std::abs(t.coeff) <= kCoeffDropEps;
                              }),
               merged.end());
  terms_ = std::move(merged);
}

Element Element::zero() { return Element{}; }

Element Element::constant(Complex c) {
  return Element{{Term{c, 0, 0.0, 0, 0.0, 0.0}}};
}

Element Element::coordinate_t() {
  return Element{{Term{{1.0, 0.0}, 1, 0.0, 0, 0.0, 0.0}}};
}

Element Element::coordinate_x() {
  return Element{{Term{{1.0, 0.0}, 0, 0.0, 1, 0.0, 0.0}}};
}

Element Element::plane_wave(double a, double b, double w, Complex c) {
  return Element{{Term{c, 0, a, 0, b, w}}};
}

bool Element::is_zero(double tol) const {
  for (const Term& t : terms_)
    if (std::abs(t.coeff) > tol) return false;
  return true;
}

Element& Element::operator+=(const Element& rhs) {
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  canonicalize();
  return *this;
}

Element& Element::operator-=(const Element& rhs) {
  for (const Term& t : rhs.terms_) {
    Term neg = t;
    neg.coeff = -neg.coeff;
    terms_.push_back(neg);
  }
  canonicalize();
  return *this;
}

Element& Element::operator*=(Complex scale) {
  for (Term& t : terms_) t.coeff *= scale;
  canonicalize();
  return *this;
}

Element operator+(Element lhs, const Element& rhs) { return lhs += rhs; }
Element operator-(Element lhs, const Element& rhs) { return lhs -= rhs; }
Element operator*(Complex scale, Element e) { return e *= scale; }
Element operator*(double scale, Element e) {
  return e *= Complex{scale, 0.0};
}
Element operator-(Element e) { return e *= Complex{-1.0, 0.0}; }

// f * g where f = c1 alpha^{m1} e^{i a1 alpha} h1(beta) and g likewise.
// The product twists g's beta argument by e^{-a/kappa} with a the total
// alpha-frequency flowing past it; alpha powers of f act as derivatives
// (-i d/da)^{m1} on a |-> e^{i a alpha} g(alpha, e^{-a/kappa} beta),
// evaluated at a = a1. The derivative closes on monomials
// q alpha^p beta^r lam^s with lam = e^{-a/kappa}.
Element star_mul(const Element& f, const Element& g, double kappa) {
  require_kappa(kappa);
  std::vector<Term> out;
  for (const Term& tf : f.terms()) {
    for (const Term& tg : g.terms()) {
      std::vector<PMono> monos{PMono{tg.coeff, tg.alpha_power, tg.beta_power,
                                     tg.beta_power}};
      for (int d = 0; d < tf.alpha_power; ++d) {
        std::vector<PMono> next;
        next.reserve(monos.size() * 4);
        for (const PMono& mn : monos) {
          // d/da of lam^s contributes -s/kappa; overall factor -i.
          if (mn.s != 0)
            next.push_back({mn.q * Complex{0.0, double(mn.s) / kappa},
                            mn.p, mn.r, mn.s});
          // e^{i a alpha}: pulls down one alpha.
          next.push_back({mn.q, mn.p + 1, mn.r, mn.s});
          // e^{i b2 lam beta}: pulls down (-b2/kappa) beta lam.
          if (tg.beta_freq != 0.0)
            next.push_back({mn.q * Complex{-tg.beta_freq / kappa, 0.0},
                            mn.p, mn.r + 1, mn.s + 1});
          // e^{-w2 lam^2 beta^2}: pulls down (-2i w2/kappa) beta^2 lam^2.
          if (tg.beta_width != 0.0)
            next.push_back({mn.q * Complex{0.0, -2.0 * tg.beta_width / kappa},
                            mn.p, mn.r + 2, mn.s + 2});
        }
        monos = std::move(next);
      }
      const double lam1 = std::exp(-tf.alpha_freq / kappa);
      for (const PMono& mn : monos) {
        Term t;
        t.coeff = tf.coeff * mn.q * std::pow(lam1, mn.s);
        t.alpha_power = mn.p;
        t.alpha_freq = tf.alpha_freq + tg.alpha_freq;
        t.beta_power = tf.beta_power + mn.r;
        t.beta_freq = tf.beta_freq + tg.beta_freq * lam1;
        t.beta_width = tf.beta_width + tg.beta_width * lam1 * lam1;
        out.push_back(t);
      }
    }
  }
  return Element{std::move(out)};
}

// Involution: antilinear, and on a pure wave e^{i a alpha} h(beta) it gives
// e^{-i a alpha} conj(h)(e^{a/kappa} beta). Alpha powers again enter through
// derivatives, this time (+i d/da)^m, closing on monomials with
// mu = e^{a/kappa}.
Element involution(const Element& f, double kappa) {
  require_kappa(kappa);
  std::vector<Term> out;
  for (const Term& tf : f.terms()) {
    std::vector<PMono> monos{
        PMono{std::conj(tf.coeff), 0, tf.beta_power, tf.beta_power}};
    for (int d = 0; d < tf.alpha_power; ++d) {
      std::vector<PMono> next;
      next.reserve(monos.size() * 4);
      for (const PMono& mn : monos) {
        // mu^s contributes +s/kappa; overall factor +i.
        if (mn.s != 0)
          next.push_back({mn.q * Complex{0.0, double(mn.s) / kappa},
                          mn.p, mn.r, mn.s});
        // e^{-i a alpha}: pulls down one alpha.
        next.push_back({mn.q, mn.p + 1, mn.r, mn.s});
        // e^{-i b mu beta}: pulls down (+b/kappa) beta mu.
        if (tf.beta_freq != 0.0)
          next.push_back({mn.q * Complex{tf.beta_freq / kappa, 0.0},
                          mn.p, mn.r + 1, mn.s + 1});
        // e^{-w mu^2 beta^2}: pulls down (-2i w/kappa) beta^2 mu^2.
        if (tf.beta_width != 0.0)
          next.push_back({mn.q * Complex{0.0, -2.0 * tf.beta_width / kappa},
                          mn.p, mn.r + 2, mn.s + 2});
      }
      monos = std::move(next);
    }
    const double mu1 = std::exp(tf.alpha_freq / kappa);
    for (const PMono& mn : monos) {
      Term t;
      t.coeff = mn.q * std::pow(mu1, mn.s);
      t.alpha_power = mn.p;
      t.alpha_freq = -tf.alpha_freq;
      t.beta_power = mn.r;
      t.beta_freq = -tf.beta_freq * mu1;
      t.beta_width = tf.beta_width * mu1 * mu1;
      out.push_back(t);
    }
  }
  return Element{std::move(out)};
}

// T_gamma: alpha -> alpha + i gamma. e^{i a alpha} picks up e^{-a gamma};
// alpha^m expands binomially in (alpha + i gamma).
Element translate(const Element& f, double gamma) {
  std::vector<Term> out;
  for (const Term& tf : f.terms()) {
    const double damp = std::exp(-tf.alpha_freq * gamma);
    for (int k = 0; k <= tf.alpha_power; ++k) {
      Term t = tf;
      t.alpha_power = k;
      t.coeff = tf.coeff * damp * binomial(tf.alpha_power, k) *
                ipow(Complex{0.0, gamma}, tf.alpha_power - k);
      out.push_back(t);
    }
  }
  return Element{std::move(out)};
}

Complex eval_point(const Element& f, Complex alpha, double beta) {
  Complex acc{0.0, 0.0};
  for (const Term& t : f.terms()) {
    Complex v = t.coeff * ipow(alpha, t.alpha_power) *
                std::exp(kImag * t.alpha_freq * alpha);
    v *= ipow(Complex{beta, 0.0}, t.beta_power) *
         std::exp(Complex{-t.beta_width * beta * beta, t.beta_freq * beta});
    acc += v;
  }
  return acc;
}

Element d_alpha(const Element& f) {
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    if (t.alpha_power > 0) {
      Term u = t;
      u.alpha_power -= 1;
      u.coeff *= double(t.alpha_power);
      out.push_back(u);
    }
    if (t.alpha_freq != 0.0) {
      Term u = t;
      u.coeff *= Complex{0.0, t.alpha_freq};
      out.push_back(u);
    }
  }
  return Element{std::move(out)};
}

Element d_beta(const Element& f) {
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    if (t.beta_power > 0) {
      Term u = t;
      u.beta_power -= 1;
      u.coeff *= double(t.beta_power);
      out.push_back(u);
    }
    if (t.beta_freq != 0.0) {
      Term u = t;
      u.coeff *= Complex{0.0, t.beta_freq};
      out.push_back(u);
    }
    if (t.beta_width != 0.0) {
      Term u = t;
      u.beta_power += 1;
      u.coeff *= -2.0 * t.beta_width;
      out.push_back(u);
    }
  }
  return Element{std::move(out)};
}

double coeff_l1(const Element& f) {
  double acc = 0.0;
  for (const Term& t : f.terms()) acc += std::abs(t.coeff);
  return acc;
}

double distance(const Element& f, const Element& g) {
  Element diff = f - g;
  double worst = 0.0;
  for (const Term& t : diff.terms()) worst = std::max(worst, std::abs(t.coeff));
  return worst;
}

bool equals_within(const Element& f, const Element& g, double tol) {
  return distance(f, g) <= tol;
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+")
     << t.coeff.imag() << "i)";
  if (t.alpha_power > 0) os << "*alpha^" << t.alpha_power;
  if (t.alpha_freq != 0.0) os << "*exp(" << t.alpha_freq << "i*alpha)";
  if (t.beta_power > 0) os << "*beta^" << t.beta_power;
  if (t.beta_freq != 0.0) os << "*exp(" << t.beta_freq << "i*beta)";
  if (t.beta_width != 0.0) os << "*exp(-" << t.beta_width << "*beta^2)";
  return os.str();
}

std::string to_string(const Element& f) {
  if (f.terms().empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < f.terms().size(); ++i) {
    if (i) out += " + ";
    out += to_string(f.terms()[i]);
  }
  return out;
}

std::string to_json_string(const Element& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Term& t : f.terms()) {
    arr.push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}},
                   {"m", t.alpha_power},
                   {"a", t.alpha_freq},
                   {"n", t.beta_power},
                   {"b", t.beta_freq},
                   {"w", t.beta_width}});
  }
  return arr.dump();
}

Element element_from_json_string(const std::string& text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FileFormatError(std::string("bad element JSON: ") + e.what());
  }
  if (!arr.is_array()) throw FileFormatError("element JSON must be an array");
  std::vector<Term> terms;
  for (const auto& j : arr) {
    try {
      Term t;
      t.coeff = Complex{j.at("coeff").at(0).get<double>(),
                        j.at("coeff").at(1).get<double>()};
      t.alpha_power = j.at("m").get<int>();
      t.alpha_freq = j.at("a").get<double>();
      t.beta_power = j.at("n").get<int>();
      t.beta_freq = j.at("b").get<double>();
      t.beta_width = j.at("w").get<double>();
      terms.push_back(t);
    } catch (const nlohmann::json::exception& e) {
      throw FileFormatError(std::string("bad term object: ") + e.what());
    }
  }
  return Element{std::move(terms)};
}

}  // namespace kappa
