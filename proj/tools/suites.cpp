#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include <json.hpp>

#include "kappa/calculus.hpp"
#include "kappa/errors.hpp"
#include "kappa/hopf.hpp"
#include "kappa/rieffel.hpp"
#include "kappa/symbolic.hpp"
#include "kappa/trace.hpp"

namespace kappa::suites {
namespace {

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  double uni(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  }
  Complex coeff() { return {uni(-1.0, 1.0), uni(-1.0, 1.0)}; }
};

Element random_element(Rng& r) {
  std::vector<Term> terms;
  const int n = r.integer(1, 3);
  for (int k = 0; k < n; ++k) {
    Term t;
    t.coeff = r.coeff();
    t.alpha_power = r.integer(0, 2);
    t.alpha_freq = r.uni(-1.2, 1.2);
    t.beta_power = r.integer(0, 2);
    t.beta_freq = r.uni(-1.2, 1.2);
    t.beta_width = r.integer(0, 1) ? r.uni(0.15, 0.5) : 0.0;
    terms.push_back(t);
  }
  return Element(std::move(terms));
}

double rel(const Element& a, const Element& b) {
  return distance(a, b) / std::max({1.0, coeff_l1(a), coeff_l1(b)});
}

void bound(SuiteReport& rep, std::string name, double residual, double tol) {
  rep.checks.push_back(
      {std::move(name), residual <= tol, residual, tol, "<="});
}

void order(SuiteReport& rep, std::string name, double ratio, double floor) {
  rep.checks.push_back({std::move(name), ratio >= floor, ratio, floor, ">="});
}

// ------------------------------------------------------------- symbolic

SuiteReport suite_symbolic(const SuiteConfig& cfg) {
  SuiteReport rep{"symbolic", {}};
  const double kv = cfg.kappa;
  Rng rng(cfg.seed);

  const Element t = Element::coordinate_t();
  const Element x = Element::coordinate_x();
  const Element one = Element::constant(Complex{1.0, 0.0});
  const Element tx_expected =
      Element({Term{Complex{1.0, 0.0}, 1, 0.0, 1, 0.0, 0.0}}) +
      Complex{0.0, 1.0 / kv} * x;
  const Element xt_expected =
      Element({Term{Complex{1.0, 0.0}, 1, 0.0, 1, 0.0, 0.0}});

  bound(rep, "coordinate products",
        std::max(distance(star_mul(t, x, kv), tx_expected),
                 distance(star_mul(x, t, kv), xt_expected)),
        1e-12);
  bound(rep, "commutator",
        distance(star_mul(t, x, kv) - star_mul(x, t, kv),
                 Complex{0.0, 1.0 / kv} * x),
        1e-12);

  double worst = 0.0;
  for (int it = 0; it < 12; ++it) {
    const Element f = random_element(rng), g = random_element(rng),
                  h = random_element(rng);
    worst = std::max(worst, rel(star_mul(star_mul(f, g, kv), h, kv),
                                star_mul(f, star_mul(g, h, kv), kv)));
  }
  bound(rep, "associativity (12 random triples)", worst, cfg.tol_symbolic);

  worst = 0.0;
  double worst_double = 0.0;
  for (int it = 0; it < 8; ++it) {
    const Element f = random_element(rng), g = random_element(rng);
    worst = std::max(
        worst, rel(involution(star_mul(f, g, kv), kv),
                   star_mul(involution(g, kv), involution(f, kv), kv)));
    worst_double =
        std::max(worst_double, rel(involution(involution(f, kv), kv), f));
  }
  bound(rep, "involution antihomomorphism", worst, cfg.tol_symbolic);
  bound(rep, "double involution", worst_double, cfg.tol_symbolic);

  worst = 0.0;
  double worst_group = 0.0;
  for (int it = 0; it < 8; ++it) {
    const Element f = random_element(rng), g = random_element(rng);
    const double ga = rng.uni(-0.7, 0.7), gb = rng.uni(-0.7, 0.7);
    worst = std::max(worst,
                     rel(translate(star_mul(f, g, kv), ga),
                         star_mul(translate(f, ga), translate(g, ga), kv)));
    worst_group = std::max(
        worst_group, rel(translate(translate(f, ga), gb), translate(f, ga + gb)));
  }
  bound(rep, "translation automorphism", worst, cfg.tol_symbolic);
  bound(rep, "translation group law", worst_group, cfg.tol_symbolic);

  const Element f = random_element(rng);
  bound(rep, "unit law",
        std::max(rel(star_mul(one, f, kv), f), rel(star_mul(f, one, kv), f)),
        cfg.tol_symbolic);
  return rep;
}

// ----------------------------------------------------------------- hopf

std::vector<std::string> words_up_to_three() {
  std::vector<std::string> out = {""};
  for (int len = 1; len <= 3; ++len)
    for (int bits = 0; bits < (1 << len); ++bits) {
      std::string w;
      for (int p = 0; p < len; ++p) w += (bits >> p) & 1 ? 'x' : 't';
      out.push_back(w);
    }
  return out;
}

SuiteReport suite_hopf(const SuiteConfig& cfg) {
  SuiteReport rep{"hopf", {}};
  const double kv = cfg.kappa;
  Rng rng(cfg.seed);

  double worst = 0.0;
  for (Gen g : {Gen::E, Gen::P, Gen::Eps}) {
    for (int it = 0; it < 8; ++it) {
      const Element f = random_element(rng), h = random_element(rng);
      const Element lhs =
          apply_op(OperatorExpr::generator(g), star_mul(f, h, kv), kv);
      worst = std::max(worst, rel(lhs, twisted_product_action(g, f, h, kv)));
    }
  }
  bound(rep, "module algebra law (E, P, eps)", worst, cfg.tol_symbolic);

  const auto words = words_up_to_three();
  const auto relations = defining_relations(kv);
  const char* names[] = {"[E,P] relation", "[N,E] relation", "[N,eps] relation",
                         "[N,P] relation"};
  for (std::size_t r = 0; r < relations.size(); ++r) {
    double w = 0.0;
    for (const std::string& word : words) {
      const PolyWord pw = PolyWord::monomial(word);
      const PolyWord l = apply_op(relations[r].first, pw, kv);
      const PolyWord rr = apply_op(relations[r].second, pw, kv);
      w = std::max(w, word_distance(l, rr) /
                          std::max(1.0, word_distance(l, PolyWord::zero())));
    }
    bound(rep, names[r], w, cfg.tol_symbolic);
  }

  // Boost respects the defining ideal: N applied to both presentations of
  // the commutation relation gives the same normal-ordered symbol.
  const OperatorExpr boost = OperatorExpr::generator(Gen::N);
  const PolyWord tx = concat(PolyWord::letter_t(), PolyWord::letter_x());
  const PolyWord xt_side =
      concat(PolyWord::letter_x(), PolyWord::letter_t()) +
      Complex{0.0, 1.0 / kv} * PolyWord::letter_x();
  bound(rep, "boost well-defined on the relation ideal",
        rel(word_eval(apply_op(boost, tx, kv), kv),
            word_eval(apply_op(boost, xt_side, kv), kv)),
        cfg.tol_symbolic);

  double w = 0.0;
  const OperatorExpr round_trip = OperatorExpr::compose(
      {OperatorExpr::generator(Gen::Eps), OperatorExpr::generator(Gen::EpsInv)});
  for (const std::string& word : words) {
    const PolyWord pw = PolyWord::monomial(word);
    w = std::max(w, word_distance(apply_op(round_trip, pw, kv), pw));
  }
  bound(rep, "grading automorphism inverse", w, cfg.tol_symbolic);
  return rep;
}

// ------------------------------------------------------------- calculus

SuiteReport suite_calculus(const SuiteConfig& cfg) {
  SuiteReport rep{"calculus", {}};
  SymbolicAlgebra alg;
  alg.kappa = cfg.kappa;
  Rng rng(cfg.seed);
  const double kv = cfg.kappa;
  const Element t = Element::coordinate_t();
  const Element x = Element::coordinate_x();
  const Element one = Element::constant(Complex{1.0, 0.0});
  const Complex ik{0.0, 1.0 / kv};

  auto basis1 = [&](int mask) { return basis_form(alg, mask, one); };
  using FormS = Form<SymbolicAlgebra>;
  auto fd = [&](const FormS& a, const FormS& b) {
    return form_distance(alg, a, b);
  };

  double worst = 0.0;
  // x dx = dx x + (i/k) psi-
  worst = std::max(
      worst, fd(left_mul(alg, x, basis1(kMaskDx)),
                add(alg, basis_form(alg, kMaskDx, x),
                    scale(alg, ik, basis1(kMaskPsiMinus)))));
  // t dx = dx t
  worst = std::max(worst, fd(left_mul(alg, t, basis1(kMaskDx)),
                             basis_form(alg, kMaskDx, t)));
  // x psi+ = psi+ x + (2i/k) dx
  worst = std::max(
      worst, fd(left_mul(alg, x, basis1(kMaskPsiPlus)),
                add(alg, basis_form(alg, kMaskPsiPlus, x),
                    scale(alg, 2.0 * ik, basis1(kMaskDx)))));
  // t psi+ = psi+ t - (i/k) psi+
  worst = std::max(
      worst, fd(left_mul(alg, t, basis1(kMaskPsiPlus)),
                add(alg, basis_form(alg, kMaskPsiPlus, t),
                    scale(alg, -ik, basis1(kMaskPsiPlus)))));
  // x psi- = psi- x
  worst = std::max(worst, fd(left_mul(alg, x, basis1(kMaskPsiMinus)),
                             basis_form(alg, kMaskPsiMinus, x)));
  // t psi- = psi- t + (i/k) psi-
  worst = std::max(
      worst, fd(left_mul(alg, t, basis1(kMaskPsiMinus)),
                add(alg, basis_form(alg, kMaskPsiMinus, t),
                    scale(alg, ik, basis1(kMaskPsiMinus)))));
  bound(rep, "six bimodule generator relations", worst, 1e-12);

  double worst_dd = 0.0, worst_leib = 0.0;
  for (int it = 0; it < 6; ++it) {
    const Element f = random_element(rng), g = random_element(rng);
    const FormS df = exterior_d(alg, function_form(alg, f));
    const FormS ddf = exterior_d(alg, df);
    worst_dd = std::max(
        worst_dd, form_norm(alg, ddf) / std::max(1.0, form_norm(alg, df)));
    const FormS lhs = exterior_d(alg, function_form(alg, star_mul(f, g, kv)));
    const FormS rhs = add(alg, right_mul(alg, df, g),
                          left_mul(alg, f, exterior_d(alg, function_form(alg, g))));
    worst_leib = std::max(worst_leib, fd(lhs, rhs) /
                                          std::max(1.0, form_norm(alg, lhs)));
  }
  bound(rep, "d squared vanishes", worst_dd, cfg.tol_symbolic);
  bound(rep, "graded Leibniz rule", worst_leib, cfg.tol_symbolic);

  const Element f = random_element(rng);
  const FormS top = basis1(kMaskTop);
  bound(rep, "top form centrality",
        fd(left_mul(alg, f, top), right_mul(alg, top, f)), 1e-12);
  return rep;
}

// ----------------------------------------------------------------- grid

double sup_abs(const SpectralGrid& g) {
  double mx = 0.0;
  for (const Complex& c : g.values()) mx = std::max(mx, std::abs(c));
  return mx;
}

Complex gauss_position(double amp, double v0, double sv, double b0, double sb,
                       Complex alpha, double beta) {
  const Complex expo =
      Complex{0.0, v0} * alpha - 0.5 * sv * sv * alpha * alpha;
  const double bf = (beta - b0) / sb;
  return amp * sv * std::exp(expo) * std::exp(-0.5 * bf * bf);
}

SuiteReport suite_grid(const SuiteConfig& cfg) {
  SuiteReport rep{"grid", {}};
  const double kv = cfg.kappa;
  const GridSpec& sp = cfg.spec;

  const SpectralGrid f = make_gaussian(sp, 1.1, 0.25, 0.5, 0.3, 1.0);
  const SpectralGrid g = make_gaussian(sp, 0.9, -0.2, 0.45, -0.25, 0.9);

  // Closed-form point evaluation at exact beta nodes.
  double worst = 0.0;
  for (double beta : {0.0, sp.beta_at(sp.beta_nodes() / 3)}) {
    for (double al : {0.0, 0.8, -1.3}) {
      const Complex got = grid_eval(f, Complex{al, 0.0}, beta);
      const Complex want =
          gauss_position(1.1, 0.25, 0.5, 0.3, 1.0, Complex{al, 0.0}, beta);
      worst = std::max(worst, std::abs(got - want));
    }
  }
  bound(rep, "closed-form evaluation", worst / (1.1 * 0.5), 1e-8);

  const double mass = std::abs(
      lebesgue_integral(f) -
      2.0 * kPi * 1.1 * 1.0 * std::exp(-0.25 * 0.25 / (2.0 * 0.5 * 0.5)));
  bound(rep, "closed-form integral", mass / (2.0 * kPi * 1.1), 1e-9);

  const double gamma = 0.4;
  const SpectralGrid tf = grid_translate(f, gamma);
  worst = 0.0;
  for (double al : {0.0, 0.6}) {
    const Complex got = grid_eval(tf, Complex{al, 0.0}, 0.5);
    const Complex want = grid_eval(f, Complex{al, gamma}, 0.5);
    worst = std::max(worst, std::abs(got - want));
  }
  bound(rep, "translation is an exact row twist", worst, 1e-12);

  // Self-convergence of the deformed product under v refinement.
  std::vector<double> errs;
  std::vector<SpectralGrid> stars;
  std::vector<GridSpec> specs;
  for (int cells : {64, 128, 256}) {
    GridSpec s = sp;
    s.v_cells = cells;
    s.beta_cells = cells;
    s.validate();
    const SpectralGrid a = make_gaussian(s, 1.1, 0.25, 0.5, 0.3, 1.0);
    const SpectralGrid b = make_gaussian(s, 0.9, -0.2, 0.45, -0.25, 0.9);
    stars.push_back(grid_star(a, b, kv));
    specs.push_back(s);
  }
  for (int lvl = 0; lvl < 2; ++lvl) {
    double err = 0.0;
    for (int j = 0; j < specs[lvl].v_nodes(); ++j)
      for (int k = 0; k < specs[lvl].beta_nodes(); ++k)
        err = std::max(err, std::abs(stars[lvl].at(j, k) -
                                     stars[lvl + 1].at(2 * j, 2 * k)));
    errs.push_back(err);
  }
  order(rep, "product self-convergence ratio 64/128", errs[0] / errs[1], 4.0);
  bound(rep, "product refinement defect at 128", errs[1],
        cfg.tol_grid * std::max(1.0, sup_abs(stars[2])));

  // Twisted trace property at the configured resolution.
  const SpectralGrid b1 = make_bump(sp, 1.0, 0.05, 0.8, 0.2, 1.0);
  const SpectralGrid b2 = make_bump(sp, 0.8, -0.1, 0.7, -0.3, 0.9);
  const Complex tr_lhs = lebesgue_integral(grid_star(b1, b2, kv));
  const Complex tr_rhs =
      lebesgue_integral(grid_star(grid_translate(b2, 1.0 / kv), b1, kv));
  bound(rep, "twisted trace identity", std::abs(tr_lhs - tr_rhs),
        cfg.tol_grid * std::max(1.0, grid_l1(b1) * grid_l1(b2)));

  // Involution closed form; the budget follows the quartic interpolation
  // error of the rescaled beta reads.
  const SpectralGrid nf = make_gaussian(sp, 1.0, 0.0, 0.3, 0.2, 1.0);
  const SpectralGrid adj = grid_involution(nf, kv);
  worst = 0.0;
  for (int j = 0; j < sp.v_nodes(); j += 5) {
    const double v = sp.v_at(j);
    for (int k = sp.beta_nodes() / 4; k <= 3 * sp.beta_nodes() / 4; k += 7) {
      const double beta = sp.beta_at(k);
      const double bp = std::exp(-v / kv) * beta;
      const double vf = std::exp(-(-v - 0.0) * (-v) / (2.0 * 0.3 * 0.3));
      const double bf2 = (bp - 0.2) / 1.0;
      const Complex want{vf * std::exp(-0.5 * bf2 * bf2), 0.0};
      worst = std::max(worst, std::abs(adj.at(j, k) - std::conj(want)));
    }
  }
  const double interp_scale = std::pow(sp.dbeta() / 0.37, 4.0);
  bound(rep, "involution closed form", worst,
        std::max(0.5 * cfg.tol_grid, 0.3 * interp_scale));

  SpectralGrid sf = grid_star(f, g, kv);
  bound(rep, "leakage accounting on benign fields", sf.leakage(), 1e-8);
  return rep;
}

// ---------------------------------------------------------------- trace

GridSpec trace_spec() {
  GridSpec sp;
  sp.v_min = -6.0;
  sp.v_max = 6.0;
  sp.v_cells = 384;
  sp.beta_cells = 256;
  return sp;
}

SuiteReport suite_trace(const SuiteConfig& cfg) {
  SuiteReport rep{"trace", {}};
  GridAlgebra alg;
  alg.kappa = cfg.kappa;
  alg.spec = trace_spec();

  const SpectralGrid b1 = make_bump(alg.spec, 1.0, 0.05, 0.8, 0.2, 1.0);
  const SpectralGrid b2 = make_bump(alg.spec, 0.8, -0.1, 0.7, -0.3, 0.9);
  const SpectralGrid b3 = make_bump(alg.spec, 1.2, 0.0, 0.9, 0.1, 1.1);
  const SpectralGrid b4 = make_bump(alg.spec, 0.9, 0.1, 0.6, 0.0, 1.0);

  double worst = 0.0;
  const int masks[] = {kMaskDx | kMaskPsiPlus, kMaskDx | kMaskPsiMinus,
                       kMaskPsiPlus | kMaskPsiMinus};
  for (int m = 0; m < 3; ++m) {
    const GridForm rho =
        basis_form(alg, masks[m], m == 0 ? b1 : (m == 1 ? b2 : b3));
    const double defect = closedness_defect(alg, rho);
    worst = std::max(
        worst, defect / std::max(1.0, form_norm(alg, exterior_d(alg, rho))));
  }
  bound(rep, "graded trace closedness", worst, 1e-5);

  const GridForm top = basis_form(alg, kMaskTop, b1);
  const Complex lhs = graded_trace(alg, right_mul(alg, top, b2));
  const Complex rhs =
      graded_trace(alg, left_mul(alg, grid_translate(b2, 1.0 / cfg.kappa), top));
  bound(rep, "graded trace twisted traciality", std::abs(lhs - rhs),
        1e-5 * std::max(1.0, grid_l1(b1) * grid_l1(b2)));

  const DefectReport cyc = cyclicity_defect(alg, b1, b2, b3, b4);
  bound(rep, "twisted cyclicity (sign -1)", cyc.defect,
        1e-4 * std::max(cyc.scale, 1e-6));

  const SpectralGrid g5 = make_gaussian(alg.spec, 1.0, 0.0, 0.12, 0.25, 1.0);
  const DefectReport hoch = hochschild_defect(alg, b1, b2, b3, b4, g5);
  bound(rep, "twisted Hochschild five-term identity", hoch.defect,
        1e-4 * std::max(hoch.scale, 1e-6));
  return rep;
}

// -------------------------------------------------------------- rieffel

SuiteReport suite_rieffel(const SuiteConfig& cfg) {
  SuiteReport rep{"rieffel", {}};
  const double kv = cfg.kappa;
  GridSpec sp;  // pinned 256^2 box; the oscillatory lattices assume it

  const SpectralGrid f = make_gaussian(sp, 1.1, 0.25, 0.5, 0.3, 1.0);
  const SpectralGrid g = make_gaussian(sp, 0.9, -0.2, 0.45, -0.25, 0.9);

  RieffelOptions opt;
  opt.beta_lo = 32;
  opt.beta_hi = 224;
  opt.beta_stride = 6;

  const SpectralGrid ref = grid_star(f, g, kv);
  const RowSpectra rows = rieffel_star_rows(f, g, kv, opt);
  bound(rep, "oscillatory product matches spectral convolution",
        rows_sup_distance(rows, ref), cfg.tol_grid * std::max(1.0, sup_abs(ref)));

  const SpectralGrid nf = make_gaussian(sp, 1.0, 0.0, 0.3, 0.2, 1.0);
  RieffelOptions iopt = opt;
  iopt.alpha_half = 18.0;
  const SpectralGrid iref = grid_involution(nf, kv);
  const RowSpectra irows = rieffel_involution_rows(nf, kv, iopt);
  bound(rep, "oscillatory involution matches spectral one",
        rows_sup_distance(irows, iref),
        cfg.tol_grid * std::max(1.0, sup_abs(iref)));

  const EtaParams x{0.3, -0.25};
  const SpectralGrid lhs = eta_act(x, grid_star(f, g, kv));
  const SpectralGrid rhs = grid_star(eta_act(x, f), eta_act(x, g), kv);
  bound(rep, "phase-dilation automorphism", grid_sup_distance(lhs, rhs),
        cfg.tol_grid * std::max(1.0, sup_abs(lhs)));

  const EtaParams twice = j_map(j_map(EtaParams{0.9, -1.3}, kv), kv);
  bound(rep, "skew map nilpotency", std::abs(twice.r) + std::abs(twice.s),
        0.0);
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"symbolic", "hopf",
                                                 "calculus", "grid",
                                                 "trace",    "rieffel"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (!(cfg.kappa > 0.0)) throw ConfigError("kappa must be positive");
  cfg.spec.validate();
  if (name == "symbolic") return suite_symbolic(cfg);
  if (name == "hopf") return suite_hopf(cfg);
  if (name == "calculus") return suite_calculus(cfg);
  if (name == "grid") return suite_grid(cfg);
  if (name == "trace") return suite_trace(cfg);
  if (name == "rieffel") return suite_rieffel(cfg);
  throw ConfigError("unknown suite '" + name + "'");
}

std::string to_json(const std::vector<SuiteReport>& reports,
                    const SuiteConfig& cfg) {
  nlohmann::json root;
  root["schema"] = "kappa-forge/1";
  root["kappa"] = cfg.kappa;
  root["seed"] = cfg.seed;
  root["strict"] = cfg.strict;
  root["grid"] = {{"v_min", cfg.spec.v_min},       {"v_max", cfg.spec.v_max},
                  {"beta_min", cfg.spec.beta_min}, {"beta_max", cfg.spec.beta_max},
                  {"v_cells", cfg.spec.v_cells},   {"beta_cells", cfg.spec.beta_cells}};
  root["tolerances"] = {{"symbolic", cfg.tol_symbolic},
                        {"grid", cfg.tol_grid}};
  bool all = true;
  nlohmann::json suites = nlohmann::json::array();
  for (const SuiteReport& rep : reports) {
    nlohmann::json sj;
    sj["suite"] = rep.suite;
    sj["pass"] = rep.pass();
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : rep.checks) {
      checks.push_back({{"name", c.name},
                        {"pass", c.pass},
                        {"residual", c.residual},
                        {"tolerance", c.tolerance},
                        {"relation", c.relation}});
    }
    sj["checks"] = std::move(checks);
    suites.push_back(std::move(sj));
    all = all && rep.pass();
  }
  root["suites"] = std::move(suites);
  root["pass"] = all;
  return root.dump(2) + "\n";
}

std::string to_csv(const std::vector<SuiteReport>& reports) {
  std::string out = "suite,check,relation,residual,tolerance,pass\n";
  char buf[64];
  for (const SuiteReport& rep : reports)
    for (const CheckResult& c : rep.checks) {
      out += rep.suite + "," + c.name + "," + c.relation + ",";
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,", c.residual, c.tolerance);
      out += buf;
      out += c.pass ? "true\n" : "false\n";
    }
  return out;
}

}  // namespace kappa::suites
