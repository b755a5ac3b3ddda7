#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include <doctest.h>

#include "kappa/calculus.hpp"
#include "kappa/errors.hpp"
#include "kappa/grid.hpp"
#include "oracles.hpp"

using kappa::Complex;
using kappa::GridSpec;
using kappa::SpectralGrid;
using kappa::kImag;

namespace {

// Spectral gaussian A exp(-(v-v0)^2 / 2 sv^2) exp(-(b-b0)^2 / 2 sb^2) and its
// closed-form position-space partner used as the quadrature-oracle input.
struct Gauss {
  double A, v0, sv, b0, sb;

  Complex position(Complex alpha, double beta) const {
    const double db = (beta - b0) / sb;
    return A * sv *
           std::exp(kImag * v0 * alpha - 0.5 * sv * sv * alpha * alpha -
                    Complex{0.5 * db * db, 0.0});
  }
  Complex spectrum(double v, double beta) const {
    const double dv = (v - v0) / sv;
    const double db = (beta - b0) / sb;
    return {A * std::exp(-0.5 * dv * dv - 0.5 * db * db), 0.0};
  }
  SpectralGrid grid(const GridSpec& spec) const {
    return kappa::make_gaussian(spec, A, v0, sv, b0, sb);
  }
  oracle::Field field() const {
    return [*this](double a, double b) { return position(Complex{a, 0.0}, b); };
  }
};

double grid_max_abs(const SpectralGrid& f) {
  double mx = 0.0;
  for (const Complex& c : f.values()) mx = std::max(mx, std::abs(c));
  return mx;
}

GridSpec spec_with(int cells) {
  GridSpec sp;
  sp.v_cells = cells;
  sp.beta_cells = cells;
  return sp;
}

const Gauss kF{1.1, 0.25, 0.5, 0.3, 1.0};
const Gauss kG{0.9, -0.2, 0.45, -0.25, 0.9};

struct Probe {
  double alpha, beta;
};
const std::vector<Probe> kProbes = {{0.0, 0.0},  {0.8, 0.5},  {-0.6, -0.9},
                                    {1.2, 0.3},  {0.4, -1.1}, {-1.4, 0.8}};

std::vector<Complex> star_oracle_at_probes(const Gauss& f, const Gauss& g,
                                           double kappa) {
  std::vector<Complex> out;
  for (const Probe& p : kProbes)
    out.push_back(oracle::star_quadrature(f.field(), g.field(), p.alpha,
                                          p.beta, kappa, 18.0, 8.0, 4));
  return out;
}

double star_probe_error(const SpectralGrid& h,
                        const std::vector<Complex>& reference) {
  double err = 0.0;
  for (std::size_t i = 0; i < kProbes.size(); ++i)
    err = std::max(err, std::abs(kappa::grid_eval(h, {kProbes[i].alpha, 0.0},
                                                  kProbes[i].beta) -
                                 reference[i]));
  return err;
}

}  // namespace

TEST_SUITE_BEGIN("grid");

TEST_CASE("grid spec rejects malformed boxes") {
  GridSpec sp;
  CHECK_NOTHROW(sp.validate());
  CHECK(sp.zero_v_index() == 128);
  CHECK(sp.symmetric_v());

  GridSpec odd = sp;
  odd.v_cells = 255;
  CHECK_THROWS_AS(odd.validate(), kappa::ConfigError);

  GridSpec reversed = sp;
  reversed.beta_min = 9.0;
  CHECK_THROWS_AS(reversed.validate(), kappa::ConfigError);

  GridSpec off_node = sp;
  off_node.v_min = -8.1;
  CHECK_THROWS_AS(off_node.validate(), kappa::ConfigError);

  GridSpec tiny = sp;
  tiny.v_cells = 2;
  CHECK_THROWS_AS(tiny.validate(), kappa::ConfigError);

  GridSpec lopsided = sp;
  lopsided.v_min = -4.0;
  lopsided.v_cells = 192;
  CHECK_NOTHROW(lopsided.validate());
  CHECK(lopsided.zero_v_index() == 64);
  CHECK_FALSE(lopsided.symmetric_v());
}

TEST_CASE("sampled gaussian evaluates to its closed form") {
  const GridSpec sp = spec_with(256);
  const Gauss G{1.3, 0.4, 0.8, -0.3, 1.1};
  const SpectralGrid f = G.grid(sp);

  const std::vector<Complex> alphas = {
      {0.0, 0.0}, {0.7, 0.0}, {-1.2, 0.0}, {0.5, 0.3}, {-0.4, -0.25}};
  // On beta nodes the read is exact and only the v-sum contributes error.
  const std::vector<double> node_betas = {0.0, 0.5, 0.9375, -1.375, 2.25};
  for (Complex a : alphas)
    for (double b : node_betas) {
      const Complex got = kappa::grid_eval(f, a, b);
      const Complex want = G.position(a, b);
      CHECK(std::abs(got - want) <= 1e-10 * G.A * G.sv);
    }
  // Between nodes the cubic interpolation adds an O(dbeta^4) error.
  for (double b : {0.9, -1.4, 2.2}) {
    const Complex got = kappa::grid_eval(f, {0.7, 0.0}, b);
    const Complex want = G.position({0.7, 0.0}, b);
    CHECK(std::abs(got - want) <= 5e-7 * G.A * G.sv);
  }
  CHECK_THROWS_AS(kappa::grid_eval(f, {0.0, 0.0}, 9.0), kappa::EvalOutOfRange);
}

TEST_CASE("translation flow acts as evaluation at complex time") {
  const GridSpec sp = spec_with(256);
  const Gauss G{1.0, 0.3, 0.7, 0.2, 1.2};
  const SpectralGrid f = G.grid(sp);
  const double gamma = 0.35;
  const SpectralGrid tf = kappa::grid_translate(f, gamma);

  for (const Probe& p : kProbes) {
    const Complex lhs = kappa::grid_eval(tf, {p.alpha, 0.0}, p.beta);
    const Complex rhs = kappa::grid_eval(f, {p.alpha, gamma}, p.beta);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }

  // The functional only reads the v = 0 row, which the flow fixes exactly.
  CHECK(std::abs(kappa::lebesgue_integral(tf) - kappa::lebesgue_integral(f)) ==
        0.0);
}

TEST_CASE("energy and momentum actions match closed-form derivatives") {
  const GridSpec sp = spec_with(256);
  const Gauss G{1.2, 0.35, 0.7, -0.2, 1.1};
  const SpectralGrid f = G.grid(sp);

  const SpectralGrid ef = kappa::grid_apply_E(f);
  for (double alpha : {0.0, 0.8, -1.3})
    for (double beta : {0.0, 0.9375, -1.375}) {
      const Complex a{alpha, 0.0};
      // d/dalpha of the closed form: (i v0 - sv^2 alpha) f
      const Complex want =
          (kImag * G.v0 - G.sv * G.sv * a) * G.position(a, beta);
      CHECK(std::abs(kappa::grid_eval(ef, a, beta) - want) <= 1e-9);
    }

  const SpectralGrid pf = kappa::grid_apply_P(f);
  double err = 0.0, scale = 0.0;
  for (int j = 0; j < sp.v_nodes(); ++j)
    for (int k = 0; k < sp.beta_nodes(); ++k) {
      const double b = sp.beta_at(k);
      const Complex want =
          -(b - G.b0) / (G.sb * G.sb) * G.spectrum(sp.v_at(j), b);
      err = std::max(err, std::abs(pf.at(j, k) - want));
      scale = std::max(scale, std::abs(want));
    }
  CHECK(err <= 1e-5 * scale);
}

TEST_CASE("twisted convolution matches direct quadrature") {
  const GridSpec sp = spec_with(128);
  for (double kappa_v : {1.0, 2.0}) {
    CAPTURE(kappa_v);
    const std::vector<Complex> ref = star_oracle_at_probes(kF, kG, kappa_v);
    double scale = 0.0;
    for (const Complex& r : ref) scale = std::max(scale, std::abs(r));
    REQUIRE(scale > 1e-3);

    const SpectralGrid h = kappa::grid_star(kF.grid(sp), kG.grid(sp), kappa_v);
    CHECK(star_probe_error(h, ref) <= 1e-4 * scale);
    CHECK(h.leakage() <= 1e-8);
  }
}

TEST_CASE("twisted convolution converges at better than second order") {
  const double kappa_v = 1.0;
  const std::vector<Complex> ref = star_oracle_at_probes(kF, kG, kappa_v);
  std::vector<double> errs;
  for (int cells : {64, 128, 256}) {
    const GridSpec sp = spec_with(cells);
    errs.push_back(star_probe_error(
        kappa::grid_star(kF.grid(sp), kG.grid(sp), kappa_v), ref));
  }
  CAPTURE(errs[0]);
  CAPTURE(errs[1]);
  CAPTURE(errs[2]);
  CHECK(errs[0] / errs[1] >= 3.0);
  CHECK(errs[1] / errs[2] >= 3.0);
}

TEST_CASE("involution matches its closed form and reverses products") {
  const GridSpec sp = spec_with(256);
  const double kv = 1.0;
  const Gauss G{1.15, 0.25, 0.5, 0.3, 1.0};
  const SpectralGrid f = G.grid(sp);

  const SpectralGrid adj = kappa::grid_involution(f, kv);
  const SpectralGrid want = kappa::sample_spectrum(sp, [&](double v, double b) {
    return std::conj(G.spectrum(-v, std::exp(-v / kv) * b));
  });
  CHECK(kappa::grid_sup_distance(adj, want) <= 2e-5 * G.A);

  // The double involution reads back through the beta rescale, so rows at
  // larger |v| carry compressed beta features; keep the v support narrow
  // enough that the grid can represent the round trip.
  const Gauss N{1.0, 0.0, 0.3, 0.2, 1.0};
  const SpectralGrid nf = N.grid(sp);
  const SpectralGrid twice =
      kappa::grid_involution(kappa::grid_involution(nf, kv), kv);
  CHECK(kappa::grid_sup_distance(twice, nf) <= 1e-4 * N.A);

  const GridSpec sp128 = spec_with(128);
  const SpectralGrid ff = kF.grid(sp128), gg = kG.grid(sp128);
  const SpectralGrid lhs =
      kappa::grid_involution(kappa::grid_star(ff, gg, kv), kv);
  const SpectralGrid rhs = kappa::grid_star(
      kappa::grid_involution(gg, kv), kappa::grid_involution(ff, kv), kv);
  const double scale =
      std::max(grid_max_abs(lhs), grid_max_abs(rhs));
  CHECK(kappa::grid_sup_distance(lhs, rhs) <= 1e-3 * scale);
}

TEST_CASE("modular translation makes the functional twisted-tracial") {
  const GridSpec sp = spec_with(128);
  for (double kv : {1.0, 2.0}) {
    CAPTURE(kv);
    const SpectralGrid f = kF.grid(sp), g = kG.grid(sp);
    const Complex lhs = kappa::lebesgue_integral(kappa::grid_star(f, g, kv));
    const Complex rhs = kappa::lebesgue_integral(
        kappa::grid_star(kappa::grid_translate(g, 1.0 / kv), f, kv));
    const double budget =
        1e-5 * std::max(1.0, kappa::grid_l1(f) * kappa::grid_l1(g));
    CHECK(std::abs(lhs - rhs) <= budget);
    // Plain swapped order must NOT agree: the twist is structural.
    const Complex untwisted =
        kappa::lebesgue_integral(kappa::grid_star(g, f, kv));
    CHECK(std::abs(lhs - untwisted) > 100.0 * budget);
  }
}

TEST_CASE("functional and norms match closed forms") {
  const GridSpec sp = spec_with(256);
  const Gauss G{1.4, 0.3, 0.6, -0.4, 1.1};
  const SpectralGrid f = G.grid(sp);

  const double want_int =
      2.0 * kappa::kPi * G.A * G.sb * std::exp(-0.5 * G.v0 * G.v0 / (G.sv * G.sv));
  CHECK(std::abs(kappa::lebesgue_integral(f) - want_int) <= 1e-9 * want_int);

  const double want_l1 = 2.0 * kappa::kPi * G.A * G.sv * G.sb;
  CHECK(std::abs(kappa::grid_l1(f) - want_l1) <= 1e-8 * want_l1);

  const SpectralGrid bump = kappa::make_bump(sp, 0.8, 0.3, 1.0, 0.1, 0.9);
  const double prof = std::exp(1.0 - 1.0 / (1.0 - 0.09));
  const double want_bump = 2.0 * kappa::kPi * 0.8 * 0.9 * prof;
  CHECK(std::abs(kappa::lebesgue_integral(bump) - want_bump) <=
        1e-9 * want_bump);
}

TEST_CASE("unit approximants reproduce fields increasingly well") {
  const GridSpec sp = spec_with(256);
  const Gauss G{1.0, 0.3, 0.5, -0.2, 1.0};
  const SpectralGrid f = G.grid(sp);
  const double fmax = grid_max_abs(f);

  std::vector<double> errs;
  for (double w : {0.6, 0.3, 0.15}) {
    const SpectralGrid u = kappa::unit_approx(sp, w);
    errs.push_back(
        kappa::grid_sup_distance(kappa::grid_star(u, f, 1.0), f) / fmax);
  }
  CAPTURE(errs[0]);
  CAPTURE(errs[1]);
  CAPTURE(errs[2]);
  CHECK(errs[0] > errs[1]);
  CHECK(errs[1] > errs[2]);
  CHECK(errs[2] <= 0.02);
}

TEST_CASE("grid files round-trip exactly") {
  const GridSpec sp = spec_with(64);
  const Gauss G{1.2, 0.3, 0.6, 0.1, 1.0};
  SpectralGrid f = G.grid(sp);
  f.set_leakage(3.25e-9);

  const std::string path = "kappa_grid_roundtrip.json";
  kappa::save_grid(f, path, 1.7);
  const auto [back, kv] = kappa::load_grid(path);
  CHECK(kv == 1.7);
  CHECK(back.spec() == sp);
  CHECK(back.leakage() == f.leakage());
  bool identical = back.values().size() == f.values().size();
  for (std::size_t i = 0; identical && i < f.values().size(); ++i)
    identical = back.values()[i] == f.values()[i];
  CHECK(identical);
  std::remove(path.c_str());

  const std::string bad = "kappa_grid_bad.json";
  {
    std::FILE* out = std::fopen(bad.c_str(), "w");
    std::fputs("this is not a grid file", out);
    std::fclose(out);
  }
  CHECK_THROWS_AS(kappa::load_grid(bad), kappa::FileFormatError);
  {
    std::FILE* out = std::fopen(bad.c_str(), "w");
    std::fputs("{\"schema\":\"kappa-forge/grid-1\",\"encoding\":\"base64\","
               "\"endianness\":\"little\",\"kappa\":1.0,\"spec\":{\"v_min\":-8.0,"
               "\"v_max\":8.0,\"beta_min\":-8.0,\"beta_max\":8.0,\"v_cells\":64,"
               "\"beta_cells\":64},\"data\":\"AAAA\"}", out);
    std::fclose(out);
  }
  CHECK_THROWS_AS(kappa::load_grid(bad), kappa::FileFormatError);
  std::remove(bad.c_str());
  CHECK_THROWS_AS(kappa::load_grid("no_such_file.json"),
                  kappa::FileFormatError);
}

TEST_CASE("support overflow and strict out-of-box reads are reported") {
  const GridSpec sp = spec_with(128);
  const Gauss wide{1.0, 0.0, 2.0, 0.0, 1.0};
  CHECK_THROWS_AS(kappa::grid_star(wide.grid(sp), wide.grid(sp), 1.0),
                  kappa::SupportOverflow);

  // Significant weight of the left factor at v = -2 forces beta reads of the
  // right factor at e^2 beta, and the right factor's wide beta profile leaves
  // real mass near the box edge, so dropping the reads is a real loss.
  const Gauss left{1.0, -2.0, 0.4, 0.0, 1.0};
  const Gauss fat{1.0, 2.0, 0.4, 0.0, 2.5};
  CHECK_THROWS_AS(kappa::grid_star(left.grid(sp), fat.grid(sp), 1.0, true),
                  kappa::InterpolationOutOfRange);
  const SpectralGrid lossy =
      kappa::grid_star(left.grid(sp), fat.grid(sp), 1.0, false);
  CHECK(lossy.leakage() > 0.0);

  // The involution mirrors in v, so rows at positive v with edge beta mass
  // are what its negative-v output rows must read beyond the box.
  CHECK_THROWS_AS(kappa::grid_involution(fat.grid(sp), 1.0, true),
                  kappa::InterpolationOutOfRange);
  CHECK(kappa::grid_involution(fat.grid(sp), 1.0, false).leakage() > 0.0);

  // Benign profiles stay quiet even in strict mode.
  CHECK_NOTHROW(kappa::grid_star(kF.grid(sp), kG.grid(sp), 1.0, true));
  CHECK_NOTHROW(kappa::grid_involution(kF.grid(sp), 1.0, true));
}

TEST_CASE("operator expressions act on grids") {
  const GridSpec sp = spec_with(128);
  const Gauss G{1.0, 0.3, 0.6, 0.2, 1.0};
  const SpectralGrid f = G.grid(sp);
  const double kv = 1.3;

  const kappa::OperatorExpr op = kappa::parse_operator("compose(E, eps)");
  const SpectralGrid got = kappa::grid_apply_op(op, f, kv);
  const SpectralGrid want =
      kappa::grid_apply_E(kappa::grid_translate(f, 1.0 / kv));
  CHECK(kappa::grid_sup_distance(got, want) <= 1e-14);

  const kappa::OperatorExpr lin =
      kappa::parse_operator("sum(scale((0,2.5), P), scale(-1, id))");
  const SpectralGrid got2 = kappa::grid_apply_op(lin, f, kv);
  const SpectralGrid want2 = kappa::grid_add(
      kappa::grid_scale(Complex{0.0, 2.5}, kappa::grid_apply_P(f)),
      kappa::grid_scale(Complex{-1.0, 0.0}, f));
  CHECK(kappa::grid_sup_distance(got2, want2) <= 1e-14);

  CHECK_THROWS_AS(kappa::grid_apply_op(kappa::parse_operator("N"), f, kv),
                  kappa::ConfigError);
}

TEST_CASE("exterior derivative squares to zero over the grid backend") {
  kappa::GridAlgebra alg;
  alg.kappa = 1.0;
  alg.spec = spec_with(128);

  const Gauss G{1.1, 0.3, 0.5, -0.2, 1.0};
  const SpectralGrid f = G.grid(alg.spec);
  const auto df = kappa::exterior_d(alg, kappa::function_form(alg, f));
  const auto ddf = kappa::exterior_d(alg, df);
  const double scale = std::max(1.0, kappa::form_norm(alg, df));
  CHECK(kappa::form_distance(alg, ddf, kappa::zero_form(alg, 2)) <=
        1e-10 * scale);
}

TEST_SUITE_END();
