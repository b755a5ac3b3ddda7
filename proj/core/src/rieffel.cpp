#include "kappa/rieffel.hpp"

#include <algorithm>
#include <cmath>

#include "kappa/errors.hpp"

namespace kappa {
namespace {

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ConfigError("kappa must be positive and finite");
}

struct Lattice {
  int n_alpha = 0;   // alpha nodes
  int shoulder = 0;  // extra nodes on each side of the wide lattice
  int n_wide = 0;
  double step = 0.0;
  double alpha0 = 0.0;  // leftmost alpha of the narrow lattice
  double wide0 = 0.0;   // leftmost alpha of the wide lattice
};

Lattice make_lattice(const RieffelOptions& opt) {
  if (!(opt.step > 0.0) || !(opt.alpha_half >= 2.0) || !(opt.u_half >= 2.0))
    throw ConfigError("rieffel lattice parameters out of range");
  Lattice lat;
  lat.step = opt.step;
  const int half = int(std::lround(opt.alpha_half / opt.step));
  lat.shoulder = int(std::lround(opt.u_half / opt.step));
  lat.n_alpha = 2 * half + 1;
  lat.n_wide = lat.n_alpha + 2 * lat.shoulder;
  lat.alpha0 = -half * opt.step;
  lat.wide0 = lat.alpha0 - lat.shoulder * opt.step;
  return lat;
}

std::vector<int> selected_columns(const GridSpec& sp,
                                  const RieffelOptions& opt) {
  const int hi = opt.beta_hi < 0 ? sp.beta_nodes() - 1 : opt.beta_hi;
  if (opt.beta_lo < 0 || hi >= sp.beta_nodes() || opt.beta_lo > hi ||
      opt.beta_stride < 1)
    throw ConfigError("rieffel beta column window out of range");
  std::vector<int> cols;
  for (int k = opt.beta_lo; k <= hi; k += opt.beta_stride) cols.push_back(k);
  return cols;
}

// Position values of a spectral row on a uniform alpha lattice by trapezoid
// over the v nodes; sign = -1 conjugate-transforms (e^{-i alpha v}). Phase
// factors advance by recurrence, not per-point exp.
void row_to_position(const GridSpec& sp, const std::vector<Complex>& row,
                     double alpha0, double step, int n, int sign,
                     std::vector<Complex>& out) {
  const int nv = sp.v_nodes();
  const double norm = sp.dv() / sqrt_two_pi();
  double rowmax = 0.0;
  for (const Complex& c : row) rowmax = std::max(rowmax, std::abs(c));
  const double floor = 1e-14 * rowmax;
  out.assign(n, Complex{0.0, 0.0});
  for (int j = 0; j < nv; ++j) {
    if (std::abs(row[j]) <= floor) continue;
    const Complex w = row[j] * ((j == 0 || j == nv - 1) ? 0.5 * norm : norm);
    const double v = sign * sp.v_at(j);
    Complex cur{std::cos(alpha0 * v), std::sin(alpha0 * v)};
    const Complex mul{std::cos(step * v), std::sin(step * v)};
    for (int i = 0; i < n; ++i) {
      out[i] += w * cur;
      cur *= mul;
    }
  }
}

// Forward transform of lattice position values onto the grid's v nodes.
void position_to_row(const GridSpec& sp, const std::vector<Complex>& h,
                     double alpha0, double step, std::vector<Complex>& out) {
  const int nv = sp.v_nodes();
  const int n = int(h.size());
  const double norm = step / sqrt_two_pi();
  std::vector<Complex> hw = h;
  hw.front() *= 0.5;
  hw.back() *= 0.5;
  out.assign(nv, Complex{0.0, 0.0});
  for (int j = 0; j < nv; ++j) {
    const double v = -sp.v_at(j);
    Complex cur{std::cos(alpha0 * v), std::sin(alpha0 * v)};
    const Complex mul{std::cos(step * v), std::sin(step * v)};
    Complex acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      acc += hw[i] * cur;
      cur *= mul;
    }
    out[j] = acc * norm;
  }
}

// Essential v support of f as node indices, widened by a safety margin and
// made Simpson-compatible (even cell count).
std::pair<int, int> support_window(const SpectralGrid& f, bool mirrored) {
  const GridSpec& sp = f.spec();
  const int nv = sp.v_nodes();
  double mx = 0.0;
  for (const Complex& c : f.values()) mx = std::max(mx, std::abs(c));
  int lo = sp.zero_v_index(), hi = sp.zero_v_index();
  if (mx > 0.0) {
    const double floor = 1e-12 * mx;
    lo = nv - 1;
    hi = 0;
    for (int j = 0; j < nv; ++j)
      for (int k = 0; k < sp.beta_nodes(); ++k)
        if (std::abs(f.at(j, k)) > floor) {
          lo = std::min(lo, j);
          hi = std::max(hi, j);
          break;
        }
    if (lo > hi) lo = hi = sp.zero_v_index();
  }
  if (mirrored) {
    const int z2 = 2 * sp.zero_v_index();
    const int nlo = z2 - hi, nhi = z2 - lo;
    lo = nlo;
    hi = nhi;
  }
  const int margin = std::max(4, int(std::lround(1.0 / sp.dv())));
  lo = std::clamp(lo - margin, 0, nv - 1);
  hi = std::clamp(hi + margin, 0, nv - 1);
  if ((hi - lo) % 2) (hi < nv - 1) ? ++hi : --lo;
  return {lo, hi};
}

std::vector<double> simpson_weights_window(int lo, int hi, double h) {
  std::vector<double> w(hi - lo + 1, 0.0);
  const int cells = hi - lo;
  for (int i = 0; i <= cells; ++i) {
    if (i == 0 || i == cells)
      w[i] = h / 3.0;
    else if (i % 2 == 1)
      w[i] = 4.0 * h / 3.0;
    else
      w[i] = 2.0 * h / 3.0;
  }
  return w;
}

std::vector<Complex> gather_column(const SpectralGrid& f, int k) {
  std::vector<Complex> row(f.spec().v_nodes());
  for (int j = 0; j < f.spec().v_nodes(); ++j) row[j] = f.at(j, k);
  return row;
}

// Interpolated spectral row of f at beta = s (zeros when s is outside).
std::vector<Complex> gather_interp(const SpectralGrid& f, double s,
                                   bool conjugate) {
  std::vector<Complex> row(f.spec().v_nodes(), Complex{0.0, 0.0});
  for (int j = 0; j < f.spec().v_nodes(); ++j) {
    Complex val{0.0, 0.0};
    sample_row(f, j, s, val);
    row[j] = conjugate ? std::conj(val) : val;
  }
  return row;
}

// Oscillatory trapezoid in u against phase e^{-i step (m - shoulder) v} for
// every narrow-lattice point: out[i] = du * sum_m trap wide[i + m] phase_m.
void u_transform(const std::vector<Complex>& wide, const Lattice& lat,
                 double v, double du, std::vector<Complex>& out) {
  const int n_u = 2 * lat.shoulder + 1;
  std::vector<Complex> phased(n_u);
  Complex cur{std::cos(lat.step * lat.shoulder * v),
              std::sin(lat.step * lat.shoulder * v)};
  const Complex mul{std::cos(-lat.step * v), std::sin(-lat.step * v)};
  for (int m = 0; m < n_u; ++m) {
    phased[m] = cur * ((m == 0 || m == n_u - 1) ? 0.5 * du : du);
    cur *= mul;
  }
  out.assign(lat.n_alpha, Complex{0.0, 0.0});
  for (int i = 0; i < lat.n_alpha; ++i) {
    Complex acc{0.0, 0.0};
    for (int m = 0; m < n_u; ++m) acc += wide[i + m] * phased[m];
    out[i] = acc;
  }
}

}  // namespace

RowSpectra rieffel_star_rows(const SpectralGrid& f, const SpectralGrid& g,
                             double kappa, const RieffelOptions& opt) {
  require_kappa(kappa);
  if (!(f.spec() == g.spec()))
    throw ConfigError("operands live on different grids");
  const GridSpec& sp = f.spec();
  const Lattice lat = make_lattice(opt);
  const auto cols = selected_columns(sp, opt);
  const auto [qlo, qhi] = support_window(f, false);
  const std::vector<double> wq =
      simpson_weights_window(qlo, qhi, sp.dv() / kappa);

  RowSpectra out;
  out.spec = sp;
  out.columns = cols;
  out.rows.resize(cols.size());

  std::vector<Complex> fwide, grow, gpos, fu, h;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const int k = cols[c];
    const double beta = sp.beta_at(k);
    row_to_position(sp, gather_column(f, k), lat.wide0, lat.step, lat.n_wide,
                    +1, fwide);
    h.assign(lat.n_alpha, Complex{0.0, 0.0});
    for (int q = qlo; q <= qhi; ++q) {
      const double v2 = sp.v_at(q) / kappa;
      grow = gather_interp(g, std::exp(-v2) * beta, false);
      row_to_position(sp, grow, lat.alpha0, lat.step, lat.n_alpha, +1, gpos);
      // u runs on the lattice u = kappa * step * (m - shoulder); the kappa
      // factors cancel inside the phase e^{-i u v2}.
      u_transform(fwide, lat, sp.v_at(q), kappa * lat.step, fu);
      const Complex wgt{wq[q - qlo] / (2.0 * kPi), 0.0};
      for (int i = 0; i < lat.n_alpha; ++i) h[i] += wgt * fu[i] * gpos[i];
    }
    position_to_row(sp, h, lat.alpha0, lat.step, out.rows[c]);
  }
  return out;
}

RowSpectra rieffel_involution_rows(const SpectralGrid& f, double kappa,
                                   const RieffelOptions& opt) {
  require_kappa(kappa);
  const GridSpec& sp = f.spec();
  const Lattice lat = make_lattice(opt);
  const auto cols = selected_columns(sp, opt);
  const auto [qlo, qhi] = support_window(f, true);
  const std::vector<double> wq =
      simpson_weights_window(qlo, qhi, sp.dv() / kappa);

  RowSpectra out;
  out.spec = sp;
  out.columns = cols;
  out.rows.resize(cols.size());

  std::vector<Complex> fwide, h;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const int k = cols[c];
    const double beta = sp.beta_at(k);
    h.assign(lat.n_alpha, Complex{0.0, 0.0});
    for (int q = qlo; q <= qhi; ++q) {
      const double u2 = sp.v_at(q) / kappa;
      // conj f(alpha + u1, e^{-u2} beta) over the wide lattice. Shifting the
      // inner variable to alpha' = alpha + u1 turns the alpha dependence into
      // the pure phase e^{i kappa alpha u2}, so one fixed-window trapezoid
      // per node serves every lattice point without edge truncation.
      row_to_position(sp, gather_interp(f, std::exp(-u2) * beta, true),
                      lat.wide0, lat.step, lat.n_wide, -1, fwide);
      Complex acc{0.0, 0.0};
      {
        const double v = sp.v_at(q);  // kappa u2
        Complex cur{std::cos(lat.wide0 * v), std::sin(lat.wide0 * v)};
        const Complex mul{std::cos(lat.step * v), std::sin(lat.step * v)};
        for (int p = 0; p < lat.n_wide; ++p) {
          const double w =
              (p == 0 || p == lat.n_wide - 1) ? 0.5 * lat.step : lat.step;
          acc += fwide[p] * std::conj(cur) * w;
          cur *= mul;
        }
      }
      const Complex wgt = acc * (kappa * wq[q - qlo] / (2.0 * kPi));
      const double v = sp.v_at(q);
      Complex cur{std::cos(lat.alpha0 * v), std::sin(lat.alpha0 * v)};
      const Complex mul{std::cos(lat.step * v), std::sin(lat.step * v)};
      for (int i = 0; i < lat.n_alpha; ++i) {
        h[i] += wgt * cur;
        cur *= mul;
      }
    }
    position_to_row(sp, h, lat.alpha0, lat.step, out.rows[c]);
  }
  return out;
}

double rows_sup_distance(const RowSpectra& rows, const SpectralGrid& ref) {
  if (!(rows.spec == ref.spec()))
    throw ConfigError("row spectra and reference live on different grids");
  double mx = 0.0;
  for (std::size_t c = 0; c < rows.columns.size(); ++c)
    for (int j = 0; j < rows.spec.v_nodes(); ++j)
      mx = std::max(mx,
                    std::abs(rows.rows[c][j] - ref.at(j, rows.columns[c])));
  return mx;
}

SpectralGrid rows_to_grid(const RowSpectra& rows) {
  SpectralGrid out{rows.spec};
  for (std::size_t c = 0; c < rows.columns.size(); ++c)
    for (int j = 0; j < rows.spec.v_nodes(); ++j)
      out.at(j, rows.columns[c]) = rows.rows[c][j];
  return out;
}

SpectralGrid eta_act(const EtaParams& x, const SpectralGrid& f, bool strict) {
  const GridSpec& sp = f.spec();
  SpectralGrid out(sp);
  double leak = f.leakage();
  const int nv = sp.v_nodes();
  const int nb = sp.beta_nodes();
  const double rescale = std::exp(-x.s);
  double fmax = 0.0;
  for (const Complex& c : f.values()) fmax = std::max(fmax, std::abs(c));
  std::vector<double> row_edge(nv, 0.0);
  for (int j = 0; j < nv; ++j)
    for (int kk : {0, 1, nb - 2, nb - 1})
      row_edge[j] = std::max(row_edge[j], std::abs(f.at(j, kk)));

  for (int j = 0; j < nv; ++j) {
    const double v = sp.v_at(j);
    const Complex phase{std::cos(x.r * v), std::sin(x.r * v)};
    for (int k = 0; k < nb; ++k) {
      Complex val{0.0, 0.0};
      if (!sample_row(f, j, rescale * sp.beta_at(k), val)) {
        if (strict && row_edge[j] > 1e-12 * fmax)
          throw InterpolationOutOfRange(
              "translation reads beta outside the box with non-negligible "
              "weight");
        leak += row_edge[j] * sp.dv() * sp.dbeta();
        continue;
      }
      out.at(j, k) = phase * val;
    }
  }
  out.set_leakage(leak);
  return out;
}

EtaParams j_map(const EtaParams& x, double kappa) {
  require_kappa(kappa);
  return {x.s / kappa, 0.0};
}

}  // namespace kappa
