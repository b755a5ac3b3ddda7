#include "kappa/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "kappa/errors.hpp"

namespace kappa {
namespace {

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ConfigError("kappa must be positive and finite");
}

void require_same_spec(const SpectralGrid& f, const SpectralGrid& g) {
  if (!(f.spec() == g.spec()))
    throw ConfigError("operands live on different grids");
}

std::vector<double> simpson_weights(int cells, double h) {
  std::vector<double> w(cells + 1, 0.0);
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

struct BetaInterp {
  int k0 = 0;
  double w[4] = {0.0, 0.0, 0.0, 0.0};
  bool ok = false;
};

// 4-point cubic Lagrange stencil for reading at beta = s, clamped to the
// grid interior near the edges. ok = false when s is outside the box.
BetaInterp make_beta_interp(const GridSpec& sp, double s) {
  BetaInterp bi;
  const double slack = 1e-9 * (1.0 + std::abs(s));
  if (s < sp.beta_min - slack || s > sp.beta_max + slack) return bi;
  const double clamped = std::clamp(s, sp.beta_min, sp.beta_max);
  const double u = (clamped - sp.beta_min) / sp.dbeta();
  const int k0 = std::clamp(int(std::floor(u)) - 1, 0, sp.beta_nodes() - 4);
  const double t = u - k0;
  bi.k0 = k0;
  bi.w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  bi.w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
  bi.w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
  bi.w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
  bi.ok = true;
  return bi;
}

Complex read_row(const SpectralGrid& f, int j, const BetaInterp& bi) {
  return bi.w[0] * f.at(j, bi.k0) + bi.w[1] * f.at(j, bi.k0 + 1) +
         bi.w[2] * f.at(j, bi.k0 + 2) + bi.w[3] * f.at(j, bi.k0 + 3);
}

// Essential v-support [lo, hi] as node indices (values above 1e-10 of max).
std::pair<int, int> v_support(const SpectralGrid& f) {
  const GridSpec& sp = f.spec();
  double mx = 0.0;
  for (const Complex& c : f.values()) mx = std::max(mx, std::abs(c));
  const int z = sp.zero_v_index();
  if (mx == 0.0) return {z, z};
  const double floor = 1e-10 * mx;
  int lo = sp.v_nodes() - 1, hi = 0;
  for (int j = 0; j < sp.v_nodes(); ++j) {
    for (int k = 0; k < sp.beta_nodes(); ++k) {
      if (std::abs(f.at(j, k)) > floor) {
        lo = std::min(lo, j);
        hi = std::max(hi, j);
        break;
      }
    }
  }
  return {lo, hi};
}

double edge_column_max(const SpectralGrid& g) {
  const GridSpec& sp = g.spec();
  double mx = 0.0;
  const int nb = sp.beta_nodes();
  for (int j = 0; j < sp.v_nodes(); ++j)
    for (int k : {0, 1, nb - 2, nb - 1})
      mx = std::max(mx, std::abs(g.at(j, k)));
  return mx;
}

double grid_max(const SpectralGrid& f) {
  double mx = 0.0;
  for (const Complex& c : f.values()) mx = std::max(mx, std::abs(c));
  return mx;
}

std::string b64_encode(const unsigned char* data, std::size_t len) {
  static const char* tab =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (std::size_t i = 0; i < len; i += 3) {
    unsigned v = data[i] << 16;
    if (i + 1 < len) v |= data[i + 1] << 8;
    if (i + 2 < len) v |= data[i + 2];
    out.push_back(tab[(v >> 18) & 63]);
    out.push_back(tab[(v >> 12) & 63]);
    out.push_back(i + 1 < len ? tab[(v >> 6) & 63] : '=');
    out.push_back(i + 2 < len ? tab[v & 63] : '=');
  }
  return out;
}

std::vector<unsigned char> b64_decode(const std::string& text) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  int acc = 0, bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const int v = val(c);
    if (v < 0) throw FileFormatError("invalid base64 payload");
    acc = (acc << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back((unsigned char)((acc >> bits) & 0xff));
    }
  }
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (!(v_min < v_max) || !(beta_min < beta_max))
    throw ConfigError("grid bounds must be increasing");
  if (v_cells < 4 || beta_cells < 4)
    throw ConfigError("grid needs at least 4 cells per axis");
  if (v_cells % 2 || beta_cells % 2)
    throw ConfigError("cell counts must be even for composite Simpson");
  const double idx = -v_min / dv();
  if (std::abs(idx - std::round(idx)) > 1e-9)
    throw ConfigError("v = 0 must fall exactly on a grid node");
  if (std::round(idx) < 0 || std::round(idx) > v_cells)
    throw ConfigError("v = 0 must lie inside the v box");
}

int GridSpec::zero_v_index() const {
  return int(std::round(-v_min / dv()));
}

bool GridSpec::symmetric_v() const {
  return std::abs(v_min + v_max) <= 1e-12 * std::max(1.0, std::abs(v_max));
}

SpectralGrid::SpectralGrid(GridSpec spec) : spec_(spec) {
  spec_.validate();
  values_.assign(std::size_t(spec_.v_nodes()) * spec_.beta_nodes(),
                 Complex{0.0, 0.0});
}

SpectralGrid sample_spectrum(
    const GridSpec& spec,
    const std::function<Complex(double, double)>& ftilde) {
  SpectralGrid out(spec);
  for (int j = 0; j < spec.v_nodes(); ++j)
    for (int k = 0; k < spec.beta_nodes(); ++k)
      out.at(j, k) = ftilde(spec.v_at(j), spec.beta_at(k));
  return out;
}

SpectralGrid make_gaussian(const GridSpec& spec, double amplitude,
                           double v_center, double v_sigma,
                           double beta_center, double beta_sigma) {
  if (!(v_sigma > 0.0) || !(beta_sigma > 0.0))
    throw ConfigError("gaussian widths must be positive");
  return sample_spectrum(spec, [=](double v, double b) {
    const double dv = (v - v_center) / v_sigma;
    const double db = (b - beta_center) / beta_sigma;
    return Complex{amplitude * std::exp(-0.5 * dv * dv - 0.5 * db * db), 0.0};
  });
}

SpectralGrid make_bump(const GridSpec& spec, double amplitude,
                       double v_center, double v_width, double beta_center,
                       double beta_sigma) {
  if (!(v_width > 0.0) || !(beta_sigma > 0.0))
    throw ConfigError("bump widths must be positive");
  return sample_spectrum(spec, [=](double v, double b) {
    const double s = (v - v_center) / v_width;
    if (std::abs(s) >= 1.0) return Complex{0.0, 0.0};
    const double db = (b - beta_center) / beta_sigma;
    return Complex{
        amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s) - 0.5 * db * db), 0.0};
  });
}

SpectralGrid unit_approx(const GridSpec& spec, double v_width) {
  if (!(v_width > 0.0)) throw ConfigError("unit width must be positive");
  auto profile = [&](double v) {
    const double s = v / v_width;
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
  };
  const std::vector<double> wv = simpson_weights(spec.v_cells, spec.dv());
  double mass = 0.0;
  for (int j = 0; j < spec.v_nodes(); ++j) mass += wv[j] * profile(spec.v_at(j));
  if (mass <= 0.0)
    throw ConfigError("unit width too narrow for this grid resolution");
  const double scale = sqrt_two_pi() / mass;
  return sample_spectrum(spec, [&](double v, double) {
    return Complex{scale * profile(v), 0.0};
  });
}

SpectralGrid grid_add(SpectralGrid f, const SpectralGrid& g) {
  require_same_spec(f, g);
  for (std::size_t i = 0; i < f.values().size(); ++i)
    f.values()[i] += g.values()[i];
  f.add_leakage(g.leakage());
  return f;
}

SpectralGrid grid_sub(SpectralGrid f, const SpectralGrid& g) {
  require_same_spec(f, g);
  for (std::size_t i = 0; i < f.values().size(); ++i)
    f.values()[i] -= g.values()[i];
  f.add_leakage(g.leakage());
  return f;
}

SpectralGrid grid_scale(Complex c, SpectralGrid f) {
  for (Complex& v : f.values()) v *= c;
  return f;
}

SpectralGrid grid_star(const SpectralGrid& f, const SpectralGrid& g,
                       double kappa, bool strict) {
  require_kappa(kappa);
  require_same_spec(f, g);
  const GridSpec& sp = f.spec();
  const int nv = sp.v_nodes();
  const int nb = sp.beta_nodes();
  const int z = sp.zero_v_index();

  const auto [flo, fhi] = v_support(f);
  const auto [glo, ghi] = v_support(g);
  if (flo + glo - z < 0 || fhi + ghi - z > nv - 1)
    throw SupportOverflow(
        "essential spectral supports of the factors do not fit in the v box "
        "of the product");

  const std::vector<double> wv = simpson_weights(sp.v_cells, sp.dv());
  const double norm = 1.0 / sqrt_two_pi();
  const double g_edge = edge_column_max(g);
  // Strict mode flags a dropped read only when its estimated contribution
  // |f| * (g near the beta edge) is non-negligible against the data scale.
  const double drop_floor = 1e-12 * grid_max(f) * grid_max(g);

  SpectralGrid out(sp);
  double leak = f.leakage() + g.leakage();
  std::vector<Complex> grow(nv);

  for (int k = 0; k < nb; ++k) {
    const double beta = sp.beta_at(k);
    for (int j = flo; j <= fhi; ++j) {
      const Complex fv = f.at(j, k);
      if (fv == Complex{0.0, 0.0}) continue;
      const double beta_p = std::exp(-sp.v_at(j) / kappa) * beta;
      const BetaInterp bi = make_beta_interp(sp, beta_p);
      if (!bi.ok) {
        if (strict && std::abs(fv) * g_edge > drop_floor)
          throw InterpolationOutOfRange(
              "twisted convolution reads beta = " + std::to_string(beta_p) +
              " outside the box with non-negligible weight");
        leak += norm * std::abs(wv[j] * fv) * g_edge;
        continue;
      }
      for (int i = glo; i <= ghi; ++i) grow[i] = read_row(g, i, bi);
      const Complex scale = norm * wv[j] * fv;
      const int m_lo = std::max(0, glo + j - z);
      const int m_hi = std::min(nv - 1, ghi + j - z);
      for (int m = m_lo; m <= m_hi; ++m)
        out.at(m, k) += scale * grow[m - j + z];
    }
  }
  out.set_leakage(leak);
  return out;
}

SpectralGrid grid_translate(const SpectralGrid& f, double gamma) {
  SpectralGrid out = f;
  const GridSpec& sp = f.spec();
  for (int j = 0; j < sp.v_nodes(); ++j) {
    const double damp = std::exp(-gamma * sp.v_at(j));
    for (int k = 0; k < sp.beta_nodes(); ++k) out.at(j, k) *= damp;
  }
  return out;
}

SpectralGrid grid_apply_E(const SpectralGrid& f) {
  SpectralGrid out = f;
  const GridSpec& sp = f.spec();
  for (int j = 0; j < sp.v_nodes(); ++j) {
    const Complex iv{0.0, sp.v_at(j)};
    for (int k = 0; k < sp.beta_nodes(); ++k) out.at(j, k) *= iv;
  }
  return out;
}

SpectralGrid grid_apply_P(const SpectralGrid& f) {
  const GridSpec& sp = f.spec();
  SpectralGrid out(sp);
  out.set_leakage(f.leakage());
  const int nb = sp.beta_nodes();
  const double h12 = 12.0 * sp.dbeta();
  for (int j = 0; j < sp.v_nodes(); ++j) {
    auto a = [&](int k) { return f.at(j, k); };
    out.at(j, 0) =
        (-25.0 * a(0) + 48.0 * a(1) - 36.0 * a(2) + 16.0 * a(3) - 3.0 * a(4)) /
        h12;
    out.at(j, 1) =
        (-3.0 * a(0) - 10.0 * a(1) + 18.0 * a(2) - 6.0 * a(3) + a(4)) / h12;
    for (int k = 2; k < nb - 2; ++k)
      out.at(j, k) =
          (a(k - 2) - 8.0 * a(k - 1) + 8.0 * a(k + 1) - a(k + 2)) / h12;
    out.at(j, nb - 2) = (3.0 * a(nb - 1) + 10.0 * a(nb - 2) - 18.0 * a(nb - 3) +
                         6.0 * a(nb - 4) - a(nb - 5)) /
                        h12;
    out.at(j, nb - 1) = (25.0 * a(nb - 1) - 48.0 * a(nb - 2) +
                         36.0 * a(nb - 3) - 16.0 * a(nb - 4) + 3.0 * a(nb - 5)) /
                        h12;
  }
  return out;
}

SpectralGrid grid_involution(const SpectralGrid& f, double kappa,
                             bool strict) {
  require_kappa(kappa);
  const GridSpec& sp = f.spec();
  SpectralGrid out(sp);
  double leak = f.leakage();
  const bool mirror = sp.symmetric_v();
  const int nv = sp.v_nodes();
  const int nb = sp.beta_nodes();
  const double fmax = grid_max(f);
  // Per-row magnitude near the beta edges, the proxy for mass a dropped
  // out-of-box read would have carried.
  std::vector<double> row_edge(nv, 0.0);
  for (int j = 0; j < nv; ++j)
    for (int k : {0, 1, nb - 2, nb - 1})
      row_edge[j] = std::max(row_edge[j], std::abs(f.at(j, k)));
  for (int j = 0; j < nv; ++j) {
    const double v = sp.v_at(j);
    const double rescale = std::exp(-v / kappa);

    // v read position: -v. Exact mirror node when the box is symmetric.
    int j0 = 0;
    double vw[4] = {0.0, 0.0, 0.0, 0.0};
    int stencil = 0;  // number of v nodes in the read
    if (mirror) {
      stencil = 1;
      j0 = nv - 1 - j;
      vw[0] = 1.0;
    } else {
      const double u = (-v - sp.v_min) / sp.dv();
      if (u < -1e-9 || u > nv - 1 + 1e-9) {
        // -v outside the box: spectral mass there is absent
        continue;
      }
      stencil = 4;
      j0 = std::clamp(int(std::floor(u)) - 1, 0, nv - 4);
      const double t = std::clamp(u, 0.0, double(nv - 1)) - j0;
      vw[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
      vw[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
      vw[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
      vw[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
    }

    for (int k = 0; k < nb; ++k) {
      const double beta_p = rescale * sp.beta_at(k);
      const BetaInterp bi = make_beta_interp(sp, beta_p);
      if (!bi.ok) {
        double proxy = 0.0;
        for (int a = 0; a < stencil; ++a)
          proxy = std::max(proxy, row_edge[j0 + a]);
        if (strict && proxy > 1e-12 * fmax)
          throw InterpolationOutOfRange(
              "involution reads beta = " + std::to_string(beta_p) +
              " outside the box with non-negligible weight");
        leak += proxy * sp.dv() * sp.dbeta();
        continue;
      }
      Complex val{0.0, 0.0};
      for (int a = 0; a < stencil; ++a)
        val += vw[a] * read_row(f, j0 + a, bi);
      out.at(j, k) = std::conj(val);
    }
  }
  out.set_leakage(leak);
  return out;
}

SpectralGrid grid_apply_op(const OperatorExpr& op, const SpectralGrid& f,
                           double kappa) {
  require_kappa(kappa);
  switch (op.kind()) {
    case OperatorExpr::Kind::Generator:
      switch (op.gen()) {
        case Gen::E:
          return grid_apply_E(f);
        case Gen::P:
          return grid_apply_P(f);
        case Gen::Eps:
          return grid_translate(f, 1.0 / kappa);
        case Gen::EpsInv:
          return grid_translate(f, -1.0 / kappa);
        case Gen::Id:
          return f;
        case Gen::N:
          throw ConfigError("the boost is not a grid operator");
      }
      throw ConfigError("unreachable generator");
    case OperatorExpr::Kind::Scale:
      return grid_scale(op.factor(), grid_apply_op(op.children()[0], f, kappa));
    case OperatorExpr::Kind::Sum: {
      SpectralGrid acc(f.spec());
      for (const auto& c : op.children())
        acc = grid_add(std::move(acc), grid_apply_op(c, f, kappa));
      return acc;
    }
    case OperatorExpr::Kind::Compose: {
      SpectralGrid acc = f;
      for (auto it = op.children().rbegin(); it != op.children().rend(); ++it)
        acc = grid_apply_op(*it, acc, kappa);
      return acc;
    }
  }
  throw ConfigError("unreachable operator kind");
}

Complex grid_eval(const SpectralGrid& f, Complex alpha, double beta) {
  const GridSpec& sp = f.spec();
  const BetaInterp bi = make_beta_interp(sp, beta);
  if (!bi.ok)
    throw EvalOutOfRange("evaluation point beta = " + std::to_string(beta) +
                         " lies outside the grid");
  Complex acc{0.0, 0.0};
  const int nv = sp.v_nodes();
  for (int j = 0; j < nv; ++j) {
    const double w = (j == 0 || j == nv - 1) ? 0.5 : 1.0;
    acc += w * read_row(f, j, bi) *
           std::exp(kImag * alpha * sp.v_at(j));
  }
  return acc * sp.dv() / sqrt_two_pi();
}

Complex lebesgue_integral(const SpectralGrid& f) {
  const GridSpec& sp = f.spec();
  const int z = sp.zero_v_index();
  const std::vector<double> wb = simpson_weights(sp.beta_cells, sp.dbeta());
  Complex acc{0.0, 0.0};
  for (int k = 0; k < sp.beta_nodes(); ++k) acc += wb[k] * f.at(z, k);
  return acc * sqrt_two_pi();
}

bool sample_row(const SpectralGrid& f, int j, double beta, Complex& out) {
  const BetaInterp bi = make_beta_interp(f.spec(), beta);
  if (!bi.ok) {
    out = Complex{0.0, 0.0};
    return false;
  }
  out = read_row(f, j, bi);
  return true;
}

double lebesgue_abs_mass(const SpectralGrid& f) {
  const GridSpec& sp = f.spec();
  const int z = sp.zero_v_index();
  const std::vector<double> wb = simpson_weights(sp.beta_cells, sp.dbeta());
  double acc = 0.0;
  for (int k = 0; k < sp.beta_nodes(); ++k) acc += wb[k] * std::abs(f.at(z, k));
  return acc * sqrt_two_pi();
}

double grid_l1(const SpectralGrid& f) {
  const GridSpec& sp = f.spec();
  const std::vector<double> wv = simpson_weights(sp.v_cells, sp.dv());
  const std::vector<double> wb = simpson_weights(sp.beta_cells, sp.dbeta());
  double acc = 0.0;
  for (int j = 0; j < sp.v_nodes(); ++j)
    for (int k = 0; k < sp.beta_nodes(); ++k)
      acc += wv[j] * wb[k] * std::abs(f.at(j, k));
  return acc;
}

double grid_sup_distance(const SpectralGrid& f, const SpectralGrid& g) {
  require_same_spec(f, g);
  double mx = 0.0;
  for (std::size_t i = 0; i < f.values().size(); ++i)
    mx = std::max(mx, std::abs(f.values()[i] - g.values()[i]));
  return mx;
}

void save_grid(const SpectralGrid& f, const std::string& path, double kappa) {
  if constexpr (std::endian::native != std::endian::little)
    throw ConfigError("grid files are little-endian only");
  const GridSpec& sp = f.spec();
  nlohmann::json j{
      {"schema", "kappa-forge/grid-1"},
      {"kappa", kappa},
      {"leakage", f.leakage()},
      {"spec",
       {{"v_min", sp.v_min},
        {"v_max", sp.v_max},
        {"beta_min", sp.beta_min},
        {"beta_max", sp.beta_max},
        {"v_cells", sp.v_cells},
        {"beta_cells", sp.beta_cells}}},
      {"endianness", "little"},
      {"encoding", "base64"},
  };
  j["data"] = b64_encode(
      reinterpret_cast<const unsigned char*>(f.values().data()),
      f.values().size() * sizeof(Complex));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileFormatError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw FileFormatError("failed writing " + path);
}

std::pair<SpectralGrid, double> load_grid(const std::string& path) {
  if constexpr (std::endian::native != std::endian::little)
    throw ConfigError("grid files are little-endian only");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FileFormatError(std::string("bad grid file: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "kappa-forge/grid-1")
      throw FileFormatError("unknown grid schema");
    if (j.at("encoding").get<std::string>() != "base64" ||
        j.at("endianness").get<std::string>() != "little")
      throw FileFormatError("unsupported grid encoding");
    GridSpec sp;
    const auto& s = j.at("spec");
    sp.v_min = s.at("v_min").get<double>();
    sp.v_max = s.at("v_max").get<double>();
    sp.beta_min = s.at("beta_min").get<double>();
    sp.beta_max = s.at("beta_max").get<double>();
    sp.v_cells = s.at("v_cells").get<int>();
    sp.beta_cells = s.at("beta_cells").get<int>();
    SpectralGrid grid(sp);
    const std::vector<unsigned char> bytes =
        b64_decode(j.at("data").get<std::string>());
    if (bytes.size() != grid.values().size() * sizeof(Complex))
      throw FileFormatError("grid payload size mismatch");
    std::memcpy(grid.values().data(), bytes.data(), bytes.size());
    grid.set_leakage(j.value("leakage", 0.0));
    return {std::move(grid), j.at("kappa").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw FileFormatError(std::string("bad grid file: ") + e.what());
  }
}

}  // namespace kappa
