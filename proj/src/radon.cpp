#include "kinavg/radon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kinavg/errors.hpp"
#include "kinavg/parallel.hpp"
#include "kinavg/quadrature.hpp"
#include "kinavg/special.hpp"

namespace kinavg {

namespace {

constexpr double pi = std::numbers::pi;

double pow00(double x, double y) { return (x == 0.0 && y == 0.0) ? 1.0 : std::pow(x, y); }

double radon_constant(int d, double kappa) {
  return sphere_area(d - 2) * std::tgamma(0.5 * (d - 1)) / (2.0 * std::tgamma(0.5 * (d + 1) + kappa));
}

void check_dimension(int d) { require(d == 2 || d == 3, "dimension must be 2 or 3"); }

void check_kappa(double kappa) { require(kappa >= -1.0 && kappa <= 0.0, "kappa must lie in [-1, 0]"); }

// Exponent of (1 - r^2) in the Radon transform of the measure's weight.
double radon_exponent(const VelocityMeasure& m) {
  return m.kind == MeasureKind::sphere ? 0.5 * (m.d - 3) : m.kappa + 0.5 * (m.d - 1);
}

SpaceTimeField to_mixed(const SpaceTimeField& g) {
  switch (g.domain()) {
    case Domain::mixed: return g;
    case Domain::physical: return spatial_transform(g);
    case Domain::frequency: return spatial_transform(inverse_transform(g));
  }
  return g;
}

}  // namespace

double radon_radial(int d, const std::function<double(double)>& w_tilde, double r) {
  check_dimension(d);
  if (std::abs(r) >= 1.0) return 0.0;
  // s^2 = r^2 + (1 - r^2) u removes the kernel singularity at s = |r|:
  // R w(r) = |S^{d-2}| (1 - r^2)^{(d-1)/2} / 2 int_0^1 w(s(u)) u^{(d-3)/2} du
  const double q = 1.0 - r * r;
  const double half = 0.5 * (d - 3);
  // blow-up exponent a of w ~ (1 - s)^{-a} at the rim; a >= 1 diverges
  const double w6 = std::abs(w_tilde(1.0 - 1e-6)), w9 = std::abs(w_tilde(1.0 - 1e-9));
  if (w6 > 0.0 && std::isfinite(w9) && std::log(w9 / w6) / std::log(1e3) > 0.999) {
    throw NumericalError("weight is not integrable at |v| = 1");
  }
  const double below_one = std::nextafter(1.0, 0.0);
  auto integrand = [&](double u) {
    const double s = std::sqrt(r * r + q * u);
    const double v = w_tilde(std::min(s, below_one)) * (half == 0.0 ? 1.0 : std::pow(u, half));
    if (!std::isfinite(v)) throw NumericalError("weight is not integrable near |v| = " + std::to_string(s));
    return v;
  };
  return sphere_area(d - 2) * std::pow(q, 0.5 * (d - 1)) * 0.5 * integrate_singular(integrand, 0.0, 1.0, 1e-12);
}

double radon_kappa_closed(int d, double kappa, double r) {
  check_dimension(d);
  check_kappa(kappa);
  if (std::abs(r) >= 1.0) return 0.0;
  return radon_constant(d, kappa) * pow00(1.0 - r * r, kappa + 0.5 * (d - 1));
}

double RadonProfile::closed(double r) const { return radon_kappa_closed(d, kappa, r); }

double RadonProfile::quadrature(double r) const {
  require(kappa > -1.0, "the quadrature form needs kappa > -1");
  const double k = kappa, g = std::tgamma(1.0 + kappa);
  return radon_radial(d, [k, g](double s) { return std::pow(1.0 - s * s, k) / g; }, r);
}

RadonProfile radon_profile(int d, double kappa) {
  check_dimension(d);
  check_kappa(kappa);
  return {d, kappa, radon_constant(d, kappa), kappa + 0.5 * (d - 1)};
}

double radon_of_measure(const VelocityMeasure& m, double r) {
  if (m.kind == MeasureKind::sphere) return 2.0 * m.scale * radon_kappa_closed(m.d, -1.0, r);
  return radon_kappa_closed(m.d, m.kappa, r);
}

SymbolSpec build_m_mu(const SymbolSpec& m, const VelocityMeasure& measure) {
  check_dimension(measure.d);
  const double c = measure.kind == MeasureKind::sphere ? 2.0 * measure.scale * radon_constant(measure.d, -1.0)
                                                       : radon_constant(measure.d, measure.kappa);
  const double e = radon_exponent(measure);
  SymbolSpec out;
  out.name = m.name + " * radon:" + to_string(measure.kind) +
             (measure.kind == MeasureKind::kappa_ball ? ",k=" + std::to_string(measure.kappa) : "");
  out.profile = [m, c, e](double xn, double tau) {
    if (xn == 0.0 || std::abs(tau) > xn) return cplx(0.0);
    const double l = tau / xn;
    return m.at(xn, tau) * std::sqrt(c * pow00(1.0 - l * l, e) / xn);
  };
  out.support = m.support;
  out.support.push_back({Region::cone, 0});
  out.singularities = m.singularities;
  out.singularities.push_back({Locus::cone, 0.5 * e});
  out.singularities.push_back({Locus::spatial_origin, -0.5});
  out.term_count = m.term_count;
  return out;
}

DualityResidual duality_residual(const SpaceTimeField& g_in, const SymbolSpec& m, const VelocityMeasure& measure,
                                 int slice_nodes) {
  const GridSpec& grid = g_in.grid();
  require(measure.d == grid.d(), "velocity measure and grid disagree on the dimension");
  const SpaceTimeField g = to_mixed(g_in);
  const std::size_t ns = grid.space.size();
  double peak = 0.0, outside = 0.0;
  for (std::size_t idx = 0; idx < ns; ++idx) {
    const double xn = grid.space.freq_norm(idx);
    const bool in = xn >= 0.5 && xn <= 2.0;
    for (int t = 0; t < grid.n_t; ++t) {
      const double a = std::abs(g.at(idx, t));
      peak = std::max(peak, a);
      if (!in) outside = std::max(outside, a);
    }
  }
  if (peak == 0.0) return {};
  if (outside > 1e-12 * peak) throw InputError("g must have spatial spectrum inside 1/2 <= |xi| <= 2");

  const SymbolSpec m_mu = build_m_mu(m, measure);
  const double p = 2.0 * m_mu.cone_exponent();
  require(p > -1.0, "|m_mu|^2 is not integrable at the cone");
  const auto rule = gauss_jacobi_unit(slice_nodes, p, 0.0);

  std::vector<double> lhs_part(ns, 0.0), rhs_part(ns, 0.0);
  parallel_for(ns, [&](std::size_t idx) {
    const double xn = grid.space.freq_norm(idx);
    if (xn < 0.5 || xn > 2.0) return;
    const auto row = g.samples().subspan(idx * grid.n_t, grid.n_t);
    const Vec3 xi = grid.space.freq_point(idx);
    const TimeSpectrum spectrum(row, grid);
    double a = 0.0;
    for (std::size_t n = 0; n < measure.size(); ++n) {
      const auto& v = measure.nodes[n];
      const double tau = -(xi[0] * v[0] + xi[1] * v[1] + xi[2] * v[2]);
      const cplx val = m.at(xn, tau) * spectrum(tau);
      if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
        throw NumericalError("symbol " + m.name + " is not finite at a velocity node");
      }
      a += measure.weights[n] * std::norm(val);
    }
    double b = 0.0;
    for (int side : {-1, 1}) {
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double s = rule.nodes[q];
        const double tau = -xn * side * s;
        const double mm = std::norm(m_mu.at(xn, tau)) * xn;
        b += rule.weights[q] * mm / pow00(1.0 - s, p) * std::norm(spectrum(tau));
      }
    }
    lhs_part[idx] = a;
    rhs_part[idx] = b;
  });
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t idx = 0; idx < ns; ++idx) {
    lhs += lhs_part[idx];
    rhs += rhs_part[idx];
  }
  const double scale = grid.space.freq_cell() / std::pow(2.0 * pi, grid.d());
  DualityResidual out;
  out.lhs = lhs * scale;
  // 2 pi (2 pi)^{-(d+1)} = (2 pi)^{-d}
  out.rhs = rhs * scale;
  const double big = std::max(out.lhs, out.rhs);
  if (!(big > 1e-300)) throw NumericalError("both sides of the duality identity vanish");
  out.residual = std::abs(out.lhs - out.rhs) / big;
  return out;
}

GridSpec duality_grid(int d, int n) {
  check_dimension(d);
  const double len = n * pi / 8.0;
  GridSpec g{SpatialGrid{d, n, len}, n, len};
  g.validate();
  return g;
}

VelocityMeasure duality_measure(int d, MeasureKind kind, double kappa, int n) {
  check_dimension(d);
  require(n >= 32, "duality resolution must be at least 32");
  if (kind == MeasureKind::sphere) return sphere_measure(d, d == 2 ? 2 * n : n / 4);
  return kappa_ball_measure(d, kappa, n / 8, d == 2 ? n : n / 4);
}

SpaceTimeField random_annulus_field(const GridSpec& grid, std::uint64_t seed, int packets) {
  require(packets >= 1, "need at least one packet");
  const int d = grid.d();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  struct Packet {
    Vec3 centre;
    cplx amplitude;
    double t0, omega;
  };
  std::vector<Packet> ps;
  for (int k = 0; k < packets; ++k) {
    Packet p{};
    const double r = 0.8 + 0.7 * unit(rng);
    Vec3 dir{normal(rng), normal(rng), d == 3 ? normal(rng) : 0.0};
    const double len = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    for (int a = 0; a < 3; ++a) p.centre[a] = r * dir[a] / len;
    p.amplitude = {normal(rng), normal(rng)};
    p.t0 = -2.0 + 4.0 * unit(rng);
    p.omega = -1.0 + 2.0 * unit(rng);
    ps.push_back(p);
  }
  const double width = 0.3;
  SpaceTimeField out(grid, Domain::mixed);
  for (std::size_t idx = 0; idx < grid.space.size(); ++idx) {
    const double window = bump(grid.space.freq_norm(idx));
    if (window == 0.0) continue;
    const Vec3 xi = grid.space.freq_point(idx);
    for (const auto& p : ps) {
      double dist2 = 0.0;
      for (int a = 0; a < 3; ++a) dist2 += (xi[a] - p.centre[a]) * (xi[a] - p.centre[a]);
      const cplx c = window * p.amplitude * std::exp(-0.5 * dist2 / (width * width));
      for (int t = 0; t < grid.n_t; ++t) {
        const double s = grid.time(t) - p.t0;
        out.at(idx, t) += c * std::exp(-0.5 * s * s) * std::polar(1.0, p.omega * grid.time(t));
      }
    }
  }
  return out;
}

SharpConstantSearch sharp_constant_numeric(int d, double beta_minus) {
  check_dimension(d);
  require(beta_minus >= 0.25 * (3 - d) - 1e-15, "beta_minus below (3-d)/4");
  SharpConstantSearch out;
  auto M = [&](double l) { return sharp_profile(d, beta_minus, l); };
  const auto best = golden_section_max(M, 0.0, 1.0);
  // a log(1+l) + b log(1-l) is stationary at l = (a - b)/(a + b)
  const double a = 0.5 * (d - 1) - 2.0 * beta_minus;
  const double b = 2.0 * beta_minus + 0.5 * (d - 3);
  out.stationary = a + b > 0.0 ? std::clamp((a - b) / (a + b), 0.0, 1.0) : 0.0;
  const double sup = std::max(best.value, M(out.stationary));
  out.value = 4.0 * pi * sup;
  out.argmax = best.x;
  out.closed_form = sharp_constant_general(d, beta_minus).value;
  return out;
}

double near_max_fraction(int d, double beta_minus, int samples, double rel) {
  require(samples >= 2, "need at least two samples");
  const double sup = sharp_constant_numeric(d, beta_minus).value / (4.0 * pi);
  int count = 0;
  for (int i = 0; i < samples; ++i) {
    if (sharp_profile(d, beta_minus, static_cast<double>(i) / (samples - 1)) > (1.0 - rel) * sup) ++count;
  }
  return static_cast<double>(count) / samples;
}

PhaseSpaceData build_extremiser(const SpatialGrid& grid, const std::function<double(double)>& g0, int nodes) {
  if (grid.d != 2) throw InputError("the extremiser family exists only for d = 2");
  const auto measure = sphere_measure(2, nodes);
  bool nonzero = false;
  auto F = [&](const Vec3& xi, const Vec3& v) {
    const double xn = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
    const double profile = g0(xn);
    if (profile != 0.0) nonzero = true;
    const double tau = -(xi[0] * v[0] + xi[1] * v[1]);
    const double gap = xn * xn - tau * tau;
    // the two quarter powers cancel; v = +-xi/|xi| takes the limit
    if (!(gap > 0.0)) return cplx(profile);
    const double g_hat = std::pow(gap, -0.25) * profile;
    return cplx(std::pow(gap, 0.25) * g_hat);
  };
  auto f = phase_space_from_symbol(grid, measure, F);
  if (!nonzero) throw InputError("extremiser profile g0 vanishes on the lattice");
  return f;
}

double l2_smoothing_ratio(const PhaseSpaceData& f, int n_t, double len_t, const SymbolSpec& D, const RhoOptions& opt) {
  const GridSpec g{f.grid(), n_t, len_t};
  g.validate();
  const double norm = f.l2_norm_squared();
  if (!(norm > 0.0)) throw InputError("data must be nonzero");
  const std::size_t ns = g.space.size();
  const bool sphere = f.measure().kind == MeasureKind::sphere;
  std::vector<double> part(ns, 0.0);
  parallel_for(ns, [&](std::size_t idx) {
    bool any = false;
    for (std::size_t n = 0; n < f.node_count() && !any; ++n) any = f.frequency(n)[idx] != 0.0;
    if (!any) return;
    const double xn = g.space.freq_norm(idx);
    double s = 0.0;
    if (sphere) {
      const auto row = weighted_cell_row(f, idx, g, [&](double tau) { return D.at(xn, tau); });
      for (const auto& v : row) s += std::norm(v);
    } else {
      const auto row = rho_hat_row(f, idx, g, opt);
      for (int t = 0; t < g.n_t; ++t) {
        if (row[t] == 0.0) continue;
        const auto v = lattice_symbol_value(D, xn, g.tau(t), g.dtau());
        if (v) s += std::norm(*v * row[t]);
      }
    }
    part[idx] = s;
  });
  double total = 0.0;
  for (double p : part) total += p;
  return total * g.space.freq_cell() * g.dtau() / std::pow(2.0 * pi, g.d() + 1) / norm;
}

std::vector<AttainmentLevel> extremiser_sequence(const std::vector<int>& levels,
                                                 const std::function<double(double)>& g0, int nodes) {
  const auto D = d_plus_symbol(0.25) * d_minus_symbol(0.25);
  std::vector<AttainmentLevel> out;
  for (int n : levels) {
    const double len = n * pi / 4.0;
    const auto f = build_extremiser(SpatialGrid{2, n, len}, g0, nodes);
    out.push_back({n, l2_smoothing_ratio(f, n, len, D)});
  }
  return out;
}

RadialCheck sharp_constant_radial_check(int d, double beta_plus, double beta_minus,
                                        const std::vector<RadialModeData>& modes, const GridSpec& grid) {
  check_dimension(d);
  require(grid.d() == d, "grid dimension does not match d");
  require(std::abs(beta_plus + beta_minus - 0.5) < 1e-12, "need beta_+ + beta_- = 1/2");
  require(beta_minus > 0.5 * (2 - d), "need beta_- > (2-d)/2");
  if (modes.empty()) throw InputError("at least one radial mode is required");
  RadialCheck out;
  const double s2 = sphere_area(d - 2);
  double weighted = 0.0, plain = 0.0;
  int k_max = 0;
  for (const auto& mode : modes) {
    require(mode.d() == d, "mode dimension does not match d");
    k_max = std::max(k_max, mode.k());
    // ||Y||^2 over the sphere: e^{i m theta} has 2 pi, real harmonics are normalised
    const double y2 = d == 2 ? 2.0 * pi : 1.0;
    const double p = mode.radial_norm_squared() * y2;
    weighted += i_k_integral(d, mode.k(), beta_plus, beta_minus) * p;
    plain += p;
  }
  if (!(plain > 0.0)) throw InputError("radial modes vanish");
  for (int k = 0; k <= k_max; ++k) out.i_k.push_back(i_k_integral(d, k, beta_plus, beta_minus));
  out.series = 2.0 * s2 * s2 / std::pow(2.0 * pi, d - 1) * weighted;
  out.norm_f = sphere_area(d - 1) * plain / std::pow(2.0 * pi, d);
  out.c0 = sharp_constant_radial(d, beta_plus, beta_minus).value;
  out.series_over_c0 = out.series / (out.c0 * out.norm_f);

  const auto rho = funk_hecke_average(modes, grid, Sampling::cell_average);
  const auto D = d_plus_symbol(beta_plus) * d_minus_symbol(beta_minus);
  double total = 0.0;
  for (std::size_t idx = 0; idx < grid.space.size(); ++idx) {
    const double xn = grid.space.freq_norm(idx);
    for (int t = 0; t < grid.n_t; ++t) {
      const cplx r = rho.at(idx, t);
      if (r == 0.0) continue;
      const auto v = lattice_symbol_value(D, xn, grid.tau(t), grid.dtau());
      if (v) total += std::norm(*v * r);
    }
  }
  out.lhs = total * grid.space.freq_cell() * grid.dtau() / std::pow(2.0 * pi, d + 1);
  out.ratio = out.lhs / out.series;
  return out;
}

}  // namespace kinavg
