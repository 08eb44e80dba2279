#include "kinavg/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "kinavg/errors.hpp"
#include "kinavg/parallel.hpp"
#include "kinavg/quadrature.hpp"
#include "kinavg/special.hpp"

namespace kinavg {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int max_sphere_degree = 16;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Number of independent harmonics of degree k on S^{d-1}.
double harmonic_count(int d, int k) { return d == 2 ? (k == 0 ? 1.0 : 2.0) : 2.0 * k + 1.0; }

// int_{la}^{lb} w_d(l) p_{d,k}(l) dl for k = 0..k_max, w_2 = (1-l^2)^{-1/2}, w_3 = 1.
std::vector<double> cell_integrals(int d, int k_max, double la, double lb) {
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1);
  if (d == 2) {
    const double pa = std::acos(std::clamp(la, -1.0, 1.0));
    const double pb = std::acos(std::clamp(lb, -1.0, 1.0));
    out[0] = pa - pb;
    for (int k = 1; k <= k_max; ++k) out[k] = (std::sin(k * pa) - std::sin(k * pb)) / k;
    return out;
  }
  const auto a = legendre_table(3, k_max + 1, la);
  const auto b = legendre_table(3, k_max + 1, lb);
  out[0] = lb - la;
  for (int k = 1; k <= k_max; ++k) out[k] = ((b[k + 1] - b[k - 1]) - (a[k + 1] - a[k - 1])) / (2.0 * k + 1.0);
  return out;
}

// rho^ strictly inside the cone from harmonic coefficients, see below.
cplx slice_value(std::span<const cplx> c, double xn, int d, double tau) {
  const double l = -tau / xn;
  const auto p = legendre_table(d, static_cast<int>(c.size()) - 1, l);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) sum += c[k] * p[k];
  const double w = d == 2 ? 1.0 / std::sqrt(1.0 - l * l) : 1.0;
  return 2.0 * pi * sphere_area(d - 2) * w * sum / xn;
}

// Fills a tau row from harmonic coefficients c_k, where
// rho^(xi, tau) = (2 pi |S^{d-2}| / |xi|) w_d(l) sum_k c_k p_{d,k}(l), l = -tau/|xi|.
void row_from_coefficients(std::span<const cplx> c, double xn, const GridSpec& g, Sampling sampling,
                           std::span<cplx> row) {
  const int d = g.d();
  const int k_max = static_cast<int>(c.size()) - 1;
  const double front = 2.0 * pi * sphere_area(d - 2);
  const double dtau = g.dtau();
  const double h = 0.5 * dtau;
  // signed lattice index j is inside the cone when |j dtau| <= |xi|, the same
  // test the lattice uses everywhere else
  auto inside = [&](int j) { return std::abs(j * dtau) <= xn; };
  for (int i = 0; i < g.n_t; ++i) {
    const int j = i < g.n_t / 2 ? i : i - g.n_t;
    const double tau = j * dtau;
    row[i] = 0.0;
    if (!inside(j) || xn == 0.0) continue;
    cplx sum = 0.0;
    if (sampling == Sampling::cell_average) {
      // the last cell inside the cone also takes the sliver up to the cone
      const double hi = inside(j + 1) ? tau + h : xn;
      const double lo = inside(j - 1) ? tau - h : -xn;
      const auto J = cell_integrals(d, k_max, -hi / xn, -lo / xn);
      for (int k = 0; k <= k_max; ++k) sum += c[k] * J[k];
      row[i] = front * sum / dtau;
    } else if (std::abs(tau) < xn) {
      row[i] = slice_value(c, xn, d, tau);
    }
  }
}

void transform_rows(std::vector<cplx>& data, const SpatialGrid& grid, std::size_t nodes, int sign) {
  const double s = sign < 0 ? grid.cell() : grid.freq_cell() / std::pow(2.0 * pi, grid.d);
  for (std::size_t n = 0; n < nodes; ++n) {
    std::span<cplx> row(data.data() + n * grid.size(), grid.size());
    dft_inplace(row, grid.dims(), sign);
    for (auto& v : row) v *= s;
  }
}

}  // namespace

std::string to_string(MeasureKind k) { return k == MeasureKind::sphere ? "sphere" : "kappa_ball"; }

double VelocityMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

VelocityMeasure sphere_measure(int d, int n) {
  require(d == 2 || d == 3, "velocity measures support d in {2, 3}");
  VelocityMeasure m;
  m.kind = MeasureKind::sphere;
  m.d = d;
  if (d == 2) {
    require(n >= 4 && n % 2 == 0, "circle rule needs an even node count >= 4");
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * pi * j / n;
      m.nodes.push_back({std::cos(th), std::sin(th), 0.0});
      m.weights.push_back(2.0 * pi / n);
    }
    m.degree = n / 2 - 1;
    return m;
  }
  require(n >= 2, "sphere rule needs at least 2 polar nodes");
  const auto gl = gauss_legendre(n);
  const int n_phi = 2 * n;
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double z = gl.nodes[i], rho = std::sqrt(1.0 - z * z);
    for (int j = 0; j < n_phi; ++j) {
      const double ph = 2.0 * pi * j / n_phi;
      m.nodes.push_back({rho * std::cos(ph), rho * std::sin(ph), z});
      m.weights.push_back(gl.weights[i] * 2.0 * pi / n_phi);
    }
  }
  m.degree = std::min(n - 1, max_sphere_degree);
  return m;
}

VelocityMeasure kappa_ball_measure(int d, double kappa, int n_radial, int n_angular) {
  require(kappa >= -1.0 && kappa <= 0.0, "kappa must lie in [-1, 0]");
  if (kappa == -1.0) {
    VelocityMeasure m = sphere_measure(d, n_angular);
    m.scale = 0.5;
    for (auto& w : m.weights) w *= 0.5;
    return m;
  }
  require(n_radial >= 1, "ball rule needs radial nodes");
  const VelocityMeasure ang = sphere_measure(d, n_angular);
  const auto rad = gauss_jacobi_unit(n_radial, kappa, 0.5 * d - 1.0);
  VelocityMeasure m;
  m.kind = MeasureKind::kappa_ball;
  m.d = d;
  m.kappa = kappa;
  const double norm = 0.5 / std::tgamma(1.0 + kappa);
  for (std::size_t i = 0; i < rad.size(); ++i) {
    const double s = std::sqrt(rad.nodes[i]);
    for (std::size_t j = 0; j < ang.size(); ++j) {
      const auto& u = ang.nodes[j];
      m.nodes.push_back({s * u[0], s * u[1], s * u[2]});
      m.weights.push_back(norm * rad.weights[i] * ang.weights[j]);
    }
  }
  return m;
}

PhaseSpaceData::PhaseSpaceData(SpatialGrid grid, VelocityMeasure measure, std::vector<cplx> physical,
                               std::vector<cplx> hat)
    : grid_(grid), measure_(std::move(measure)), physical_(std::move(physical)), hat_(std::move(hat)) {}

PhaseSpaceData::PhaseSpaceData(SpatialGrid grid, VelocityMeasure measure, std::vector<cplx> physical)
    : grid_(grid), measure_(std::move(measure)), physical_(std::move(physical)) {
  grid_.validate();
  require(measure_.d == grid_.d, "velocity measure and grid disagree on the dimension");
  require(physical_.size() == grid_.size() * measure_.size(), "phase-space sample count does not match grid x nodes");
  hat_ = physical_;
  transform_rows(hat_, grid_, measure_.size(), -1);
}

PhaseSpaceData PhaseSpaceData::from_frequency(SpatialGrid grid, VelocityMeasure measure, std::vector<cplx> hat) {
  grid.validate();
  require(measure.d == grid.d, "velocity measure and grid disagree on the dimension");
  require(hat.size() == grid.size() * measure.size(), "phase-space sample count does not match grid x nodes");
  std::vector<cplx> phys = hat;
  transform_rows(phys, grid, measure.size(), +1);
  return PhaseSpaceData(grid, std::move(measure), std::move(phys), std::move(hat));
}

std::span<const cplx> PhaseSpaceData::physical(std::size_t node) const {
  return std::span<const cplx>(physical_).subspan(node * grid_.size(), grid_.size());
}

std::span<const cplx> PhaseSpaceData::frequency(std::size_t node) const {
  return std::span<const cplx>(hat_).subspan(node * grid_.size(), grid_.size());
}

double PhaseSpaceData::l2_norm_squared() const {
  double total = 0.0;
  for (std::size_t n = 0; n < node_count(); ++n) {
    double s = 0.0;
    for (const auto& v : physical(n)) s += std::norm(v);
    total += measure_.weights[n] * s;
  }
  return total * grid_.cell();
}

PhaseSpaceData phase_space_from_symbol(const SpatialGrid& grid, const VelocityMeasure& measure,
                                       const std::function<cplx(const Vec3&, const Vec3&)>& F) {
  std::vector<cplx> hat(grid.size() * measure.size());
  for (std::size_t n = 0; n < measure.size(); ++n) {
    for (std::size_t idx = 0; idx < grid.size(); ++idx) hat[n * grid.size() + idx] = F(grid.freq_point(idx), measure.nodes[n]);
  }
  return PhaseSpaceData::from_frequency(grid, measure, std::move(hat));
}

std::vector<double> legendre_table(int d, int k_max, double t) {
  require(d == 2 || d == 3, "Legendre tables support d in {2, 3}");
  std::vector<double> p(static_cast<std::size_t>(std::max(k_max, 1)) + 1);
  p[0] = 1.0;
  p[1] = t;
  for (int k = 1; k < k_max; ++k) {
    p[k + 1] = d == 2 ? 2.0 * t * p[k] - p[k - 1] : ((2.0 * k + 1.0) * t * p[k] - k * p[k - 1]) / (k + 1.0);
  }
  p.resize(static_cast<std::size_t>(k_max) + 1);
  return p;
}

namespace {

// c_k = (N_k / |S^{d-1}|) sum_n w_n F_n p_{d,k}(v_n . xi/|xi|)
std::vector<cplx> sphere_coefficients(const PhaseSpaceData& f, std::size_t idx, const Vec3& unit) {
  const auto& m = f.measure();
  const int d = m.d;
  std::vector<cplx> c(static_cast<std::size_t>(m.degree) + 1, 0.0);
  for (std::size_t n = 0; n < m.size(); ++n) {
    const cplx F = f.frequency(n)[idx];
    if (F == 0.0) continue;
    const auto p = legendre_table(d, m.degree, dot(m.nodes[n], unit));
    for (int k = 0; k <= m.degree; ++k) c[k] += m.weights[n] * F * p[k];
  }
  const double area = sphere_area(d - 1);
  for (int k = 0; k <= m.degree; ++k) c[k] *= harmonic_count(d, k) / area;
  return c;
}

void slab_row(const PhaseSpaceData& f, std::size_t idx, const GridSpec& g, const RhoOptions& opt, std::span<cplx> row) {
  const auto& m = f.measure();
  const Vec3 xi = g.space.freq_point(idx);
  const double xn = g.space.freq_norm(idx);
  const double dtau = g.dtau();
  const double eps = opt.slab_cells * dtau;
  const double h = 0.5 * dtau;
  std::fill(row.begin(), row.end(), cplx(0.0));
  // largest lattice index inside the cone; its cell absorbs slab mass beyond it
  long edge = static_cast<long>(std::floor(xn / dtau));
  while (std::abs(static_cast<double>(edge + 1) * dtau) <= xn) ++edge;
  while (edge > 0 && std::abs(static_cast<double>(edge) * dtau) > xn) --edge;
  for (std::size_t n = 0; n < m.size(); ++n) {
    const cplx F = f.frequency(n)[idx];
    if (F == 0.0) continue;
    const double s = -dot(m.nodes[n], xi);
    const long lo = std::clamp(static_cast<long>(std::ceil((s - eps - h) / dtau)), -edge, edge);
    const long hi = std::clamp(static_cast<long>(std::floor((s + eps + h) / dtau)), -edge, edge);
    for (long j = lo; j <= hi; ++j) {
      if (std::abs(j) >= g.n_t / 2) continue;
      const double tau = static_cast<double>(j) * dtau;
      double share = 0.0;
      if (opt.sampling == Sampling::cell_average) {
        const double top = j == edge ? s + eps : tau + h;
        const double bottom = j == -edge ? s - eps : tau - h;
        share = std::max(0.0, std::min(top, s + eps) - std::max(bottom, s - eps)) / (2.0 * eps * dtau);
      } else if (std::abs(tau - s) <= eps) {
        share = 1.0 / (2.0 * eps);
      }
      const long wrapped = j < 0 ? j + g.n_t : j;
      row[static_cast<std::size_t>(wrapped)] += 2.0 * pi * m.weights[n] * share * F;
    }
  }
}

}  // namespace

std::vector<cplx> rho_hat_row(const PhaseSpaceData& f, std::size_t idx, const GridSpec& g, const RhoOptions& opt) {
  require(g.space == f.grid(), "time grid must extend the data's spatial grid");
  require(opt.slab_cells > 0.0, "slab width must be positive");
  std::vector<cplx> row(static_cast<std::size_t>(g.n_t), 0.0);
  const auto& m = f.measure();
  if (m.kind == MeasureKind::kappa_ball) {
    slab_row(f, idx, g, opt, row);
    return row;
  }
  const double xn = g.space.freq_norm(idx);
  if (xn == 0.0) {
    if (opt.sampling == Sampling::cell_average) {
      cplx total = 0.0;
      for (std::size_t n = 0; n < m.size(); ++n) total += m.weights[n] * f.frequency(n)[idx];
      row[0] = 2.0 * pi * total / g.dtau();
    }
    return row;
  }
  const Vec3 xi = g.space.freq_point(idx);
  const Vec3 unit{xi[0] / xn, xi[1] / xn, xi[2] / xn};
  const auto c = sphere_coefficients(f, idx, unit);
  if (std::all_of(c.begin(), c.end(), [](cplx v) { return v == 0.0; })) return row;
  row_from_coefficients(c, xn, g, opt.sampling, row);
  return row;
}

cplx rho_hat_at(const PhaseSpaceData& f, std::size_t idx, double tau) {
  require(f.measure().kind == MeasureKind::sphere, "pointwise rho^ needs a sphere measure");
  const double xn = f.grid().freq_norm(idx);
  if (!(std::abs(tau) < xn)) return 0.0;
  const Vec3 xi = f.grid().freq_point(idx);
  const auto c = sphere_coefficients(f, idx, {xi[0] / xn, xi[1] / xn, xi[2] / xn});
  return slice_value(c, xn, f.measure().d, tau);
}

std::vector<cplx> rho_hat_points(const PhaseSpaceData& f, std::size_t idx, std::span<const double> taus) {
  require(f.measure().kind == MeasureKind::sphere, "pointwise rho^ needs a sphere measure");
  std::vector<cplx> out(taus.size(), 0.0);
  const double xn = f.grid().freq_norm(idx);
  if (xn == 0.0) return out;
  const Vec3 xi = f.grid().freq_point(idx);
  const auto c = sphere_coefficients(f, idx, {xi[0] / xn, xi[1] / xn, xi[2] / xn});
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (std::abs(taus[i]) < xn) out[i] = slice_value(c, xn, f.measure().d, taus[i]);
  }
  return out;
}

std::vector<cplx> weighted_cell_row(const PhaseSpaceData& f, std::size_t idx, const GridSpec& g,
                                    const std::function<cplx(double)>& weight, int nodes) {
  require(f.measure().kind == MeasureKind::sphere, "cell projection needs a sphere measure");
  require(g.space == f.grid(), "time grid must extend the data's spatial grid");
  std::vector<cplx> row(static_cast<std::size_t>(g.n_t), 0.0);
  const double xn = g.space.freq_norm(idx);
  if (xn == 0.0) return row;
  const int d = g.d();
  const Vec3 xi = g.space.freq_point(idx);
  const auto c = sphere_coefficients(f, idx, {xi[0] / xn, xi[1] / xn, xi[2] / xn});
  if (std::all_of(c.begin(), c.end(), [](cplx v) { return v == 0.0; })) return row;
  const int k_max = static_cast<int>(c.size()) - 1;
  const double front = 2.0 * pi * sphere_area(d - 2);
  const double dtau = g.dtau();
  const double h = 0.5 * dtau;
  const auto unit_rule = gauss_legendre(nodes, 0.0, 1.0);
  for (int i = 0; i < g.n_t; ++i) {
    const int j = i < g.n_t / 2 ? i : i - g.n_t;
    const double lo = std::max(j * dtau - h, -xn), hi = std::min(j * dtau + h, xn);
    if (!(lo < hi)) continue;
    // rho^ dtau = front sum_k c_k p_k(l) dl, and dl / w_2(l) = dpsi for l = cos psi
    double a = -hi / xn, b = -lo / xn;
    if (d == 2) {
      a = std::acos(std::clamp(-lo / xn, -1.0, 1.0));
      b = std::acos(std::clamp(-hi / xn, -1.0, 1.0));
    }
    cplx sum = 0.0;
    for (std::size_t q = 0; q < unit_rule.size(); ++q) {
      const double u = a + (b - a) * unit_rule.nodes[q];
      const double l = d == 2 ? std::cos(u) : u;
      const auto p = legendre_table(d, k_max, l);
      cplx s = 0.0;
      for (int k = 0; k <= k_max; ++k) s += c[k] * p[k];
      const cplx w = weight(-xn * l);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw NumericalError("cell weight is not finite");
      sum += unit_rule.weights[q] * (b - a) * w * s;
    }
    row[i] = front * sum / dtau;
  }
  return row;
}

SpaceTimeField average_rho(const PhaseSpaceData& f, int n_t, double len_t, const RhoOptions& opt) {
  const GridSpec g{f.grid(), n_t, len_t};
  g.validate();
  SpaceTimeField out(g, Domain::frequency);
  auto data = out.samples();
  parallel_for(g.space.size(), [&](std::size_t idx) {
    const auto row = rho_hat_row(f, idx, g, opt);
    std::copy(row.begin(), row.end(), data.begin() + static_cast<std::ptrdiff_t>(idx * g.n_t));
  });
  return out;
}

cplx average_rho_direct(const PhaseSpaceData& f, const Vec3& x, double t) {
  const SpatialGrid& g = f.grid();
  const auto& m = f.measure();
  const double scale = g.freq_cell() / std::pow(2.0 * pi, g.d);
  cplx total = 0.0;
  std::vector<std::vector<cplx>> axis(static_cast<std::size_t>(g.d), std::vector<cplx>(static_cast<std::size_t>(g.n)));
  for (std::size_t n = 0; n < m.size(); ++n) {
    for (int a = 0; a < g.d; ++a) {
      const double y = x[a] - t * m.nodes[n][a];
      for (int i = 0; i < g.n; ++i) axis[a][i] = std::polar(1.0, y * g.freq(i));
    }
    const auto hat = f.frequency(n);
    cplx s = 0.0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      const auto mi = g.unravel(idx);
      cplx e = axis[0][mi[0]] * axis[1][mi[1]];
      if (g.d == 3) e *= axis[2][mi[2]];
      s += hat[idx] * e;
    }
    total += m.weights[n] * scale * s;
  }
  return total;
}

DualResult dual_rho_star(const SpaceTimeField& g, const VelocityMeasure& measure) {
  const GridSpec& gs = g.grid();
  require(measure.d == gs.d(), "velocity measure and grid disagree on the dimension");
  const SpaceTimeField mixed = g.domain() == Domain::mixed      ? g
                               : g.domain() == Domain::physical ? spatial_transform(g)
                                                                : spatial_transform(inverse_transform(g));
  const std::size_t ns = gs.space.size();
  std::vector<cplx> hat(ns * measure.size());
  const double nyquist = 0.5 * gs.n_t * gs.dtau();
  std::vector<std::size_t> missed(ns, 0);
  parallel_for(ns, [&](std::size_t idx) {
    const Vec3 xi = gs.space.freq_point(idx);
    const auto row = mixed.samples().subspan(idx * gs.n_t, gs.n_t);
    for (std::size_t n = 0; n < measure.size(); ++n) {
      const double tau = -dot(xi, measure.nodes[n]);
      if (std::abs(tau) > nyquist) {
        ++missed[idx];
        continue;
      }
      hat[n * ns + idx] = time_fourier(row, gs, tau);
    }
  });
  std::size_t out = 0;
  for (auto v : missed) out += v;
  return {PhaseSpaceData::from_frequency(gs.space, measure, std::move(hat)), out};
}

cplx inner_product(const SpaceTimeField& a, const SpaceTimeField& b) {
  require(a.grid() == b.grid() && a.domain() == b.domain(), "inner product needs fields on the same grid and domain");
  require(a.domain() != Domain::mixed, "inner product of mixed fields is not defined");
  const GridSpec& g = a.grid();
  const double cell = a.domain() == Domain::physical
                          ? g.space.cell() * g.dt()
                          : g.space.freq_cell() * g.dtau() / std::pow(2.0 * pi, g.d() + 1);
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) s += a.samples()[i] * std::conj(b.samples()[i]);
  return cell * s;
}

cplx inner_product(const PhaseSpaceData& a, const PhaseSpaceData& b) {
  require(a.grid() == b.grid() && a.node_count() == b.node_count(), "phase-space data on different grids");
  cplx total = 0.0;
  for (std::size_t n = 0; n < a.node_count(); ++n) {
    cplx s = 0.0;
    const auto x = a.physical(n), y = b.physical(n);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    total += a.measure().weights[n] * s;
  }
  return total * a.grid().cell();
}

cplx interpolate_velocity(const PhaseSpaceData& f, std::size_t idx, const Vec3& v) {
  const auto& m = f.measure();
  require(m.kind == MeasureKind::sphere, "velocity interpolation needs a sphere rule");
  const double area = sphere_area(m.d - 1);
  cplx s = 0.0;
  for (std::size_t n = 0; n < m.size(); ++n) {
    const auto p = legendre_table(m.d, m.degree, dot(m.nodes[n], v));
    double kernel = 0.0;
    for (int k = 0; k <= m.degree; ++k) kernel += harmonic_count(m.d, k) * p[k];
    s += m.weights[n] * f.frequency(n)[idx] * kernel;
  }
  return s / (area * m.scale);
}

RadialModeData::RadialModeData(int d, int k, int m, const std::function<double(double)>& profile)
    : d_(d), k_(k), m_(m) {
  require(d == 2 || d == 3, "radial modes support d in {2, 3}");
  require(k >= 0, "mode degree must be nonnegative");
  require(d == 2 ? std::abs(m) == k : std::abs(m) <= k, "mode order out of range for its degree");
  const double step = std::log(4.0) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    radii_.push_back(0.5 * std::exp(step * i));
    values_.push_back(profile(radii_.back()));
  }
  auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(values_.begin(), values_.end(),
                                                                               std::log(0.5), step);
  spline_ = [spline](double r) { return (*spline)(std::log(r)); };
}

double RadialModeData::profile(double r) const {
  if (!(r >= 0.5 && r <= 2.0)) return 0.0;
  return spline_(r);
}

cplx RadialModeData::harmonic(const Vec3& u) const {
  if (d_ == 2) return std::polar(1.0, m_ * std::atan2(u[1], u[0]));
  return real_spherical_harmonic(k_, m_, std::acos(std::clamp(u[2], -1.0, 1.0)), std::atan2(u[1], u[0]));
}

double RadialModeData::radial_norm_squared() const {
  return integrate([&](double r) { return std::pow(profile(r), 2) * std::pow(r, d_ - 1); }, 0.5, 2.0, 1e-10);
}

PhaseSpaceData phase_space_from_modes(const std::vector<RadialModeData>& modes, const SpatialGrid& grid,
                                      const VelocityMeasure& measure) {
  for (const auto& m : modes) require(m.d() == grid.d, "mode dimension does not match the grid");
  return phase_space_from_symbol(grid, measure, [&](const Vec3& xi, const Vec3& v) {
    const double r = std::sqrt(dot(xi, xi));
    cplx s = 0.0;
    for (const auto& m : modes) {
      const double p = m.profile(r);
      if (p != 0.0) s += p * m.harmonic(v);
    }
    return s;
  });
}

SpaceTimeField funk_hecke_average(const std::vector<RadialModeData>& modes, const GridSpec& g, Sampling sampling) {
  g.validate();
  require(g.d() == 2 || g.d() == 3, "Funk–Hecke assembly supports d in {2, 3}");
  int k_max = 0;
  for (const auto& m : modes) {
    require(m.d() == g.d(), "mode dimension does not match the grid");
    k_max = std::max(k_max, m.k());
  }
  SpaceTimeField out(g, Domain::frequency);
  auto data = out.samples();
  parallel_for(g.space.size(), [&](std::size_t idx) {
    const double xn = g.space.freq_norm(idx);
    if (xn == 0.0) return;
    const Vec3 xi = g.space.freq_point(idx);
    const Vec3 unit{xi[0] / xn, xi[1] / xn, xi[2] / xn};
    std::vector<cplx> c(static_cast<std::size_t>(k_max) + 1, 0.0);
    bool any = false;
    for (const auto& m : modes) {
      const double p = m.profile(xn);
      if (p == 0.0) continue;
      c[m.k()] += p * m.harmonic(unit);
      any = true;
    }
    if (!any) return;
    row_from_coefficients(c, xn, g, sampling, data.subspan(idx * g.n_t, g.n_t));
  });
  return out;
}

}  // namespace kinavg
