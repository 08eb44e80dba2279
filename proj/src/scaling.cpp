#include "kinavg/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "kinavg/errors.hpp"
#include "kinavg/fft.hpp"
#include "kinavg/parallel.hpp"
#include "kinavg/quadrature.hpp"
#include "kinavg/radon.hpp"
#include "kinavg/special.hpp"

namespace kinavg {

namespace {

constexpr double pi = std::numbers::pi;

bool power_of_two(int n) { return n >= 8 && (n & (n - 1)) == 0; }

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string describe(const PlateLattice& l) {
  return "plate n_plate=" + std::to_string(l.n_plate) + " n_cross=" + std::to_string(l.n_cross) +
         " oversample=" + num(l.oversample);
}

Rational conjugate(const Rational& p) { return p / (p - Rational(1)); }

void check_plate_pair(const Rational& q, const Rational& r) {
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  require(q == r, "plate lattices evaluate space-time Lebesgue norms only, so q must equal r");
}

}  // namespace

PowerLawFit powerlaw_fit(std::span<const std::pair<double, double>> pairs) {
  require(pairs.size() >= 4, "a power-law fit needs at least 4 points");
  std::vector<double> x, y;
  for (const auto& [s, v] : pairs) {
    require(s > 0.0 && std::isfinite(s), "scales must be positive and finite");
    require(v > 0.0 && std::isfinite(v), "values must be positive and finite");
    x.push_back(std::log2(s));
    y.push_back(std::log2(v));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "scales must not all coincide");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.residual = std::max(fit.residual, std::abs(y[i] - fit.slope * x[i] - fit.intercept));
  }
  return fit;
}

void KnappParams::validate() const {
  grid.validate();
  require(delta > 0.0 && delta <= 0.125, "delta must lie in (0, 1/8]");
  const double dxi = grid.space.dxi();
  require(std::sqrt(delta) >= 4.0 * dxi, "sqrt(delta) must span at least 4 frequency cells");
  require(delta >= 4.0 * grid.dtau(), "delta must span at least 4 tau cells");
  require((grid.n_x() / 2 - 1) * dxi >= 2.0 + delta, "spatial frequency lattice must reach 2 + delta");
  require((grid.n_t / 2 - 1) * grid.dtau() >= 2.0, "tau lattice must reach 2");
}

double knapp_symbol(int d, double delta, std::span<const double> xi, double tau) {
  require(static_cast<int>(xi.size()) >= d, "frequency vector shorter than d");
  const double xd = xi[static_cast<std::size_t>(d - 1)];
  double v = raw_bump((xd - tau) / delta) * raw_bump(0.5 * (xd + tau));
  const double root = std::sqrt(delta);
  for (int j = 0; j + 1 < d && v != 0.0; ++j) v *= raw_bump(xi[static_cast<std::size_t>(j)] / root);
  return v;
}

SpaceTimeField knapp_family(const KnappParams& params) {
  params.validate();
  const GridSpec& g = params.grid;
  SpaceTimeField out(g, Domain::frequency);
  for (std::size_t idx = 0; idx < g.space.size(); ++idx) {
    const auto xi = g.space.freq_point(idx);
    for (int t = 0; t < g.n_t; ++t) out.at(idx, t) = knapp_symbol(g.d(), params.delta, xi, g.tau(t));
  }
  return out;
}

void PlateLattice::validate() const {
  require(d == 2 || d == 3, "plate lattices support d in {2, 3}");
  require(delta > 0.0 && delta <= 0.125, "delta must lie in (0, 1/8]");
  require(power_of_two(n_plate) && power_of_two(n_cross), "plate sample counts must be powers of two >= 8");
  require(oversample >= 1.0, "oversample must be at least 1");
}

double PlateLattice::width_c() const { return 1.5 * std::sqrt(delta); }

std::vector<int> PlateLattice::dims() const {
  std::vector<int> out{n_plate, n_plate};
  for (int j = 1; j < d; ++j) out.push_back(n_cross);
  return out;
}

std::size_t PlateLattice::size() const {
  std::size_t n = std::size_t(n_plate) * std::size_t(n_plate);
  for (int j = 1; j < d; ++j) n *= std::size_t(n_cross);
  return n;
}

namespace {

// Frequency coordinates of every plate node, visited in storage order.
template <class F>
void for_each_node(const PlateLattice& l, F&& visit) {
  const double sa = l.step_a(), sb = l.step_b(), sc = l.step_c();
  const double ca = 1.25 * l.delta, cb = 2.5, cc = 1.25 * std::sqrt(l.delta);
  const int nc = l.d == 3 ? l.n_cross : 1;
  std::array<double, 3> xi{};
  std::size_t idx = 0;
  for (int i = 0; i < l.n_plate; ++i) {
    const double a = ca + (i - l.n_plate / 2) * sa;
    for (int j = 0; j < l.n_plate; ++j) {
      const double b = cb + (j - l.n_plate / 2) * sb;
      xi[static_cast<std::size_t>(l.d - 1)] = 0.5 * (a + b);
      const double tau = 0.5 * (b - a);
      for (int k = 0; k < l.n_cross; ++k) {
        xi[0] = cc + (k - l.n_cross / 2) * sc;
        for (int m = 0; m < nc; ++m) {
          if (l.d == 3) xi[1] = cc + (m - l.n_cross / 2) * sc;
          visit(idx++, std::span<const double>(xi.data(), static_cast<std::size_t>(l.d)), tau);
        }
      }
    }
  }
}

double norm_of(std::span<const double> xi) {
  double s = 0.0;
  for (double v : xi) s += v * v;
  return std::sqrt(s);
}

}  // namespace

PlateField::PlateField(PlateLattice lattice, std::vector<cplx> hat) : lattice_(lattice), hat_(std::move(hat)) {}

PlateField::PlateField(PlateLattice lattice, const std::function<cplx(std::span<const double>, double)>& hat)
    : lattice_(lattice) {
  lattice_.validate();
  hat_.resize(lattice_.size());
  for_each_node(lattice_, [&](std::size_t idx, std::span<const double> xi, double tau) { hat_[idx] = hat(xi, tau); });
}

PlateField PlateField::knapp(const PlateLattice& lattice) {
  const int d = lattice.d;
  const double delta = lattice.delta;
  return PlateField(lattice, [d, delta](std::span<const double> xi, double tau) -> cplx {
    return knapp_symbol(d, delta, xi, tau);
  });
}

PlateField PlateField::multiplied(const std::function<cplx(double, double)>& m) const {
  std::vector<cplx> out = hat_;
  for_each_node(lattice_, [&](std::size_t idx, std::span<const double> xi, double tau) {
    if (out[idx] == 0.0) return;
    const cplx v = m(norm_of(xi), tau);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalError("multiplier is not finite on the plate lattice");
    }
    out[idx] *= v;
  });
  return PlateField(lattice_, std::move(out));
}

PlateField PlateField::multiplied(const SymbolSpec& m) const {
  return multiplied([&m](double xn, double tau) { return m.at(xn, tau); });
}

double PlateField::l2_norm() const {
  const auto& l = lattice_;
  double s = 0.0;
  for (const auto& v : hat_) s += std::norm(v);
  const double cell = 0.5 * l.step_a() * l.step_b() * std::pow(l.step_c(), l.d - 1);
  return std::sqrt(s * cell / std::pow(2.0 * pi, l.d + 1));
}

const std::vector<cplx>& PlateField::physical() const {
  if (physical_.empty()) {
    const auto& l = lattice_;
    physical_ = hat_;
    dft_inplace(physical_, l.dims(), +1);
    const double scale = 0.5 * l.step_a() * l.step_b() * std::pow(l.step_c(), l.d - 1) / std::pow(2.0 * pi, l.d + 1);
    for (auto& v : physical_) v *= scale;
  }
  return physical_;
}

std::array<double, 3> PlateField::box_coordinates(std::size_t idx) const {
  const auto& l = lattice_;
  const double du = 2.0 * pi / (l.n_plate * l.step_a());
  const double dw = 2.0 * pi / (l.n_plate * l.step_b());
  const double dx = 2.0 * pi / (l.n_cross * l.step_c());
  double cross = 0.0;
  for (int j = 1; j < l.d; ++j) {
    cross = std::max(cross, std::abs(wrapped(static_cast<int>(idx % std::size_t(l.n_cross)), l.n_cross, dx)));
    idx /= std::size_t(l.n_cross);
  }
  const int iw = static_cast<int>(idx % std::size_t(l.n_plate));
  const int iu = static_cast<int>(idx / std::size_t(l.n_plate));
  return {cross, 2.0 * std::abs(wrapped(iw, l.n_plate, dw)), 2.0 * std::abs(wrapped(iu, l.n_plate, du))};
}

double PlateField::lp_norm(double p) const {
  require(p >= 1.0 && std::isfinite(p), "Lebesgue exponent must be finite and >= 1");
  const auto& l = lattice_;
  const auto& h = physical();
  double s = 0.0;
  for (const auto& v : h) s += std::pow(std::abs(v), p);
  // dx_d dt = 2 dU dW
  const double cell = 2.0 * std::pow(2.0 * pi, l.d + 1) /
                      (l.n_plate * l.step_a() * l.n_plate * l.step_b() * std::pow(l.n_cross * l.step_c(), l.d - 1));
  return std::pow(s * cell, 1.0 / p);
}

double PlateField::box_fraction(double p, double cross, double along_b, double along_a) const {
  require(p >= 1.0 && std::isfinite(p), "Lebesgue exponent must be finite and >= 1");
  const auto& h = physical();
  double inside = 0.0, total = 0.0;
  for (std::size_t idx = 0; idx < h.size(); ++idx) {
    const double w = std::pow(std::abs(h[idx]), p);
    total += w;
    const auto c = box_coordinates(idx);
    if (c[0] <= cross && c[1] <= along_b && c[2] <= along_a) inside += w;
  }
  if (!(total > 0.0)) throw NumericalError("plate field vanishes");
  return inside / total;
}

double PlateField::dual_box_fraction(double p, double c) const {
  const double delta = lattice_.delta;
  return box_fraction(p, c / std::sqrt(delta), c, c / delta);
}

std::string to_string(ScanKind k) {
  switch (k) {
    case ScanKind::necessity: return "necessity";
    case ScanKind::sufficiency: return "sufficiency";
    case ScanKind::descriptive: return "descriptive";
  }
  return "unknown";
}

std::string to_string(RhoData k) { return k == RhoData::generic ? "generic" : "radial_x"; }

void ScalingReport::finish() {
  if (points.size() < 4) throw InputError(id + ": at least 4 scales are required");
  std::vector<std::pair<double, double>> pairs;
  for (const auto& p : points) pairs.emplace_back(p.scale, p.ratio);
  fit = powerlaw_fit(pairs);
  switch (kind) {
    case ScanKind::necessity: pass = std::abs(fit.slope - predicted) <= tolerance; break;
    case ScanKind::sufficiency: pass = fit.slope <= predicted + tolerance; break;
    case ScanKind::descriptive: pass.reset(); break;
  }
}

std::vector<double> default_deltas() {
  std::vector<double> out;
  for (int k = 3; k <= 7; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

std::vector<int> default_ks() { return {3, 4, 5, 6, 7, 8}; }

ScalingReport knapp_scan(int d, const Rational& q, const Rational& r, const Rational& alpha,
                         const std::vector<double>& deltas, const PlateLattice& base) {
  check_dimension(d);
  check_plate_pair(q, r);
  require(alpha > Rational(-1), "cone multiplier order must exceed -1");
  if (deltas.size() < 4) throw InputError("knapp scan needs at least 4 values of delta");
  std::vector<PlateLattice> lattices;
  for (double delta : deltas) {
    PlateLattice l = base;
    l.d = d;
    l.delta = delta;
    l.validate();
    lattices.push_back(l);
  }
  const Rational alpha_nec = Rational(1) / q + Rational(d - 1) / (Rational(2) * r) - Rational(d + 1, 4);
  const Verdict verdict = cone_verdict(d, q, r, alpha);
  const double qd = conjugate(q).to_double();
  const auto C = cone_symbol(alpha.to_double());

  ScalingReport rep;
  rep.id = "knapp-scan";
  rep.claim = "knapp-necessity";
  rep.kind = ScanKind::necessity;
  rep.predicted = (alpha - alpha_nec).to_double();
  rep.verdict = to_string(verdict);
  rep.params = {{"d", std::to_string(d)}, {"q", q.str()}, {"r", r.str()}, {"alpha", alpha.str()},
                {"alpha_nec", alpha_nec.str()}};
  rep.grid = {{"lattice", describe(base)}};
  rep.points.resize(lattices.size());
  parallel_for(lattices.size(), [&](std::size_t i) {
    const auto g = PlateField::knapp(lattices[i]);
    const double lhs = g.multiplied(C).l2_norm();
    const double rhs = g.lp_norm(qd);
    rep.points[i] = {lattices[i].delta, lhs, rhs, lhs / rhs};
  });
  rep.finish();
  return rep;
}

ScalingReport dyadic_scan(int d, const Rational& q, const Rational& r, const std::vector<int>& ks,
                          const PlateLattice& base) {
  check_dimension(d);
  check_plate_pair(q, r);
  require(wave_admissible(d, q, r) || (q == Rational(2) && r == Rational(2)),
          "dyadic scan needs a wave-admissible pair or q = r = 2");
  if (ks.size() < 4) throw InputError("dyadic scan needs at least 4 values of k");
  std::vector<PlateLattice> lattices;
  for (int k : ks) {
    require(k >= default_k0, "k must be at least " + std::to_string(default_k0));
    PlateLattice l = base;
    l.d = d;
    l.delta = std::ldexp(1.0, -k);
    l.validate();
    lattices.push_back(l);
  }
  const auto star = alpha_star(d, q, r);
  ScalingReport rep;
  rep.id = "dyadic-scan";
  rep.claim = "dyadic-cone-envelope";
  rep.kind = ScanKind::sufficiency;
  rep.predicted = star.value.to_double();
  rep.verdict = "alpha* = " + star.value.str() + " (branch " + std::to_string(star.branch) + ")";
  rep.params = {{"d", std::to_string(d)}, {"q", q.str()}, {"r", r.str()}, {"alpha_star", star.value.str()}};
  rep.grid = {{"lattice", describe(base)}};
  rep.points.resize(ks.size());
  const double qd = q.to_double();
  parallel_for(ks.size(), [&](std::size_t i) {
    const auto g = PlateField::knapp(lattices[i]);
    const double lhs = g.multiplied(dyadic_cone_symbol(ks[i])).lp_norm(qd);
    const double rhs = g.l2_norm();
    rep.points[i] = {std::ldexp(1.0, ks[i]), lhs, rhs, lhs / rhs};
  });
  rep.finish();
  return rep;
}

RhoScanSetup default_rho_setup(int d) {
  if (d == 2) return {SpatialGrid{2, 64, 16.0 * pi}, 64};
  if (d == 3) return {SpatialGrid{3, 32, 8.0 * pi}, 12};
  throw InputError("rho scans support d in {2, 3}");
}

PhaseSpaceData rho_scan_data(int d, RhoData kind, const RhoScanSetup& setup) {
  require(d == 2 || d == 3, "rho scans support d in {2, 3}");
  require(setup.grid.d == d, "setup grid dimension does not match d");
  setup.grid.validate();
  const auto mu = sphere_measure(d, setup.sphere_nodes);
  if (kind == RhoData::radial_x) {
    const std::vector<RadialModeData> modes{RadialModeData(d, 0, 0, bump), RadialModeData(d, 1, d == 2 ? 1 : 0, bump)};
    return phase_space_from_modes(modes, setup.grid, mu);
  }
  const Vec3 shift{1.0, -0.5, 0.25};
  return phase_space_from_symbol(setup.grid, mu, [d, shift](const Vec3& xi, const Vec3& v) -> cplx {
    const double xn = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    const double radial = bump(xn);
    if (radial == 0.0) return 0.0;
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase -= xi[static_cast<std::size_t>(j)] * shift[static_cast<std::size_t>(j)];
    const double aniso = 1.0 + 0.3 * xi[0] / xn;
    const double vdep = 1.0 + 0.5 * v[0] + 0.25 * v[1] * v[1];
    return radial * aniso * vdep * std::polar(1.0, phase);
  });
}

ScalingReport rho_dyadic_scan(const PhaseSpaceData& f, RhoData kind, const std::vector<int>& ks) {
  const int d = f.grid().d;
  require(d == 2 || d == 3, "rho scans support d in {2, 3}");
  require(f.measure().kind == MeasureKind::sphere, "rho scans use a sphere measure");
  if (ks.size() < 4) throw InputError("rho scan needs at least 4 values of k");
  for (int k : ks) require(k >= 2, "shells need k >= 2 to stay inside tau > 0");
  const double norm = f.l2_norm_squared();
  if (!(norm > 0.0)) throw InputError("data must be nonzero");

  const auto gl = gauss_legendre(16, 0.5, 2.0);
  const std::size_t nk = ks.size(), nq = gl.size();
  std::vector<double> taus(nk * nq);
  const SpatialGrid& g = f.grid();
  std::vector<std::vector<double>> part(g.size());
  parallel_for(g.size(), [&](std::size_t idx) {
    const double xn = g.freq_norm(idx);
    const double outer = bump(xn);
    if (outer == 0.0) return;
    bool any = false;
    for (std::size_t n = 0; n < f.node_count() && !any; ++n) any = f.frequency(n)[idx] != 0.0;
    if (!any) return;
    std::vector<double> tau(nk * nq);
    for (std::size_t i = 0; i < nk; ++i) {
      for (std::size_t j = 0; j < nq; ++j) tau[i * nq + j] = xn - std::ldexp(gl.nodes[j], -ks[i]);
    }
    const auto rho = rho_hat_points(f, idx, tau);
    std::vector<double> s(nk, 0.0);
    for (std::size_t i = 0; i < nk; ++i) {
      const double width = std::ldexp(1.0, -ks[i]);
      for (std::size_t j = 0; j < nq; ++j) {
        const double m = outer * psi_alpha(0.0, gl.nodes[j]);
        s[i] += gl.weights[j] * width * m * m * std::norm(rho[i * nq + j]);
      }
    }
    part[idx] = std::move(s);
  });
  std::vector<double> total(nk, 0.0);
  for (const auto& s : part) {
    for (std::size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  }

  ScalingReport rep;
  rep.id = "rho-scan";
  rep.claim = kind == RhoData::generic ? "rho-dyadic-generic" : "rho-dyadic-radial";
  rep.kind = ScanKind::sufficiency;
  rep.predicted = kind == RhoData::generic ? (3.0 - d) / 4.0 : (2.0 - d) / 2.0;
  rep.verdict = "envelope " + (kind == RhoData::generic ? Rational(3 - d, 4) : Rational(2 - d, 2)).str();
  rep.params = {{"d", std::to_string(d)}, {"data", to_string(kind)},
                {"nodes", std::to_string(f.node_count())}};
  rep.grid = {{"n", std::to_string(g.n)}, {"len", num(g.len)}};
  const double rhs = std::sqrt(norm);
  for (std::size_t i = 0; i < nk; ++i) {
    if (!(total[i] > 0.0)) {
      throw InputError("data has no frequency mass in the shell k = " + std::to_string(ks[i]));
    }
    const double lhs = std::sqrt(total[i] * g.freq_cell() / std::pow(2.0 * pi, d + 1));
    rep.points.push_back({std::ldexp(1.0, ks[i]), lhs, rhs, lhs / rhs});
  }
  rep.finish();
  return rep;
}

ScalingReport rho_dyadic_scan(int d, RhoData kind, const std::vector<int>& ks,
                              const std::optional<RhoScanSetup>& setup) {
  const RhoScanSetup s = setup ? *setup : default_rho_setup(d);
  return rho_dyadic_scan(rho_scan_data(d, kind, s), kind, ks);
}

double smoothing_probe(const PhaseSpaceData& f, const Rational& q, const Rational& r, const Rational& beta_plus,
                       const Rational& beta_minus, int n_t, double len_t) {
  const int d = f.grid().d;
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  require(beta_plus + beta_minus == scaling_total(d, q, r, Rational(2), Rational(0)),
          "beta_+ + beta_- must equal d/r + 1/q - d/2");
  const double norm = f.l2_norm_squared();
  if (!(norm > 0.0)) throw InputError("data must be nonzero");
  const auto D = d_plus_symbol(beta_plus.to_double()) * d_minus_symbol(beta_minus.to_double());
  if (q == Rational(2) && r == Rational(2)) return std::sqrt(l2_smoothing_ratio(f, n_t, len_t, D));
  const auto rho = average_rho(f, n_t, len_t);
  const auto u = inverse_transform(apply_symbol(rho, D).field);
  return mixed_norm(u, q.to_double(), r.to_double()) / std::sqrt(norm);
}

StrichartzProbe strichartz_probe(const SpatialField& h, const Rational& q, const Rational& r, double t_span,
                                 int n_steps, bool radial) {
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  require(t_span > 0.0 && n_steps >= 1, "need a positive time span and at least one step");
  const SpatialGrid& g = h.grid();
  const SpatialField hat = h.domain() == Domain::frequency ? h : forward_transform(h);
  double peak = 0.0, outside = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const double a = std::abs(hat.samples()[idx]);
    const double xn = g.freq_norm(idx);
    peak = std::max(peak, a);
    if (xn < 0.5 || xn > 2.0) outside = std::max(outside, a);
  }
  if (!(peak > 0.0)) throw InputError("data must be nonzero");
  if (outside > 1e-12 * peak) throw InputError("h^ must vanish outside 1/2 <= |xi| <= 2");

  StrichartzProbe out;
  out.admissible = radial ? radial_admissible(g.d, q, r) : wave_admissible(g.d, q, r);
  if (!out.admissible) {
    out.flag = radial ? "outside the radial Strichartz hypotheses" : "outside the Strichartz hypotheses";
  }
  const double qd = q.to_double(), rd = r.to_double();
  const double dt = t_span / n_steps;
  std::vector<double> slice(static_cast<std::size_t>(n_steps));
  parallel_for(slice.size(), [&](std::size_t i) {
    slice[i] = std::pow(lebesgue_norm(half_wave(hat, dt * static_cast<double>(i)), rd), qd);
  });
  double total = 0.0;
  for (double s : slice) total += dt * s;
  const double h2 = l2_norm_squared(hat) / std::pow(2.0 * pi, g.d);
  out.ratio = std::pow(total, 1.0 / qd) / std::sqrt(h2);
  return out;
}

SpatialField random_annulus_data(const SpatialGrid& grid, std::uint64_t seed, int packets) {
  grid.validate();
  require(packets >= 1, "need at least one packet");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  struct Packet {
    Vec3 centre{}, shift{};
    cplx amp;
  };
  std::vector<Packet> ps;
  for (int p = 0; p < packets; ++p) {
    Packet pk;
    Vec3 dir{};
    double n2 = 0.0;
    for (int j = 0; j < grid.d; ++j) {
      dir[static_cast<std::size_t>(j)] = normal(rng);
      n2 += dir[static_cast<std::size_t>(j)] * dir[static_cast<std::size_t>(j)];
    }
    const double radius = 0.8 + 0.7 * unit(rng);
    for (int j = 0; j < grid.d; ++j) {
      pk.centre[static_cast<std::size_t>(j)] = radius * dir[static_cast<std::size_t>(j)] / std::sqrt(n2);
      pk.shift[static_cast<std::size_t>(j)] = -2.0 + 4.0 * unit(rng);
    }
    pk.amp = std::polar(0.5 + unit(rng), 2.0 * pi * unit(rng));
    ps.push_back(pk);
  }
  constexpr double width = 0.3;
  SpatialField out(grid, Domain::frequency);
  auto data = out.samples();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double radial = bump(grid.freq_norm(idx));
    if (radial == 0.0) continue;
    const auto xi = grid.freq_point(idx);
    cplx s = 0.0;
    for (const auto& pk : ps) {
      double r2 = 0.0, phase = 0.0;
      for (std::size_t j = 0; j < static_cast<std::size_t>(grid.d); ++j) {
        r2 += (xi[j] - pk.centre[j]) * (xi[j] - pk.centre[j]);
        phase -= xi[j] * pk.shift[j];
      }
      s += pk.amp * std::exp(-0.5 * r2 / (width * width)) * std::polar(1.0, phase);
    }
    data[idx] = radial * s;
  }
  return out;
}

double plateau(double s, double inner_lo, double inner_hi, double outer_lo, double outer_hi) {
  require(outer_lo < inner_lo && inner_lo <= inner_hi && inner_hi < outer_hi, "plateau edges out of order");
  // smooth step from 0 at u <= 0 to 1 at u >= 1
  const auto step = [](double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
  };
  if (s <= inner_lo) return step((s - outer_lo) / (inner_lo - outer_lo));
  if (s >= inner_hi) return step((outer_hi - s) / (outer_hi - inner_hi));
  return 1.0;
}

namespace {

double bump_g1(double s) { return plateau(s, 0.75, 1.5, 0.5, 2.0); }
double bump_g2(double tau) { return plateau(std::abs(tau), -1.0, 2.0, -2.0, 3.0); }

}  // namespace

SpaceTimeField bump_family(const GridSpec& grid) {
  grid.validate();
  require((grid.n_x() / 2 - 1) * grid.space.dxi() >= 2.0, "spatial frequency lattice must reach |xi| = 2");
  require(grid.space.dxi() <= 0.25, "spatial frequency cells must be at most 1/4 to resolve the annulus");
  SpaceTimeField out(grid, Domain::frequency);
  for (std::size_t idx = 0; idx < grid.space.size(); ++idx) {
    const double g1 = bump_g1(grid.space.freq_norm(idx));
    if (g1 == 0.0) continue;
    for (int t = 0; t < grid.n_t; ++t) out.at(idx, t) = g1 * bump_g2(grid.tau(t));
  }
  return out;
}

BumpProbe bump_probe(const GridSpec& grid, double alpha) {
  require(alpha > -1.0, "cone multiplier order must exceed -1");
  const auto g = bump_family(grid);
  const auto C = cone_symbol(alpha);
  double s = 0.0;
  for (std::size_t idx = 0; idx < grid.space.size(); ++idx) {
    const double xn = grid.space.freq_norm(idx);
    for (int t = 0; t < grid.n_t; ++t) {
      const cplx v = g.at(idx, t);
      if (v == 0.0) continue;
      const auto m = lattice_symbol_value(C, xn, grid.tau(t), grid.dtau());
      if (m) s += std::norm(*m * v);
    }
  }
  const int d = grid.d();
  BumpProbe out;
  out.lattice = s * grid.space.freq_cell() * grid.dtau() / std::pow(2.0 * pi, d + 1);
  if (alpha <= -0.5) {
    out.continuum = std::numeric_limits<double>::infinity();
  } else {
    const double radial = integrate(
        [d](double r) {
          const double a = bump_g1(r) * bump(r);
          return std::pow(r, d) * a * a;
        },
        0.5, 2.0, 1e-12);
    out.continuum = sphere_area(d - 1) * radial * std::beta(0.5, 2.0 * alpha + 1.0) / std::pow(2.0 * pi, d + 1);
  }
  return out;
}

}  // namespace kinavg
