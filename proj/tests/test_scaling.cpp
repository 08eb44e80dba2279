#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kinavg/errors.hpp"
#include "kinavg/radon.hpp"
#include "kinavg/scaling.hpp"

using namespace kinavg;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// exp(-1/(1 - log2(s)^2)) on (1/2, 2), written out again for the oracles
double profile(double s) {
  if (s <= 0.5 || s >= 2.0) return 0.0;
  const double l = std::log2(s);
  return std::exp(-1.0 / (1.0 - l * l));
}

// composite Simpson on [a, b]
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

double profile_sq_integral() {
  return simpson([](double s) { return profile(s) * profile(s); }, 0.5, 2.0);
}

std::vector<std::pair<double, double>> power_law(double a, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < 8; ++k) {
    const double s = std::ldexp(1.0, k);
    out.emplace_back(s, 3.0 * std::pow(s, a) * (1.0 + noise * u(rng)));
  }
  return out;
}

}  // namespace

TEST_CASE("power-law fit") {
  const auto exact = power_law(0.375, 0.0, 1);
  const auto fit = powerlaw_fit(exact);
  CHECK(fit.slope == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  CHECK(fit.residual <= 1e-12);

  std::vector<std::pair<double, double>> flat{{1, 2}, {2, 2}, {4, 2}, {8, 2}};
  CHECK(std::abs(powerlaw_fit(flat).slope) < 1e-14);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CHECK(std::abs(powerlaw_fit(power_law(-0.5, 0.01, seed)).slope + 0.5) <= 0.02);
  }

  std::vector<std::pair<double, double>> three{{1, 1}, {2, 2}, {4, 4}};
  CHECK_THROWS_AS(powerlaw_fit(three), InputError);
  std::vector<std::pair<double, double>> negative{{1, 1}, {2, -2}, {4, 4}, {8, 8}};
  CHECK_THROWS_AS(powerlaw_fit(negative), InputError);
  std::vector<std::pair<double, double>> zero{{1, 1}, {2, 0}, {4, 4}, {8, 8}};
  CHECK_THROWS_AS(powerlaw_fit(zero), InputError);
}

namespace {

// 128 points over side 128 pi / 2.5 in space, tau cells of 1/128.
GridSpec knapp_grid() { return GridSpec{SpatialGrid{2, 128, 128 * pi / 2.5}, 1024, 256 * pi}; }

}  // namespace

TEST_CASE("Knapp plate support on the space-time lattice") {
  const double delta = 1.0 / 16;
  const auto g = knapp_family({delta, knapp_grid()});
  const auto& grid = g.grid();
  std::size_t count = 0;
  double lo = 1e9, hi = -1e9;
  for (std::size_t idx = 0; idx < grid.space.size(); ++idx) {
    const auto xi = grid.space.freq_point(idx);
    for (int t = 0; t < grid.n_t; ++t) {
      if (g.at(idx, t) == 0.0) continue;
      ++count;
      const double tau = grid.tau(t);
      CHECK(std::abs(xi[0]) <= 2.0 * std::sqrt(delta));
      CHECK(xi[0] >= 0.5 * std::sqrt(delta));
      lo = std::min(lo, xi[1] - tau);
      hi = std::max(hi, xi[1] - tau);
      CHECK(xi[1] + tau >= 1.0);
      CHECK(xi[1] + tau <= 4.0);
    }
  }
  CHECK(count > 100);
  CHECK(lo >= 0.5 * delta);
  CHECK(hi <= 2.0 * delta);
}

TEST_CASE("Knapp norms shrink by 2^{-(d+1)/2} when delta halves") {
  std::vector<double> norms;
  for (double delta : {0.125, 0.0625, 0.03125}) {
    norms.push_back(l2_norm_squared(knapp_family({delta, knapp_grid()})));
  }
  const double expect = std::pow(2.0, -1.5);
  for (std::size_t i = 1; i < norms.size(); ++i) CHECK(rel(norms[i] / norms[i - 1], expect) < 0.15);
}

TEST_CASE("unresolvable plates are rejected") {
  CHECK_THROWS_AS(knapp_family({1.0 / 256, knapp_grid()}), InputError);
  CHECK_THROWS_AS(knapp_family({0.25, knapp_grid()}), InputError);
  const GridSpec coarse_tau{SpatialGrid{2, 128, 128 * pi / 2.5}, 256, 32 * pi};
  CHECK_THROWS_AS(knapp_family({1.0 / 32, coarse_tau}), InputError);
  PlateLattice bad;
  bad.n_plate = 48;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("plate lattice norms") {
  const double I = profile_sq_integral();
  for (int d : {2, 3}) {
    std::vector<double> scaled;
    for (double delta : default_deltas()) {
      PlateLattice l;
      l.d = d;
      l.delta = delta;
      const auto g = PlateField::knapp(l);
      // product of one-dimensional integrals; d xi_d d tau = da db / 2
      const double oracle =
          0.5 * (delta * I) * (2.0 * I) * std::pow(std::sqrt(delta) * I, d - 1) / std::pow(2.0 * pi, d + 1);
      // the bump is smooth but not analytic, so 64 samples leave ~1e-4
      CHECK(rel(g.l2_norm() * g.l2_norm(), oracle) < 1e-3);
      CHECK(rel(g.lp_norm(2.0), g.l2_norm()) < 1e-10);
      scaled.push_back(g.l2_norm() * g.l2_norm() / std::pow(delta, 0.5 * (d + 1)));
    }
    const auto [mn, mx] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*mx / *mn <= 8.0);
  }
}

TEST_CASE("plate norm converges under lattice refinement") {
  const double I = profile_sq_integral();
  PlateLattice l;
  l.delta = 1.0 / 16;
  l.n_plate = 256;
  l.n_cross = 128;
  const double oracle = 0.5 * (l.delta * I) * (2.0 * I) * (std::sqrt(l.delta) * I) / std::pow(2.0 * pi, 3);
  const auto g = PlateField::knapp(l);
  CHECK(rel(g.l2_norm() * g.l2_norm(), oracle) < 1e-5);
}

TEST_CASE("Knapp plate mass sits in the dual box") {
  for (int d : {2, 3}) {
    for (double delta : {0.125, 1.0 / 128}) {
      PlateLattice l;
      l.d = d;
      l.delta = delta;
      const auto g = PlateField::knapp(l);
      const double frac = g.dual_box_fraction(4.0 / 3.0, 8.0);
      CHECK(frac >= 0.5);
      CHECK(frac <= 1.0);
    }
  }
}

TEST_CASE("Knapp necessity slopes") {
  struct Case {
    int d;
    int q;
    Rational alpha;
    double predicted;
  };
  // alpha - (1/q + (d-1)/(2q) - (d+1)/4)
  for (const auto& c : {Case{2, 2, Rational(0), 0.0}, Case{2, 4, Rational(0), 0.375},
                        Case{3, 4, Rational(1, 4), 0.75}}) {
    CAPTURE(c.d);
    CAPTURE(c.q);
    const auto rep = knapp_scan(c.d, c.q, c.q, c.alpha, default_deltas());
    CHECK(rep.kind == ScanKind::necessity);
    CHECK(rep.points.size() == 5);
    CHECK(rep.predicted == doctest::Approx(c.predicted).epsilon(1e-15));
    CHECK(std::abs(rep.fit.slope - c.predicted) <= 0.1);
    REQUIRE(rep.pass.has_value());
    CHECK(*rep.pass);
  }
}

TEST_CASE("Knapp scan arguments") {
  CHECK_THROWS_AS(knapp_scan(2, 4, 6, 0, default_deltas()), InputError);
  CHECK_THROWS_AS(knapp_scan(2, 4, 4, 0, {0.125, 0.0625, 0.03125}), InputError);
  CHECK_THROWS_AS(knapp_scan(2, 4, 4, 0, {0.125, 0.0625, 0.03125, 0.5}), InputError);
}

TEST_CASE("scans are reproducible") {
  const auto a = knapp_scan(2, 4, 4, 0, default_deltas());
  const auto b = knapp_scan(2, 4, 4, 0, default_deltas());
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].ratio == b.points[i].ratio);
  CHECK(a.fit.slope == b.fit.slope);
}

TEST_CASE("dyadic cone envelopes") {
  const auto r3 = dyadic_scan(3, 4, 4, default_ks());
  // max{1/4 + 1/4 - 1, -1/2}
  CHECK(r3.predicted == -0.5);
  CHECK(r3.kind == ScanKind::sufficiency);
  CHECK(r3.fit.slope <= -0.5 + 0.1);
  CHECK(r3.pass.value());

  const auto r2 = dyadic_scan(2, 2, 2, default_ks());
  CHECK(r2.predicted == 0.0);
  CHECK(std::abs(r2.fit.slope) <= 0.1);
  CHECK(r2.pass.value());

  CHECK_THROWS_AS(dyadic_scan(2, 2, 2, {3, 4, 5}), InputError);
  // 1/4 > (1/2)(1/2 - 1/4): not wave admissible in d = 2
  CHECK_THROWS_AS(dyadic_scan(2, 4, 4, default_ks()), InputError);
  CHECK_THROWS_AS(dyadic_scan(2, 2, 2, {2, 3, 4, 5}), InputError);
}

TEST_CASE("rho dyadic envelopes") {
  const auto g3 = rho_dyadic_scan(3, RhoData::generic, default_ks());
  CHECK(g3.predicted == 0.0);
  CHECK(g3.fit.slope <= 0.1);
  CHECK(g3.pass.value());

  const auto r3 = rho_dyadic_scan(3, RhoData::radial_x, default_ks());
  CHECK(r3.predicted == -0.5);
  CHECK(r3.fit.slope <= -0.4);
  CHECK(r3.pass.value());

  const auto g2 = rho_dyadic_scan(2, RhoData::generic, default_ks());
  CHECK(g2.predicted == 0.25);
  CHECK(g2.fit.slope <= 0.35);
  CHECK(g2.pass.value());

  for (const auto& p : g3.points) CHECK(p.rhs > 0.0);
}

TEST_CASE("rho scan rejects data without shell mass") {
  const auto setup = default_rho_setup(2);
  const auto f = phase_space_from_symbol(setup.grid, sphere_measure(2, 16), [](const Vec3& xi, const Vec3&) -> cplx {
    return std::hypot(xi[0], xi[1]) < 0.4 ? 1.0 : 0.0;
  });
  CHECK_THROWS_AS(rho_dyadic_scan(f, RhoData::generic, default_ks()), InputError);
  CHECK_THROWS_AS(rho_dyadic_scan(2, RhoData::generic, {3, 4, 5}), InputError);
}

namespace {

// g0(|xi|) concentrated on velocities parallel to xi, which puts rho^ next to
// the cone as eps shrinks.
PhaseSpaceData cone_cap(double eps) {
  const SpatialGrid sg{2, 32, 8 * pi};
  return phase_space_from_symbol(sg, sphere_measure(2, 128), [eps](const Vec3& xi, const Vec3& v) -> cplx {
    const double xn = std::hypot(xi[0], xi[1]);
    const double g = bump(xn);
    if (g == 0.0) return 0.0;
    const double c = (xi[0] * v[0] + xi[1] * v[1]) / xn;
    return g * std::exp(-(1.0 - c * c) / (eps * eps));
  });
}

}  // namespace

TEST_CASE("smoothing probe grows below the beta_- threshold") {
  // q = r = 2, d = 2, sphere: the threshold is 1/4 and the sharp constant 4 pi
  const int n_t = 4096;
  const double len_t = 1024 * pi;
  std::vector<PhaseSpaceData> data;
  for (double eps : {0.8, 0.4, 0.2}) data.push_back(cone_cap(eps));
  for (const Rational bm : {Rational(0), Rational(1, 8)}) {
    std::vector<double> ratio;
    for (const auto& f : data) ratio.push_back(smoothing_probe(f, 2, 2, Rational(1, 2) - bm, bm, n_t, len_t));
    CHECK(ratio[1] > 1.1 * ratio[0]);
    CHECK(ratio[2] > 1.1 * ratio[1]);
  }
  for (const auto& f : data) {
    const double r = smoothing_probe(f, 2, 2, Rational(1, 4), Rational(1, 4), n_t, len_t);
    CHECK(r * r <= 4.0 * pi * (1.0 + 1e-9));
  }
}

TEST_CASE("smoothing probe at the extremiser and argument checks") {
  const auto g0 = [](double r) { return bump(r); };
  const int n = 64;
  const auto f = build_extremiser(SpatialGrid{2, n, n * pi / 4}, g0);
  const double r = smoothing_probe(f, 2, 2, Rational(1, 4), Rational(1, 4), n, n * pi / 4);
  CHECK(r * r / (4 * pi) > 0.85);
  CHECK(r * r / (4 * pi) <= 1.0);

  CHECK_THROWS_AS(smoothing_probe(f, 2, 2, Rational(1, 4), Rational(1, 8), n, n * pi / 4), InputError);
  const auto zero = phase_space_from_symbol(SpatialGrid{2, 32, 8 * pi}, sphere_measure(2, 16),
                                            [](const Vec3&, const Vec3&) -> cplx { return 0.0; });
  CHECK_THROWS_AS(smoothing_probe(zero, 2, 2, Rational(1, 4), Rational(1, 4), 32, 8 * pi), InputError);
}

TEST_CASE("smoothing probe off the L2 diagonal") {
  // q = r = 4, d = 2: beta_+ + beta_- = 2/4 + 1/4 - 1
  const SpatialGrid sg{2, 32, 8 * pi};
  const auto f = phase_space_from_symbol(sg, sphere_measure(2, 32), [](const Vec3& xi, const Vec3& v) -> cplx {
    return bump(std::hypot(xi[0], xi[1])) * (1.0 + 0.5 * v[0]);
  });
  const double r = smoothing_probe(f, 4, 4, Rational(-1, 4), Rational(0), 64, 16 * pi);
  CHECK(std::isfinite(r));
  CHECK(r > 0.0);
  CHECK_THROWS_AS(smoothing_probe(f, 4, 4, Rational(0), Rational(0), 64, 16 * pi), InputError);
}

TEST_CASE("half-wave evolution keeps the spatial L2 norm") {
  const SpatialGrid sg{3, 32, 16 * pi};
  const auto h = random_annulus_data(sg, 3);
  const double h2 = l2_norm_squared(h) / std::pow(2 * pi, 3);
  for (double t : {0.0, 0.7, 3.0}) {
    const double u2 = l2_norm_squared(half_wave(h, t));
    // U(t) carries no (2 pi)^{-d}
    CHECK(rel(u2, std::pow(2 * pi, 6) * h2) < 1e-12);
  }
}

TEST_CASE("Strichartz probe is stable under refinement") {
  std::vector<double> ratios;
  for (int n : {32, 64, 128}) {
    const SpatialGrid sg{3, n, 16 * pi};
    const auto p = strichartz_probe(random_annulus_data(sg, 11), 4, 4, 4.0, 8);
    CHECK(p.admissible);
    CHECK(p.flag.empty());
    ratios.push_back(p.ratio);
  }
  CHECK(rel(ratios[1], ratios[0]) < 0.1);
  CHECK(rel(ratios[2], ratios[1]) < 0.1);
}

TEST_CASE("Strichartz probe flags and support") {
  const SpatialGrid sg{2, 32, 8 * pi};
  const auto h = random_annulus_data(sg, 5);
  const auto p = strichartz_probe(h, 2, 2, 2.0, 4);
  CHECK_FALSE(p.admissible);
  CHECK_FALSE(p.flag.empty());
  CHECK(std::isfinite(p.ratio));

  SpatialField wide(sg, Domain::frequency);
  for (std::size_t idx = 0; idx < sg.size(); ++idx) {
    const double xn = sg.freq_norm(idx);
    if (xn > 2.5 && xn < 3.0) wide.samples()[idx] = 1.0;
  }
  CHECK_THROWS_AS(strichartz_probe(wide, 4, 4, 2.0, 4), InputError);
}

TEST_CASE("bump family") {
  const int n = 64;
  const GridSpec g{SpatialGrid{2, n, n * pi / 4}, n, n * pi / 4};
  const auto hat = bump_family(g);
  std::size_t plateau_points = 0;
  for (std::size_t idx = 0; idx < g.space.size(); ++idx) {
    const double xn = g.space.freq_norm(idx);
    for (int t = 0; t < g.n_t; ++t) {
      const double tau = g.tau(t);
      if (xn >= 0.75 && xn <= 1.5 && std::abs(tau) <= 1.0) {
        CHECK(hat.at(idx, t) == 1.0);
        ++plateau_points;
      }
      if (xn <= 0.5 || xn >= 2.0 || std::abs(tau) >= 3.0) CHECK(hat.at(idx, t) == 0.0);
    }
  }
  CHECK(plateau_points > 0);
  const auto phys = inverse_transform(hat);
  double peak = 0.0, imag = 0.0;
  for (const auto& v : phys.samples()) {
    peak = std::max(peak, std::abs(v));
    imag = std::max(imag, std::abs(v.imag()));
  }
  CHECK(imag <= 1e-12 * peak);
}

TEST_CASE("bump probe against the lambda integral") {
  // (2 pi)^{-3} 2 pi int r^2 (g1 bump)^2 dr * int_{-1}^{1} (1 - l^2)^{2 alpha} dl, d = 2
  const auto radial = simpson(
      [](double r) {
        const double a = plateau(r, 0.75, 1.5, 0.5, 2.0) * bump(r);
        return r * r * a * a;
      },
      0.5, 2.0);
  const double oracle0 = 2 * pi * radial * 2.0 / std::pow(2 * pi, 3);
  std::vector<double> err, diverging;
  for (int n : {32, 64, 128}) {
    const GridSpec g{SpatialGrid{2, n, n * pi / 4}, n, n * pi / 4};
    const auto p0 = bump_probe(g, 0.0);
    CHECK(rel(p0.continuum, oracle0) < 1e-8);
    err.push_back(rel(p0.lattice, oracle0));
    const auto ph = bump_probe(g, -0.5);
    CHECK(std::isinf(ph.continuum));
    diverging.push_back(ph.lattice);
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
  CHECK(err[2] < 0.01);
  CHECK(diverging[1] > 1.1 * diverging[0]);
  CHECK(diverging[2] > 1.1 * diverging[1]);
}

TEST_CASE("report invariants") {
  ScalingReport rep;
  rep.id = "short";
  rep.points = {{1, 1, 1, 1}, {2, 1, 1, 1}, {4, 1, 1, 1}};
  CHECK_THROWS_AS(rep.finish(), InputError);
  rep.points.push_back({8, 1, 1, 1});
  rep.kind = ScanKind::descriptive;
  rep.finish();
  CHECK_FALSE(rep.pass.has_value());
  rep.kind = ScanKind::sufficiency;
  rep.predicted = -0.2;
  rep.finish();
  CHECK_FALSE(*rep.pass);
}
