#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/beta.hpp>

#include "kinavg/errors.hpp"
#include "kinavg/quadrature.hpp"
#include "kinavg/radon.hpp"
#include "kinavg/special.hpp"
#include "kinavg/symbols.hpp"

using namespace kinavg;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Slice area of the unit ball in R^d through the plane v.theta = r, by
// elementary geometry: a (d-1)-ball of radius sqrt(1 - r^2).
double slice_area(int d, double r) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double rad = std::sqrt(1.0 - r * r);
  return d == 2 ? 2.0 * rad : pi * rad * rad;
}

}  // namespace

TEST_CASE("radon transform of the unit ball indicator is the slice area") {
  const auto one = [](double) { return 1.0; };
  CHECK(radon_radial(3, one, 0.0) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(radon_radial(2, one, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
  for (double r : {-0.9, -0.3, 0.2, 0.75, 0.99}) {
    for (int d : {2, 3}) CHECK(rel(radon_radial(d, one, r), slice_area(d, r)) < 1e-10);
  }
  for (double r : {1.0, 1.5, -2.0}) {
    CHECK(radon_radial(2, one, r) == 0.0);
    CHECK(radon_kappa_closed(3, -0.5, r) == 0.0);
  }
}

TEST_CASE("radon closed forms") {
  CHECK(radon_kappa_closed(3, -1.0, 0.0) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(radon_kappa_closed(3, 0.0, 0.0) == doctest::Approx(pi).epsilon(1e-14));
  // kappa = -1 is half the surface measure: R = |S^{d-2}| (1 - r^2)^{(d-3)/2} / 2
  CHECK(radon_kappa_closed(2, -1.0, 0.6) == doctest::Approx(1.0 / 0.8).epsilon(1e-14));
  CHECK_THROWS_AS(radon_kappa_closed(2, 0.5, 0.0), InputError);
  CHECK_THROWS_AS(radon_kappa_closed(2, -1.5, 0.0), InputError);
  CHECK_THROWS_AS(radon_kappa_closed(4, 0.0, 0.0), InputError);

  for (int d : {2, 3}) {
    for (double kappa : {-0.5, 0.0, -0.25}) {
      const auto prof = radon_profile(d, kappa);
      // prefactor from the Beta integral, evaluated with Boost
      const double beta = boost::math::beta(1.0 + kappa, 0.5 * (d - 1));
      CHECK(rel(prof.constant, 0.5 * sphere_area(d - 2) * beta / std::tgamma(1.0 + kappa)) < 1e-13);
      double worst = 0.0;
      for (int i = 0; i < 200; ++i) {
        const double r = -1.0 + 2.0 * i / 199.0;
        worst = std::max(worst, std::abs(prof.closed(r) - prof.quadrature(r)));
      }
      CHECK(worst < 1e-6);
    }
  }
  CHECK_THROWS_AS(radon_profile(2, -1.0).quadrature(0.0), InputError);
}

TEST_CASE("non-integrable weights are reported") {
  CHECK_THROWS_AS(radon_radial(3, [](double s) { return 1.0 / (1.0 - s); }, 0.0), NumericalError);
  CHECK_THROWS_AS(radon_radial(2, [](double s) { return std::pow(1.0 - s * s, -1.2); }, 0.5), NumericalError);
  CHECK_THROWS_AS(radon_radial(2, [](double) { return std::nan(""); }, 0.5), NumericalError);
}

TEST_CASE("radon of discretised measures") {
  const auto s = sphere_measure(3, 8);
  CHECK(radon_of_measure(s, 0.3) == doctest::Approx(2.0 * pi).epsilon(1e-14));
  const auto b = kappa_ball_measure(2, -0.5, 8, 16);
  CHECK(radon_of_measure(b, 0.4) == doctest::Approx(radon_kappa_closed(2, -0.5, 0.4)).epsilon(1e-14));
}

TEST_CASE("m_mu matches the closed-form multiplier") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xi_dist(0.05, 4.0), l_dist(-1.0, 1.0);
  for (int d : {2, 3}) {
    for (double kappa : {-1.0, -0.5, 0.0}) {
      for (double bm : {0.0, 0.25}) {
        const double bp = 0.5 - bm;
        const auto mu = build_m_mu(d_plus_symbol(bp) * d_minus_symbol(bm), kappa_ball_measure(d, kappa, 4, 8));
        const auto ref = m_kappa_symbol(d, kappa, bp, bm);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
          const double xn = xi_dist(rng), tau = xn * l_dist(rng);
          worst = std::max(worst, std::abs(mu.at(xn, tau) - ref.at(xn, tau)));
        }
        CHECK(worst < 1e-10);
      }
    }
  }
  // the full surface measure is twice the kappa = -1 weight
  const auto full = build_m_mu(one_symbol(), sphere_measure(2, 8));
  const auto half = build_m_mu(one_symbol(), kappa_ball_measure(2, -1.0, 4, 8));
  CHECK(std::norm(full.at(1.0, 0.3)) == doctest::Approx(2.0 * std::norm(half.at(1.0, 0.3))));
  // m = 1, kappa = -1, d = 3: m_mu^2 = pi / |xi|
  const auto half_sphere = [] {
    auto m = sphere_measure(3, 8);
    m.scale = 0.5;
    return m;
  }();
  const auto mu = build_m_mu(one_symbol(), half_sphere);
  for (double xn : {0.5, 1.0, 3.0}) {
    for (double tau : {0.0, 0.3 * xn, -0.99 * xn}) CHECK(std::norm(mu.at(xn, tau)) == doctest::Approx(pi / xn));
    CHECK(mu.at(xn, 1.01 * xn) == 0.0);
  }
  CHECK(mu.cone_exponent() == doctest::Approx(0.0));
}

TEST_CASE("duality identity on random annulus data") {
  const auto grid = duality_grid(2, 64);
  const std::vector<SymbolSpec> symbols{one_symbol(), d_plus_symbol(0.25) * d_minus_symbol(0.25),
                                        d_plus_symbol(0.5)};
  for (auto kind : {MeasureKind::sphere, MeasureKind::kappa_ball}) {
    const auto measure = duality_measure(2, kind, 0.0, 64);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto g = random_annulus_field(grid, seed);
      for (const auto& m : symbols) {
        const auto r = duality_residual(g, m, measure);
        CHECK(r.lhs > 0.0);
        CHECK(r.residual < 1e-3);
      }
    }
  }
  // physical input is accepted and gives the same numbers
  const auto g = random_annulus_field(grid, 5);
  const auto m = d_minus_symbol(0.25);
  const auto measure = duality_measure(2, MeasureKind::sphere, -1.0, 64);
  const auto a = duality_residual(g, m, measure);
  const auto b = duality_residual(inverse_spatial_transform(g), m, measure);
  CHECK(rel(a.lhs, b.lhs) < 1e-10);
  CHECK(rel(a.rhs, b.rhs) < 1e-10);
}

TEST_CASE("duality residual decreases under refinement") {
  const auto m = d_plus_symbol(0.25) * d_minus_symbol(0.25);
  for (auto kind : {MeasureKind::sphere, MeasureKind::kappa_ball}) {
    std::vector<double> res;
    for (int n : {32, 64, 128}) {
      const auto grid = duality_grid(2, n);
      res.push_back(duality_residual(random_annulus_field(grid, 9), m, duality_measure(2, kind, 0.0, n)).residual);
    }
    CHECK(res[1] < res[0]);
    CHECK(res[2] < res[1]);
  }
}

TEST_CASE("duality edge cases") {
  const auto grid = duality_grid(2, 32);
  const auto measure = duality_measure(2, MeasureKind::sphere, -1.0, 32);
  const auto zero = duality_residual(SpaceTimeField(grid, Domain::mixed), one_symbol(), measure);
  CHECK(zero.residual == 0.0);
  CHECK(zero.lhs == 0.0);

  SpaceTimeField wide(grid, Domain::mixed);
  wide.at(0, 0) = 1.0;  // xi = 0 lies outside the annulus
  CHECK_THROWS_AS(duality_residual(wide, one_symbol(), measure), InputError);
  CHECK_THROWS_AS(duality_residual(SpaceTimeField(grid, Domain::mixed), one_symbol(), sphere_measure(3, 4)),
                  InputError);
}

TEST_CASE("random annulus fields") {
  const auto grid = duality_grid(2, 64);
  const auto a = random_annulus_field(grid, 4);
  const auto b = random_annulus_field(grid, 4);
  const auto c = random_annulus_field(grid, 5);
  CHECK(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
  CHECK(!std::equal(a.samples().begin(), a.samples().end(), c.samples().begin()));
  for (std::size_t idx = 0; idx < grid.space.size(); ++idx) {
    const double xn = grid.space.freq_norm(idx);
    if (xn < 0.5 || xn > 2.0) CHECK(a.at(idx, 0) == 0.0);
  }
  CHECK_THROWS_AS(random_annulus_field(grid, 1, 0), InputError);
}

TEST_CASE("sharp constants by maximisation") {
  const auto c2 = sharp_constant_numeric(2, 0.25);
  CHECK(rel(c2.value, 4.0 * pi) < 1e-10);
  CHECK(rel(c2.closed_form, 4.0 * pi) < 1e-10);
  // d = 3, beta_- = 0: M = pi (1 + l), maximal at l = 1
  const auto c30 = sharp_constant_numeric(3, 0.0);
  CHECK(rel(c30.value, 8.0 * pi * pi) < 1e-10);
  CHECK(c30.argmax == doctest::Approx(1.0));
  // d = 3, beta_- = 1/2: M = pi (1 - l), maximal at l = 0
  const auto c3h = sharp_constant_numeric(3, 0.5);
  CHECK(rel(c3h.value, 4.0 * pi * pi) < 1e-10);
  CHECK(c3h.argmax == doctest::Approx(0.0));
  CHECK(c3h.stationary == 0.0);

  for (int d : {2, 3}) {
    const double lo = 0.25 * (3 - d);
    for (int i = 0; i < 10; ++i) {
      const double bm = lo + (0.5 - lo) * i / 9.0;
      const auto s = sharp_constant_numeric(d, bm);
      CHECK(rel(s.value, s.closed_form) < 1e-8);
      // brute-force sup on a fine grid never exceeds the search
      double brute = 0.0;
      for (int k = 0; k <= 2000; ++k) brute = std::max(brute, sharp_profile(d, bm, k / 2000.0));
      CHECK(4.0 * pi * brute <= s.value * (1.0 + 1e-12));
    }
  }
  CHECK_THROWS_AS(sharp_constant_numeric(2, 0.2), InputError);
}

TEST_CASE("maximiser set of M") {
  for (int samples : {101, 1001, 10001}) {
    CHECK(near_max_fraction(2, 0.25, samples) == 1.0);
    for (int i = 0; i <= 100; ++i) CHECK(sharp_profile(2, 0.25, i / 100.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  for (auto [d, bm] : {std::pair{2, 0.3}, {2, 0.5}, {3, 0.1}, {3, 0.3}}) {
    const double a = near_max_fraction(d, bm, 1001);
    const double b = near_max_fraction(d, bm, 10001);
    const double c = near_max_fraction(d, bm, 100001);
    CHECK(b <= a);
    CHECK(c <= b);
    CHECK(c < 0.01);
  }
}

TEST_CASE("extremiser data") {
  const SpatialGrid grid{2, 32, 8.0 * pi};
  const auto g0 = [](double r) { return bump(r) * (1.0 + r); };
  const auto f = build_extremiser(grid, g0);
  // f^(xi, v) = g0(|xi|) for every node, including v parallel to xi
  double worst = 0.0;
  for (std::size_t n = 0; n < f.node_count(); ++n) {
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      worst = std::max(worst, std::abs(f.frequency(n)[idx] - g0(grid.freq_norm(idx))));
    }
  }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(build_extremiser(grid, [](double) { return 0.0; }), InputError);
  CHECK_THROWS_AS(build_extremiser(SpatialGrid{3, 8, 8.0}, g0), InputError);
}

TEST_CASE("smoothing ratio of v-independent data") {
  // f^ = g0(|xi|) gives rho^ = 4 pi g0 / sqrt(|xi|^2 - tau^2) and
  // ||D rho f||^2 = 4 pi ||f||^2 exactly; the cell projection approaches it
  // from below.
  const auto g0 = [](double r) { return bump(r); };
  const auto D = d_plus_symbol(0.25) * d_minus_symbol(0.25);
  std::vector<double> ratios;
  for (int n : {32, 64, 128}) {
    const double len = n * pi / 4.0;
    ratios.push_back(l2_smoothing_ratio(build_extremiser(SpatialGrid{2, n, len}, g0), n, len, D) / (4.0 * pi));
  }
  for (double r : ratios) CHECK(r < 1.0);
  CHECK(ratios[1] > ratios[0]);
  CHECK(ratios[2] > ratios[1]);
  // the deficit sits in the edge cells and shrinks like dtau^{1/2}
  const double q1 = (1.0 - ratios[1]) / (1.0 - ratios[0]), q2 = (1.0 - ratios[2]) / (1.0 - ratios[1]);
  CHECK(q1 == doctest::Approx(std::sqrt(0.5)).epsilon(0.1));
  CHECK(q2 == doctest::Approx(std::sqrt(0.5)).epsilon(0.1));

  const SpatialGrid grid{2, 32, 8.0 * pi};
  CHECK_THROWS_AS(l2_smoothing_ratio(PhaseSpaceData(grid, sphere_measure(2, 8), std::vector<cplx>(8 * grid.size())),
                                     32, 8.0 * pi, D),
                  InputError);
}

TEST_CASE("radial sharp constant check") {
  const GridSpec grid{SpatialGrid{2, 64, 16.0 * pi}, 128, 32.0 * pi};
  const auto profile = [](double r) { return bump(r); };
  const RadialModeData k0(2, 0, 0, profile);
  const auto only0 = sharp_constant_radial_check(2, 0.25, 0.25, {k0}, grid);
  CHECK(rel(only0.c0, 4.0 * pi) < 1e-10);
  CHECK(rel(only0.series_over_c0, 1.0) < 1e-10);
  CHECK(rel(only0.series, 4.0 * pi * only0.norm_f) < 1e-10);
  CHECK(only0.i_k.size() == 1);
  CHECK(only0.ratio == doctest::Approx(1.0).epsilon(0.1));

  const RadialModeData k1(2, 1, 1, profile);
  const auto both = sharp_constant_radial_check(2, 0.25, 0.25, {k0, k1}, grid);
  CHECK(both.i_k.size() == 2);
  CHECK(both.i_k[1] < both.i_k[0]);
  CHECK(both.series_over_c0 < only0.series_over_c0);
  CHECK(both.ratio == doctest::Approx(1.0).epsilon(0.1));

  CHECK_THROWS_AS(sharp_constant_radial_check(2, 0.25, 0.25, {}, grid), InputError);
  CHECK_THROWS_AS(sharp_constant_radial_check(2, 0.3, 0.25, {k0}, grid), InputError);
  CHECK_THROWS_AS(sharp_constant_radial_check(3, 0.25, 0.25, {k0}, grid), InputError);
}
