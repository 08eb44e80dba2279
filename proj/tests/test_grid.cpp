#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kinavg/errors.hpp"
#include "kinavg/grid.hpp"
#include "kinavg/symbols.hpp"

using namespace kinavg;

namespace {

constexpr double pi = std::numbers::pi;

SpaceTimeField random_field(const GridSpec& g, unsigned seed, Domain dom = Domain::physical) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  SpaceTimeField f(g, dom);
  for (auto& v : f.samples()) v = {n(rng), n(rng)};
  return f;
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(std::span<const cplx> a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridSpec::cube(4, 16, 1.0).validate(), InputError);
  CHECK_THROWS_AS(GridSpec::cube(2, 12, 1.0).validate(), InputError);
  CHECK_THROWS_AS(GridSpec::cube(2, 4, 1.0).validate(), InputError);
  CHECK_THROWS_AS(GridSpec::cube(2, 16, 0.0).validate(), InputError);
  CHECK_NOTHROW(GridSpec::cube(3, 8, 1.0).validate());
  const GridSpec g = GridSpec::cube(2, 16, 8.0);
  CHECK(g.space.dxi() == doctest::Approx(2 * pi / 8.0));
  CHECK(g.dtau() == doctest::Approx(2 * pi / 8.0));
  CHECK(g.space.coord(15) == doctest::Approx(-0.5));
  CHECK(g.space.freq(8) == doctest::Approx(-8 * 2 * pi / 8.0));
  CHECK_THROWS_AS(SpaceTimeField(g, Domain::physical, std::vector<cplx>(3)), InputError);
}

TEST_CASE("transform of a constant concentrates at the origin") {
  const GridSpec g = GridSpec::cube(2, 16, 4.0);
  SpaceTimeField f(g, Domain::physical);
  for (auto& v : f.samples()) v = 2.5;
  const auto h = forward_transform(f);
  const double volume = 4.0 * 4.0 * 4.0;
  CHECK(std::abs(h.samples()[0] - cplx(2.5 * volume)) < 1e-12 * volume);
  double rest = 0.0;
  for (std::size_t i = 1; i < h.samples().size(); ++i) rest = std::max(rest, std::abs(h.samples()[i]));
  CHECK(rest < 1e-11);
}

TEST_CASE("Gaussian matches its closed-form transform") {
  const GridSpec g = GridSpec::cube(2, 64, 24.0);
  SpaceTimeField f(g, Domain::physical);
  for (std::size_t s = 0; s < g.space.size(); ++s) {
    const auto x = g.space.point(s);
    for (int t = 0; t < g.n_t; ++t) {
      const double tt = g.time(t);
      f.at(s, t) = std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + tt * tt));
    }
  }
  const auto h = forward_transform(f);
  double err = 0.0;
  for (std::size_t s = 0; s < g.space.size(); ++s) {
    const double xn = g.space.freq_norm(s);
    for (int t = 0; t < g.n_t; ++t) {
      const double tau = g.tau(t);
      const double exact = std::pow(2 * pi, 1.5) * std::exp(-0.5 * (xn * xn + tau * tau));
      err = std::max(err, std::abs(h.at(s, t) - exact));
    }
  }
  CHECK(err < 1e-6);
}

TEST_CASE("round trips and Plancherel") {
  for (int d : {2, 3}) {
    GridSpec g = GridSpec::cube(d, 16, 5.0);
    g.n_t = 32;
    g.len_t = 7.0;
    const auto f = random_field(g, 11 + d);
    const auto h = forward_transform(f);
    CHECK(h.domain() == Domain::frequency);
    const auto back = inverse_transform(h);
    CHECK(max_diff(back.samples(), f.samples()) < 1e-12 * max_abs(f.samples()));
    const double ratio = l2_norm_squared(h) / (std::pow(2 * pi, d + 1) * l2_norm_squared(f));
    CHECK(std::abs(ratio - 1.0) < 1e-12);

    const auto mixed = spatial_transform(f);
    CHECK(mixed.domain() == Domain::mixed);
    CHECK(max_diff(temporal_transform(mixed).samples(), h.samples()) < 1e-12 * max_abs(h.samples()));
    CHECK(max_diff(inverse_spatial_transform(mixed).samples(), f.samples()) < 1e-12 * max_abs(f.samples()));
  }
  const SpatialGrid sg{2, 32, 3.0};
  SpatialField p(sg, Domain::physical);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (auto& v : p.samples()) v = {n(rng), n(rng)};
  const auto ph = forward_transform(p);
  CHECK(max_diff(inverse_transform(ph).samples(), p.samples()) < 1e-12 * max_abs(p.samples()));
  CHECK(std::abs(l2_norm_squared(ph) / (4 * pi * pi * l2_norm_squared(p)) - 1.0) < 1e-12);
}

TEST_CASE("transforms reject the wrong domain") {
  const GridSpec g = GridSpec::cube(2, 8, 1.0);
  SpaceTimeField f(g, Domain::frequency);
  CHECK_THROWS_AS(forward_transform(f), InputError);
  CHECK_THROWS_AS(spatial_transform(f), InputError);
  CHECK_THROWS_AS(inverse_transform(SpaceTimeField(g, Domain::physical)), InputError);
  CHECK_THROWS_AS(mixed_norm(f, 2, 2), InputError);
}

TEST_CASE("time_fourier agrees with the lattice transform") {
  GridSpec g = GridSpec::cube(2, 8, 2.0);
  g.n_t = 64;
  g.len_t = 9.0;
  const auto f = random_field(g, 3);
  const auto mixed = spatial_transform(f);
  const auto full = temporal_transform(mixed);
  for (std::size_t s : {std::size_t{0}, std::size_t{13}, std::size_t{40}}) {
    for (int t : {0, 5, 33, 63}) {
      const cplx direct = time_fourier(mixed.samples().subspan(s * g.n_t, g.n_t), g, g.tau(t));
      CHECK(std::abs(direct - full.at(s, t)) < 1e-11 * max_abs(full.samples()));
    }
  }
}

TEST_CASE("tabulated time spectrum matches the direct sum") {
  GridSpec g = GridSpec::cube(2, 8, 2.0);
  g.n_t = 128;
  g.len_t = 20.0;
  const auto mixed = spatial_transform(random_field(g, 8));
  for (std::size_t s : {std::size_t{3}, std::size_t{50}}) {
    const auto row = mixed.samples().subspan(s * g.n_t, g.n_t);
    const TimeSpectrum spectrum(row, g);
    double scale = 0.0;
    for (int t = 0; t < g.n_t; ++t) scale = std::max(scale, std::abs(time_fourier(row, g, g.tau(t))));
    for (double tau : {0.0, 0.0137, -1.234, 3.9, g.tau(7), 2.0 * g.n_t * g.dtau() + 0.3}) {
      CHECK(std::abs(spectrum(tau) - time_fourier(row, g, tau)) < 1e-10 * scale);
    }
  }
  CHECK_THROWS_AS(TimeSpectrum(mixed.samples().subspan(0, 8), g), InputError);
}

TEST_CASE("mixed norm") {
  GridSpec g = GridSpec::cube(2, 8, 4.0);
  g.n_t = 16;
  g.len_t = 3.0;
  SpaceTimeField one(g, Domain::physical);
  one.at(5, 3) = 1.0;
  CHECK(mixed_norm(one, 2, 2) == doctest::Approx(std::sqrt(g.dt() * g.space.cell())).epsilon(1e-14));

  const auto u = random_field(g, 21);
  for (double q : {2.0, 3.0, 6.0}) {
    double flat = 0.0;
    for (const auto& v : u.samples()) flat += std::pow(std::abs(v), q);
    flat = std::pow(flat * g.dt() * g.space.cell(), 1.0 / q);
    CHECK(mixed_norm(u, q, q) == doctest::Approx(flat).epsilon(1e-12));
    SpaceTimeField twice(g, Domain::physical);
    for (std::size_t i = 0; i < u.samples().size(); ++i) twice.samples()[i] = 2.0 * u.samples()[i];
    CHECK(mixed_norm(twice, q, 4.0) == doctest::Approx(2.0 * mixed_norm(u, q, 4.0)).epsilon(1e-12));
  }
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto a = random_field(g, 100 + seed);
    const auto b = random_field(g, 200 + seed);
    SpaceTimeField c(g, Domain::physical);
    for (std::size_t i = 0; i < c.samples().size(); ++i) c.samples()[i] = a.samples()[i] + b.samples()[i];
    for (auto [q, r] : {std::pair{2.0, 2.0}, {4.0, 3.0}, {2.5, 8.0}}) {
      CHECK(mixed_norm(c, q, r) <= mixed_norm(a, q, r) + mixed_norm(b, q, r) + 1e-12);
    }
  }
  CHECK_THROWS_AS(mixed_norm(u, 1.5, 2), InputError);
  CHECK_THROWS_AS(mixed_norm(u, 2, INFINITY), InputError);
}

TEST_CASE("bump is a dyadic partition of unity") {
  CHECK(bump(0.5) == 0.0);
  CHECK(bump(2.0) == 0.0);
  CHECK(bump(3.0) == 0.0);
  CHECK(bump(0.7) > 0.0);
  for (int i = 0; i < 2000; ++i) {
    const double s = std::exp(-10.0 + 20.0 * i / 1999.0);
    double sum = 0.0;
    for (int j = -20; j <= 20; ++j) sum += bump(std::ldexp(s, -j));
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("Littlewood-Paley projections") {
  const SpatialGrid sg{2, 512, 32 * pi};
  const auto [lo, hi] = resolvable_scales(sg);
  CHECK(lo <= -2);
  CHECK(hi >= 2);
  CHECK_THROWS_AS(lp_project(SpatialField(sg, Domain::physical), hi + 1), InputError);
  CHECK_THROWS_AS(lp_project(SpatialField(sg, Domain::physical), lo - 1), InputError);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  // band-limited random field with spectrum in [1/4, 4]
  SpatialField hat(sg, Domain::frequency);
  for (std::size_t i = 0; i < sg.size(); ++i) {
    const double r = sg.freq_norm(i);
    if (r >= 0.25 && r <= 4.0) hat.samples()[i] = {n(rng), n(rng)};
  }
  const auto h = inverse_transform(hat);
  SpatialField sum(sg, Domain::physical);
  std::vector<SpatialField> pieces;
  for (int j = -2; j <= 2; ++j) {
    pieces.push_back(lp_project(h, j));
    for (std::size_t i = 0; i < sg.size(); ++i) sum.samples()[i] += pieces.back().samples()[i];
  }
  CHECK(max_diff(sum.samples(), h.samples()) < 1e-10 * max_abs(h.samples()));

  SpatialField square(sg, Domain::physical);
  for (const auto& p : pieces) {
    for (std::size_t i = 0; i < sg.size(); ++i) square.samples()[i] += std::norm(p.samples()[i]);
  }
  for (auto& v : square.samples()) v = std::sqrt(v.real());
  for (double r : {2.0, 4.0, 6.0}) {
    const double ratio = lebesgue_norm(square, r) / lebesgue_norm(h, r);
    CHECK(ratio > 0.1);
    CHECK(ratio < 10.0);
  }

  // spectrum in [1, 2]: where the cutoff is 1 the projection is the identity
  SpatialField band(sg, Domain::frequency);
  for (std::size_t i = 0; i < sg.size(); ++i) {
    const double r = sg.freq_norm(i);
    if (r >= 1.0 && r <= 2.0) band.samples()[i] = 1.0 + std::sin(3.0 * i);
  }
  const auto p0 = lp_project(band, 0);
  for (std::size_t i = 0; i < sg.size(); ++i) {
    CHECK(std::abs(p0.samples()[i] - bump(sg.freq_norm(i)) * band.samples()[i]) < 1e-15);
  }

  GridSpec g{SpatialGrid{2, 64, 16 * pi}, 8, 1.0};
  const auto f = random_field(g, 9);
  const auto pf = lp_project(f, 0);
  const auto mixed = spatial_transform(pf);
  for (std::size_t s = 0; s < g.space.size(); ++s) {
    if (bump(g.space.freq_norm(s)) == 0.0) {
      for (int t = 0; t < g.n_t; ++t) CHECK(std::abs(mixed.at(s, t)) < 1e-10);
    }
  }
}

TEST_CASE("apply_symbol") {
  GridSpec g{SpatialGrid{2, 32, 8 * pi}, 32, 8 * pi};
  const auto f = random_field(g, 77);
  const double scale = max_abs(f.samples());

  const auto id = apply_symbol(f, one_symbol());
  CHECK(id.collar_points == 0);
  CHECK(id.field.domain() == Domain::physical);
  CHECK(max_diff(id.field.samples(), f.samples()) < 1e-12 * scale);

  const SymbolSpec cone_ind{"cone-indicator", [](double xn, double tau) { return cplx(std::abs(tau) <= xn ? 1.0 : 0.0); },
                            {{Region::cone, 0}}, {}, 0};
  const auto once = apply_symbol(f, cone_ind).field;
  const auto twice = apply_symbol(once, cone_ind).field;
  CHECK(max_diff(once.samples(), twice.samples()) < 1e-12 * scale);

  const auto m1 = cone_symbol(0.5);
  const auto m2 = d_plus_symbol(0.25) * annulus_symbol();
  const auto seq = apply_symbol(apply_symbol(f, m1).field, m2).field;
  const auto prod = apply_symbol(f, m1 * m2).field;
  CHECK(max_diff(seq.samples(), prod.samples()) < 1e-12 * scale);

  // linearity
  const auto f2 = random_field(g, 78);
  SpaceTimeField comb(g, Domain::physical);
  for (std::size_t i = 0; i < comb.samples().size(); ++i) comb.samples()[i] = 2.0 * f.samples()[i] - f2.samples()[i];
  const auto lhs = apply_symbol(comb, m1).field;
  const auto a = apply_symbol(f, m1).field;
  const auto b = apply_symbol(f2, m1).field;
  double err = 0.0;
  for (std::size_t i = 0; i < comb.samples().size(); ++i) {
    err = std::max(err, std::abs(lhs.samples()[i] - (2.0 * a.samples()[i] - b.samples()[i])));
  }
  CHECK(err < 1e-12 * scale);

  // support preservation
  const auto spec = forward_transform(a);
  double outside = 0.0;
  for (std::size_t s = 0; s < g.space.size(); ++s) {
    for (int t = 0; t < g.n_t; ++t) {
      if (!m1.in_support(g.space.freq_norm(s), g.tau(t))) outside = std::max(outside, std::abs(spec.at(s, t)));
    }
  }
  CHECK(outside < 1e-12 * max_abs(spec.samples()));

  // frequency input stays in frequency
  const auto hf = apply_symbol(forward_transform(f), m1);
  CHECK(hf.field.domain() == Domain::frequency);

  // negative cone power: the one-cell collar is zeroed and counted
  const auto neg = apply_symbol(f, d_minus_symbol(-0.25));
  CHECK(neg.collar_points > 0);
  std::size_t expected = 0;
  for (std::size_t s = 0; s < g.space.size(); ++s) {
    for (int t = 0; t < g.n_t; ++t) expected += std::abs(g.space.freq_norm(s) - std::abs(g.tau(t))) < g.dtau();
  }
  CHECK(neg.collar_points == expected);

  // negative origin power: only the lattice origin is clamped
  const auto dp = apply_symbol(f, d_plus_symbol(-0.5));
  CHECK(dp.collar_points == 1);

  const SymbolSpec bad{"bad", [](double, double) { return cplx(NAN); }, {}, {}, 0};
  CHECK_THROWS_AS(apply_symbol(f, bad), NumericalError);
}
