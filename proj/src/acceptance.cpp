#include "kinavg/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "kinavg/errors.hpp"
#include "kinavg/radon.hpp"
#include "kinavg/special.hpp"
#include "kinavg/symbols.hpp"

namespace kinavg {

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  json data = json::object();

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "failed: " << what << "; ";
    }
  }
};

Outcome sharp_constant_d2() {
  Outcome o;
  const double target = 4.0 * pi;
  const double closed = sharp_constant_general(2, 0.25).value;
  const double numeric = sharp_constant_numeric(2, 0.25).value;
  o.data = {{"closed_form", closed}, {"maximisation", numeric}, {"target", target}};
  o.check(rel(closed, target) <= 1e-10, "closed form equals 4 pi to 1e-10");
  o.check(rel(numeric, target) <= 1e-10, "maximisation equals 4 pi to 1e-10");
  o.detail << "C = " << format_real(closed) << " closed, " << format_real(numeric) << " by maximisation";
  return o;
}

Outcome sharp_constant_sweep() {
  Outcome o;
  double worst = 0.0;
  json rows = json::array();
  for (int d : {2, 3}) {
    const double lo = (3.0 - d) / 4.0, hi = 0.5;
    for (int i = 0; i < 10; ++i) {
      const double bm = lo + (hi - lo) * i / 9.0;
      const double closed = sharp_constant_general(d, bm).value;
      const double numeric = sharp_constant_numeric(d, bm).value;
      const double e = rel(numeric, closed);
      worst = std::max(worst, e);
      rows.push_back({{"d", d}, {"beta_minus", bm}, {"closed_form", closed}, {"maximisation", numeric}});
    }
  }
  o.data = {{"rows", rows}, {"worst_relative_error", worst}};
  o.check(worst <= 1e-8, "closed form and maximisation agree to 1e-8");
  o.detail << "worst relative gap " << format_real(worst) << " over 20 points";
  return o;
}

Outcome radial_constant() {
  Outcome o;
  const double c0 = sharp_constant_radial(2, 0.25, 0.25).value;
  const double i0 = i_k_integral(2, 0, 0.25, 0.25), i1 = i_k_integral(2, 1, 0.25, 0.25);
  o.data = {{"C0", c0}, {"I0", i0}, {"I1", i1}};
  o.check(rel(c0, 4.0 * pi) <= 1e-10, "C0 equals 4 pi to 1e-10");
  o.check(i1 < i0, "I_1 < I_0");
  o.detail << "C0 = " << format_real(c0) << ", I0 = " << format_real(i0) << ", I1 = " << format_real(i1);
  return o;
}

Outcome duality() {
  Outcome o;
  const int n = 256;
  const auto grid = duality_grid(2, n);
  const std::vector<std::pair<std::string, SymbolSpec>> symbols{
      {"1", one_symbol()}, {"dplus:0.25*dminus:0.25", d_plus_symbol(0.25) * d_minus_symbol(0.25)}};
  const std::vector<std::pair<std::string, VelocityMeasure>> measures{
      {"sphere", duality_measure(2, MeasureKind::sphere, -1.0, n)},
      {"kappa_ball(0)", duality_measure(2, MeasureKind::kappa_ball, 0.0, n)}};
  double worst = 0.0;
  json runs = json::array();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_annulus_field(grid, seed);
    for (const auto& [mname, mu] : measures) {
      for (const auto& [sname, m] : symbols) {
        const auto r = duality_residual(g, m, mu);
        worst = std::max(worst, r.residual);
        runs.push_back({{"seed", seed}, {"measure", mname}, {"symbol", sname}, {"lhs", r.lhs}, {"rhs", r.rhs},
                        {"residual", r.residual}});
      }
    }
  }
  o.check(worst <= 1e-3, "residual <= 1e-3 for all 80 runs");
  json ladder = json::array();
  bool decreasing = true;
  for (const auto& [mname, mu0] : measures) {
    const double kappa = mu0.kind == MeasureKind::sphere ? -1.0 : 0.0;
    for (const auto& [sname, m] : symbols) {
      std::vector<double> res;
      for (int level : {64, 128, 256}) {
        const auto gl = duality_grid(2, level);
        res.push_back(duality_residual(random_annulus_field(gl, 1), m, duality_measure(2, mu0.kind, kappa, level))
                          .residual);
      }
      // m = 1 on the sphere is exact to rounding at every level
      const bool exact = res.back() < 1e-12 && res.front() < 1e-12;
      const bool dec = exact || (res[1] < res[0] && res[2] < res[1]);
      decreasing = decreasing && dec;
      ladder.push_back({{"measure", mname}, {"symbol", sname}, {"n", {64, 128, 256}}, {"residual", res},
                        {"at_rounding", exact}});
    }
  }
  o.check(decreasing, "residual decreases over n = 64, 128, 256");
  o.data = {{"grid_n", n}, {"worst_residual", worst}, {"runs", runs}, {"refinement", ladder}};
  o.detail << "worst residual " << format_real(worst) << " over 20 seeds x 2 measures x 2 symbols";
  return o;
}

Outcome m_mu_closed_form() {
  Outcome o;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xi_dist(0.05, 4.0), l_dist(-1.0, 1.0);
  double worst = 0.0;
  for (int d : {2, 3}) {
    for (double kappa : {-1.0, -0.5, 0.0}) {
      for (double bm : {0.0, 0.25}) {
        const double bp = 0.5 - bm;
        const auto mu = build_m_mu(d_plus_symbol(bp) * d_minus_symbol(bm), kappa_ball_measure(d, kappa, 4, 8));
        const auto ref = m_kappa_symbol(d, kappa, bp, bm);
        for (int i = 0; i < 10000; ++i) {
          const double xn = xi_dist(rng), tau = xn * l_dist(rng);
          worst = std::max(worst, std::abs(mu.at(xn, tau) - ref.at(xn, tau)));
        }
      }
    }
  }
  o.data = {{"points_per_case", 10000}, {"worst_abs_error", worst}};
  o.check(worst <= 1e-10, "m_mu matches m_kappa to 1e-10");
  o.detail << "worst difference " << format_real(worst);
  return o;
}

Outcome radon_closed_form() {
  Outcome o;
  double worst = 0.0;
  for (int d : {2, 3}) {
    for (double kappa : {-0.5, 0.0}) {
      const auto w = [kappa](double s) { return std::pow(1.0 - s * s, kappa) / std::tgamma(1.0 + kappa); };
      for (int i = 0; i < 200; ++i) {
        const double r = -1.0 + 2.0 * i / 199.0;
        const double a = radon_radial(d, w, r), b = radon_kappa_closed(d, kappa, r);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
      }
    }
  }
  const auto one = [](double) { return 1.0; };
  const double disk = radon_radial(3, one, 0.0), chord = radon_radial(2, one, 0.0);
  o.data = {{"worst_error", worst}, {"disk_area", disk}, {"chord_length", chord}};
  o.check(worst <= 1e-6, "quadrature matches closed form to 1e-6");
  o.check(rel(disk, pi) <= 1e-10, "central slice of the 3-ball has area pi");
  o.check(rel(chord, 2.0) <= 1e-10, "central chord of the disk has length 2");
  o.detail << "worst gap " << format_real(worst) << ", disk " << format_real(disk) << ", chord "
           << format_real(chord);
  return o;
}

Outcome funk_hecke_path() {
  Outcome o;
  const auto profile = [](double r) { return bump(r) * std::cos(r); };
  const GridSpec g{SpatialGrid{2, 32, 8 * pi}, 32, 8 * pi};
  const std::vector<RadialModeData> modes{RadialModeData(2, 0, 0, profile),
                                          RadialModeData(2, 1, 1, [](double r) { return 0.7 * bump(r); }),
                                          RadialModeData(2, 2, -2, [](double r) { return bump(r) * r; })};
  const auto f = phase_space_from_modes(modes, g.space, sphere_measure(2, 16));
  json per_mode = json::array();
  double worst = 0.0;
  for (Sampling sampling : {Sampling::point, Sampling::cell_average}) {
    const char* name = sampling == Sampling::point ? "point" : "cell_average";
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const std::vector<RadialModeData> one{modes[k]};
      const auto fk = phase_space_from_modes(one, g.space, sphere_measure(2, 16));
      const auto series = funk_hecke_average(one, g, sampling);
      const auto slice = average_rho(fk, g.n_t, g.len_t, {sampling});
      const double e = max_diff(series.samples(), slice.samples()) / max_abs(slice.samples());
      worst = std::max(worst, e);
      per_mode.push_back({{"k", modes[k].k()}, {"sampling", name}, {"relative_error", e}});
    }
    const auto slice = average_rho(f, g.n_t, g.len_t, {sampling});
    const double e = max_diff(funk_hecke_average(modes, g, sampling).samples(), slice.samples()) /
                     max_abs(slice.samples());
    worst = std::max(worst, e);
    per_mode.push_back({{"k", "0+1+2"}, {"sampling", name}, {"relative_error", e}});
  }

  // k = 0: 2 |S^0| pi / |xi| (1 - l^2)^{-1/2} profile(|xi|)
  const auto rho0 = funk_hecke_average({modes[0]}, g);
  double err0 = 0.0, mag0 = 0.0;
  for (std::size_t s = 0; s < g.space.size(); ++s) {
    const double xn = g.space.freq_norm(s);
    for (int t = 0; t < g.n_t; ++t) {
      const double l = g.tau(t) / xn;
      if (!(std::abs(l) < 1.0)) continue;
      const double exact = sphere_area(0) * 2 * pi / xn / std::sqrt(1 - l * l) * modes[0].profile(xn);
      err0 = std::max(err0, std::abs(rho0.at(s, t) - exact));
      mag0 = std::max(mag0, std::abs(exact));
    }
  }
  o.data = {{"per_mode", per_mode}, {"k0_closed_form_error", err0 / mag0}};
  o.check(worst <= 1e-4, "series matches slice quadrature to 1e-4");
  o.check(err0 <= 1e-8 * mag0, "k = 0 equals the closed form to 1e-8");
  o.detail << "series vs quadrature " << format_real(worst) << ", k = 0 vs closed form " << format_real(err0 / mag0);
  return o;
}

Outcome knapp_slopes() {
  Outcome o;
  struct Case {
    int d, q;
    Rational alpha;
  };
  json reps = json::array();
  for (const auto& c : {Case{2, 2, Rational(0)}, Case{2, 4, Rational(0)}, Case{3, 4, Rational(1, 4)}}) {
    const auto r = knapp_scan(c.d, c.q, c.q, c.alpha, default_deltas());
    o.check(r.pass.value_or(false), "Knapp slope for d = " + std::to_string(c.d) + ", q = r = " + std::to_string(c.q));
    o.detail << "(" << c.d << "," << c.q << "," << c.q << "," << c.alpha << "): slope " << format_real(r.fit.slope)
             << " vs " << format_real(r.predicted) << "; ";
    reps.push_back(to_json(r));
  }
  o.data = {{"reports", reps}};
  return o;
}

Outcome dyadic_envelopes() {
  Outcome o;
  json reps = json::array();
  const auto add = [&](const ScalingReport& r, const std::string& label) {
    o.check(r.pass.value_or(false), label);
    o.detail << label << ": slope " << format_real(r.fit.slope) << " <= " << format_real(r.predicted) << " + 0.1; ";
    reps.push_back(to_json(r));
  };
  add(dyadic_scan(3, 4, 4, default_ks()), "C_k (3,4,4)");
  add(dyadic_scan(2, 2, 2, default_ks()), "C_k (2,2,2)");
  add(rho_dyadic_scan(2, RhoData::generic, default_ks()), "rho d=2 generic");
  add(rho_dyadic_scan(3, RhoData::generic, default_ks()), "rho d=3 generic");
  add(rho_dyadic_scan(3, RhoData::radial_x, default_ks()), "rho d=3 radial");
  o.data = {{"reports", reps}};
  return o;
}

Outcome extremiser() {
  Outcome o;
  const auto seq = extremiser_sequence({128, 256, 512}, [](double r) { return bump(r); });
  json levels = json::array();
  for (const auto& l : seq) levels.push_back({{"n", l.n}, {"ratio", l.ratio}, {"ratio_over_4pi", l.ratio / (4 * pi)}});
  const bool inc = seq[1].ratio > seq[0].ratio && seq[2].ratio > seq[1].ratio;
  o.check(inc, "ratio increases with resolution");
  o.check(seq[2].ratio >= 0.95 * 4 * pi, "ratio at 512 reaches 0.95 * 4 pi");
  o.data = {{"levels", levels}};
  o.detail << "ratio / 4 pi = " << format_real(seq[0].ratio / (4 * pi)) << ", " << format_real(seq[1].ratio / (4 * pi))
           << ", " << format_real(seq[2].ratio / (4 * pi));
  return o;
}

cplx velocity_data(const Vec3& xi, const Vec3& v) {
  const double th = std::atan2(v[1], v[0]);
  return bump(norm3(xi)) * cplx(std::cos(xi[0] + 2 * th) + v[2] * v[0], std::sin(3 * xi[1] - th));
}

Outcome structural() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;

  // Plancherel
  double plancherel = 0.0;
  for (int d : {2, 3}) {
    GridSpec g = GridSpec::cube(d, 16, 5.0);
    g.n_t = 32;
    g.len_t = 7.0;
    SpaceTimeField f(g, Domain::physical);
    for (auto& v : f.samples()) v = {normal(rng), normal(rng)};
    const double ratio = l2_norm_squared(forward_transform(f)) / (std::pow(2 * pi, d + 1) * l2_norm_squared(f));
    plancherel = std::max(plancherel, std::abs(ratio - 1.0));
  }
  o.check(plancherel <= 1e-12, "Plancherel to 1e-12");

  // Littlewood-Paley reconstruction of a field with spectrum in [1/4, 4]
  const SpatialGrid sg{2, 512, 32 * pi};
  SpatialField hat(sg, Domain::frequency);
  for (std::size_t i = 0; i < sg.size(); ++i) {
    const double r = sg.freq_norm(i);
    if (r >= 0.25 && r <= 4.0) hat.samples()[i] = {normal(rng), normal(rng)};
  }
  const auto h = inverse_transform(hat);
  SpatialField sum(sg, Domain::physical);
  for (int j = -2; j <= 2; ++j) {
    const auto p = lp_project(h, j);
    for (std::size_t i = 0; i < sg.size(); ++i) sum.samples()[i] += p.samples()[i];
  }
  const double lp = max_diff(sum.samples(), h.samples()) / max_abs(h.samples());
  o.check(lp <= 1e-10, "Littlewood-Paley pieces sum back to 1e-10");

  // support of rho f inside the cone, exactly
  std::size_t outside = 0;
  const SpatialGrid small{2, 32, 8 * pi};
  for (const auto& m : {sphere_measure(2, 16), kappa_ball_measure(2, 0.0, 4, 16)}) {
    const auto f = phase_space_from_symbol(small, m, velocity_data);
    for (Sampling s : {Sampling::cell_average, Sampling::point}) {
      const auto rho = average_rho(f, 64, 8 * pi, {s});
      const GridSpec& g = rho.grid();
      for (std::size_t i = 0; i < small.size(); ++i) {
        for (int t = 0; t < g.n_t; ++t) {
          if (std::abs(g.tau(t)) > small.freq_norm(i) && rho.at(i, t) != cplx(0.0)) ++outside;
        }
      }
    }
  }
  o.check(outside == 0, "rho f vanishes outside the cone");

  // rescaling across Littlewood-Paley scales
  const double bp = 0.3, bm = -0.2;
  const auto D = d_plus_symbol(bp) * d_minus_symbol(bm);
  const auto mu = sphere_measure(2, 16);
  const auto F = [](const Vec3& xi, const Vec3& v) {
    const double th = std::atan2(v[1], v[0]);
    return cplx(std::exp(-0.1 * (xi[0] * xi[0] + xi[1] * xi[1])) * (1.0 + 0.4 * std::cos(th)),
                0.3 * xi[1] * std::sin(2 * th));
  };
  const auto smoothed = [&](const PhaseSpaceData& f, const GridSpec& g) {
    return inverse_transform(apply_symbol(average_rho(f, g.n_t, g.len_t), D).field);
  };
  double rescale = 0.0;
  const double len = 8 * pi;
  for (int j : {-1, 0, 1}) {
    const double sj = std::ldexp(1.0, j);
    const GridSpec ga{SpatialGrid{2, 64, len}, 64, len};
    const GridSpec gb{SpatialGrid{2, 64, len * sj}, 64, len * sj};
    const auto pj = phase_space_from_symbol(ga.space, mu, [&](const Vec3& xi, const Vec3& v) {
      return bump(std::ldexp(norm3(xi), -j)) * F(xi, v);
    });
    const auto p0 = phase_space_from_symbol(gb.space, mu, [&](const Vec3& xi, const Vec3& v) {
      const Vec3 big{sj * xi[0], sj * xi[1], 0.0};
      return bump(norm3(xi)) * F(big, v);
    });
    const auto a = smoothed(pj, ga);
    const auto b = smoothed(p0, gb);
    const double factor = std::pow(sj, bp + bm + 2);
    double err = 0.0;
    for (std::size_t i = 0; i < a.samples().size(); ++i) {
      err = std::max(err, std::abs(a.samples()[i] - factor * b.samples()[i]));
    }
    rescale = std::max(rescale, err / max_abs(a.samples()));
  }
  o.check(rescale <= 1e-6, "rescaling identity to 1e-6");

  // adjointness for the kappa = 0 ball
  const GridSpec ga{SpatialGrid{2, 32, 16 * pi}, 512, 256.0};
  const auto gfield = inverse_spatial_transform(random_annulus_field(ga, 23));
  const auto kb = kappa_ball_measure(2, 0.0, 8, 64);
  const auto f = phase_space_from_symbol(ga.space, kb, velocity_data);
  const cplx lhs = inner_product(average_rho(f, ga.n_t, ga.len_t), forward_transform(gfield));
  const auto dual = dual_rho_star(gfield, kb);
  const cplx rhs = inner_product(f, dual.data);
  const double adj = std::abs(lhs - rhs) / std::abs(rhs);
  o.check(dual.out_of_band == 0 && adj <= 1e-3, "<rho f, g> = <f, rho* g> to 1e-3");

  // Legendre bound
  double margin = 1.0;
  for (int d = 2; d <= 3; ++d) {
    for (int k = 1; k <= 10; ++k) {
      for (int i = 1; i <= 100; ++i) margin = std::min(margin, legendre_bound_margin(d, k, -1.0 + 2.0 * i / 101.0));
    }
  }
  o.check(margin >= 0.0, "Legendre bound margin >= 0");

  o.data = {{"plancherel", plancherel}, {"littlewood_paley", lp}, {"outside_cone", outside},
            {"rescaling", rescale},     {"adjointness", adj},     {"legendre_margin", margin}};
  o.detail << "Plancherel " << format_real(plancherel) << ", LP " << format_real(lp) << ", outside cone " << outside
           << ", rescaling " << format_real(rescale) << ", adjoint " << format_real(adj) << ", Legendre margin "
           << format_real(margin);
  return o;
}

struct Entry {
  const char* title;
  double budget;
  Outcome (*run)();
};

const std::vector<Entry>& table() {
  static const std::vector<Entry> t{
      {"sharp constant d=2 equals 4 pi", 1.0, sharp_constant_d2},
      {"sharp constant sweep, closed form vs maximisation", 5.0, sharp_constant_sweep},
      {"radial sharp constant and I_1 < I_0", 5.0, radial_constant},
      {"duality identity on random annulus data", 600.0, duality},
      {"m_mu equals the closed-form kappa multiplier", 10.0, m_mu_closed_form},
      {"Radon transform closed form and slice geometry", 10.0, radon_closed_form},
      {"Funk-Hecke series vs slice quadrature", 120.0, funk_hecke_path},
      {"Knapp necessity slopes", 600.0, knapp_slopes},
      {"dyadic sufficiency envelopes", 900.0, dyadic_envelopes},
      {"extremiser attainment", 1200.0, extremiser},
      {"structural invariants", 3600.0, structural},
  };
  return t;
}

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (std::size_t i = 0; i < table().size(); ++i) ids.push_back(static_cast<int>(i) + 1);
  return ids;
}

std::string criterion_title(int id) {
  require(id >= 1 && id <= static_cast<int>(table().size()), "unknown criterion " + std::to_string(id));
  return table()[static_cast<std::size_t>(id - 1)].title;
}

CriterionResult run_criterion(int id) {
  const auto& e = table().at(static_cast<std::size_t>(id - 1));
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  r.budget = e.budget;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = e.run();
    r.checks = o.ok;
    r.detail = o.detail.str();
    r.data = std::move(o.data);
  } catch (const std::exception& ex) {
    r.checks = false;
    r.detail = std::string("error: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

json to_json(const CriterionResult& r) {
  return {{"id", r.id},          {"title", r.title},   {"pass", r.pass()}, {"checks", r.checks},
          {"seconds", r.seconds}, {"budget", r.budget}, {"detail", r.detail}, {"data", r.data}};
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << (r.pass() ? "[PASS] " : "[FAIL] ") << r.id << " " << r.title << " (" << r.seconds << " s";
  if (r.seconds > r.budget) os << ", over the " << r.budget << " s budget";
  os << "): " << r.detail;
  return os.str();
}

}  // namespace kinavg
