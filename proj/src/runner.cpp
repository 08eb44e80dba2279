#include "kinavg/runner.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <map>
#include <numbers>
#include <sstream>

#include "kinavg/acceptance.hpp"
#include "kinavg/errors.hpp"
#include "kinavg/exponents.hpp"
#include "kinavg/field_io.hpp"
#include "kinavg/radon.hpp"
#include "kinavg/scaling.hpp"
#include "kinavg/special.hpp"
#include "kinavg/symbols.hpp"
#include "kinavg/velocity.hpp"

namespace kinavg {

namespace {

constexpr double pi = std::numbers::pi;

using Config = ExperimentConfig;

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

int dimension(const Config& c) {
  const auto d = c.integer("d");
  require(d == 2 || d == 3, "d must be 2 or 3");
  return static_cast<int>(d);
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

CommandOutput thresholds(const Config& c) {
  const int d = static_cast<int>(c.integer("d"));
  check_dimension(d);
  const Rational kappa = c.rational("kappa");
  check_kappa(kappa);
  const auto lattice = c.rational_range("grid_qr");
  Table t({"q", "r", "wave_admissible", "radial_admissible", "alpha_star", "beta_plus_star", "beta_minus_star",
           "alpha_double_star", "radial_x_beta_minus_star"});
  std::size_t mismatches = 0, rows = 0;
  for (const auto& q : lattice) {
    check_lebesgue(q, "q");
    for (const auto& r : lattice) {
      check_lebesgue(r, "r");
      const auto a = alpha_star(d, q, r);
      const auto bm = beta_minus_star(d, q, r, kappa);
      t.add({q.str(), r.str(), yes_no(wave_admissible(d, q, r)), yes_no(radial_admissible(d, q, r)), a.value.str(),
             beta_plus_star(d, q, r).value.str(), bm.value.str(), alpha_double_star(d, q, r).value.str(),
             radial_x_beta_minus_star(d, q, r).value.str()});
      ++rows;
      // the smoothing threshold and the cone order are one exponent seen twice
      if (equiv_alpha(d, bm.value, kappa) != a.value) ++mismatches;
      if (q == r && gamma_decoupling(d, Rational(2), q).value != a.value) ++mismatches;
    }
  }
  CommandOutput o;
  o.body = {{"claim", "exponent-thresholds"}, {"d", d}, {"kappa", kappa.str()}, {"pairs", rows},
            {"consistency_failures", mismatches}};
  o.pass = mismatches == 0;
  o.lines.push_back(std::to_string(rows) + " (q, r) pairs, " + std::to_string(mismatches) + " consistency failures");
  o.lines.push_back(t.csv());
  o.tables.emplace_back("", std::move(t));
  return o;
}

CommandOutput constants(const Config& c) {
  const int d = dimension(c);
  const double bm = c.rational("beta_minus").to_double();
  const auto closed = sharp_constant_general(d, bm);
  const auto search = sharp_constant_numeric(d, bm);
  const double gap = rel(search.value, closed.value);
  CommandOutput o;
  o.body = {{"claim", "sharp-constant-sphere"}, {"d", d},
            {"beta_minus", bm},                 {"C", closed.value},
            {"formula", closed.formula_id},     {"branch", closed.branch},
            {"boundary", closed.boundary},      {"C_maximisation", search.value},
            {"argmax", search.argmax},          {"relative_gap", gap}};
  o.pass = gap <= 1e-8;
  std::string line = "C = " + format_real(closed.value);
  if (rel(closed.value, 4 * pi) <= 1e-10) line += " = 4 pi";
  o.lines.push_back(line + " (branch " + closed.branch + ")");
  o.lines.push_back("maximisation: " + format_real(search.value) + " at lambda = " + format_real(search.argmax) +
                    ", relative gap " + format_real(gap));
  return o;
}

CommandOutput radon(const Config& c) {
  const int d = dimension(c);
  const double kappa = c.rational("kappa").to_double();
  const auto n = c.integer("samples");
  require(n >= 2, "samples must be at least 2");
  const auto profile = radon_profile(d, kappa);
  const bool quad = kappa > -1.0;
  Table t({"r", "closed", "quadrature", "abs_diff"});
  double worst = 0.0;
  for (long long i = 0; i < n; ++i) {
    const double r = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    const double cl = profile.closed(r);
    const double qu = quad ? profile.quadrature(r) : std::nan("");
    if (quad) worst = std::max(worst, std::abs(cl - qu) / std::max(1.0, std::abs(cl)));
    t.add({format_real(r), format_real(cl), format_real(qu), format_real(quad ? std::abs(cl - qu) : std::nan(""))});
  }
  CommandOutput o;
  o.body = {{"claim", "radon-kappa-profile"}, {"d", d},       {"kappa", kappa},
            {"constant", profile.constant},  {"exponent", profile.exponent},
            {"central_value", profile.closed(0.0)}, {"worst_error", quad ? json(worst) : json(nullptr)}};
  if (quad) o.pass = worst <= 1e-6;
  o.lines.push_back("R w(0) = " + format_real(profile.closed(0.0)) +
                    (quad ? ", worst closed form vs quadrature " + format_real(worst) : ", closed form only"));
  o.tables.emplace_back("", std::move(t));
  return o;
}

VelocityMeasure measure_from(const Config& c, int d, int default_nodes) {
  const int nodes = static_cast<int>(c.integer_or("measure.nodes", default_nodes));
  if (c.text("measure") == "sphere") return sphere_measure(d, nodes);
  return kappa_ball_measure(d, c.rational("kappa").to_double(), 4, nodes);
}

CommandOutput average(const Config& c, const std::filesystem::path& dir) {
  const int d = dimension(c);
  const int n = static_cast<int>(c.integer_or("grid.n", d == 2 ? 32 : 16));
  const double len = c.real_or("grid.len", 8 * pi);
  const GridSpec g{SpatialGrid{d, n, len}, static_cast<int>(c.integer_or("grid.n_t", 2 * n)),
                   c.real_or("grid.len_t", len)};
  const auto mu = measure_from(c, d, d == 2 ? 16 : 6);
  const auto f = phase_space_from_symbol(g.space, mu, [](const Vec3& xi, const Vec3& v) {
    const double xn = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    return bump(xn) * (1.0 + 0.5 * v[0]) * std::exp(cplx(0.0, -xi[0]));
  });
  const auto rho = average_rho(f, g.n_t, g.len_t);
  std::size_t outside = 0;
  Table t({"tau", "energy"});
  std::vector<double> energy(static_cast<std::size_t>(g.n_t), 0.0);
  for (std::size_t s = 0; s < g.space.size(); ++s) {
    for (int k = 0; k < g.n_t; ++k) {
      const cplx v = rho.at(s, k);
      if (std::abs(g.tau(k)) > g.space.freq_norm(s) && v != cplx(0.0)) ++outside;
      energy[static_cast<std::size_t>(k)] += std::norm(v);
    }
  }
  for (int k = 0; k < g.n_t; ++k) t.add({format_real(g.tau(k)), format_real(energy[static_cast<std::size_t>(k)])});
  const auto symbol = parse_symbol(c.text("symbol"));
  const auto smoothed = apply_symbol(rho, symbol);
  std::ostringstream bytes;
  write_field(bytes, smoothed.field);
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "average.kvf", bytes.str());

  CommandOutput o;
  o.body = {{"claim", "average-cone-support"},
            {"d", d},
            {"measure", to_string(mu.kind)},
            {"nodes", mu.size()},
            {"symbol", symbol.name},
            {"f_norm_squared", f.l2_norm_squared()},
            {"rho_norm_squared", l2_norm_squared(rho)},
            {"symbol_collar_points", smoothed.collar_points},
            {"outside_cone", outside},
            {"field", "average.kvf"}};
  o.pass = outside == 0;
  o.lines.push_back("||f||^2 = " + format_real(f.l2_norm_squared()) + ", ||rho f||^2 = " +
                    format_real(l2_norm_squared(rho)) + ", nonzero samples outside the cone: " +
                    std::to_string(outside));
  o.tables.emplace_back("tau", std::move(t));
  return o;
}

CommandOutput duality_check(const Config& c) {
  const int d = dimension(c);
  const int n = static_cast<int>(c.integer_or("grid.n", d == 2 ? 256 : 32));
  const bool sphere = c.text("measure") == "sphere";
  const double kappa = sphere ? -1.0 : c.rational("kappa").to_double();
  const auto grid = duality_grid(d, n);
  const auto mu = duality_measure(d, sphere ? MeasureKind::sphere : MeasureKind::kappa_ball, kappa, n);
  const auto m = parse_symbol(c.text("symbol"));
  const auto seed0 = static_cast<std::uint64_t>(c.integer("seed"));
  const auto seeds = c.integer("seeds");
  require(seeds >= 1, "seeds must be at least 1");
  Table t({"seed", "lhs", "rhs", "residual"});
  double worst = 0.0;
  for (long long i = 0; i < seeds; ++i) {
    const auto seed = seed0 + static_cast<std::uint64_t>(i);
    const auto r = duality_residual(random_annulus_field(grid, seed), m, mu);
    worst = std::max(worst, r.residual);
    t.add({std::to_string(seed), format_real(r.lhs), format_real(r.rhs), format_real(r.residual)});
  }
  CommandOutput o;
  o.body = {{"claim", "duality-identity"}, {"d", d}, {"n", n}, {"measure", to_string(mu.kind)}, {"kappa", kappa},
            {"symbol", m.name}, {"seed", seed0}, {"seeds", seeds}, {"worst_residual", worst}, {"tolerance", 1e-3}};
  o.pass = worst <= 1e-3;
  o.lines.push_back("worst residual " + format_real(worst) + " over " + std::to_string(seeds) + " seed(s)");
  o.tables.emplace_back("", std::move(t));
  return o;
}

CommandOutput scan_output(const ScalingReport& r) {
  CommandOutput o;
  o.body = to_json(r);
  o.pass = r.pass;
  o.lines.push_back(r.claim + ": slope " + format_real(r.fit.slope) + ", predicted " + format_real(r.predicted) +
                    ", " + (r.pass ? (*r.pass ? "pass" : "FAIL") : "descriptive") + " (" + r.verdict + ")");
  o.tables.emplace_back("", scaling_table(r));
  return o;
}

CommandOutput funk_hecke(const Config& c) {
  const int d = dimension(c);
  const auto degrees = c.integers("modes");
  require(!degrees.empty(), "modes must list at least one degree");
  const int n = static_cast<int>(c.integer_or("grid.n", d == 2 ? 32 : 16));
  const double len = c.real_or("grid.len", 8 * pi);
  const GridSpec g{SpatialGrid{d, n, len}, static_cast<int>(c.integer_or("grid.n_t", 32)),
                   c.real_or("grid.len_t", len)};
  const auto mu = sphere_measure(d, static_cast<int>(c.integer_or("measure.nodes", d == 2 ? 16 : 6)));
  Table t({"k", "sampling", "relative_error"});
  double worst = 0.0, closed_error = std::nan("");
  for (int k : degrees) {
    require(k >= 0, "mode degrees must be nonnegative");
    const std::vector<RadialModeData> one{
        RadialModeData(d, k, d == 2 ? k : 0, [k](double r) { return bump(r) * std::cos(r + 0.3 * k); })};
    const auto f = phase_space_from_modes(one, g.space, mu);
    for (Sampling s : {Sampling::point, Sampling::cell_average}) {
      const auto series = funk_hecke_average(one, g, s);
      const auto slice = average_rho(f, g.n_t, g.len_t, {s});
      const double e = max_diff(series.samples(), slice.samples()) / max_abs(slice.samples());
      worst = std::max(worst, e);
      t.add({std::to_string(k), s == Sampling::point ? "point" : "cell_average", format_real(e)});
    }
    if (k == 0) {
      const auto rho = funk_hecke_average(one, g);
      const double y0 = d == 2 ? 1.0 : real_spherical_harmonic(0, 0, 0.0, 0.0);
      double err = 0.0, mag = 0.0;
      for (std::size_t s = 0; s < g.space.size(); ++s) {
        const double xn = g.space.freq_norm(s);
        for (int i = 0; i < g.n_t; ++i) {
          const double l = g.tau(i) / xn;
          if (!(std::abs(l) < 1.0)) continue;
          const double exact =
              sphere_area(d - 2) * 2 * pi / xn * std::pow(1 - l * l, 0.5 * (d - 3)) * one[0].profile(xn) * y0;
          err = std::max(err, std::abs(rho.at(s, i) - exact));
          mag = std::max(mag, std::abs(exact));
        }
      }
      closed_error = err / mag;
    }
  }
  CommandOutput o;
  o.body = {{"claim", "funk-hecke-series"}, {"d", d}, {"modes", degrees}, {"worst_relative_error", worst},
            {"k0_closed_form_error", real_value(closed_error)}};
  o.pass = worst <= 1e-4 && (std::isnan(closed_error) || closed_error <= 1e-8);
  o.lines.push_back("series vs slice quadrature: worst " + format_real(worst));
  if (!std::isnan(closed_error)) o.lines.push_back("k = 0 vs closed form: " + format_real(closed_error));
  o.tables.emplace_back("", std::move(t));
  return o;
}

CommandOutput sharp_radial(const Config& c) {
  const int d = dimension(c);
  const double bp = c.rational("beta_plus").to_double(), bm = c.rational("beta_minus").to_double();
  const auto c0 = sharp_constant_radial(d, bp, bm);
  Table t({"k", "I_k"});
  std::vector<double> ik;
  for (int k = 0; k <= 8; ++k) {
    ik.push_back(i_k_integral(d, k, bp, bm));
    t.add({std::to_string(k), format_real(ik.back())});
  }
  CommandOutput o;
  o.body = {{"claim", "sharp-constant-radial"}, {"d", d}, {"beta_plus", bp}, {"beta_minus", bm},
            {"C0", c0.value}, {"formula", c0.formula_id}, {"branch", c0.branch}, {"I_k", ik}};
  o.pass = ik[1] < ik[0];
  std::string line = "C0 = " + format_real(c0.value);
  if (rel(c0.value, 4 * pi) <= 1e-10) line += " = 4 pi";
  o.lines.push_back(line + ", I_0 = " + format_real(ik[0]) + ", I_1 = " + format_real(ik[1]));
  o.tables.emplace_back("", std::move(t));
  return o;
}

CommandOutput extremiser(const Config& c) {
  require(c.integer("d") == 2, "the extremiser family exists for d = 2 only");
  const auto levels = c.integers_or("levels", {128, 256, 512});
  const auto seq = extremiser_sequence(levels, [](double r) { return bump(r); });
  Table t({"n", "ratio", "ratio_over_4pi"});
  json rows = json::array();
  bool increasing = true;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    t.add({std::to_string(seq[i].n), format_real(seq[i].ratio), format_real(seq[i].ratio / (4 * pi))});
    rows.push_back({{"n", seq[i].n}, {"ratio", seq[i].ratio}});
    if (i > 0 && !(seq[i].ratio > seq[i - 1].ratio)) increasing = false;
  }
  const bool reaches = seq.back().n < 512 || seq.back().ratio >= 0.95 * 4 * pi;
  CommandOutput o;
  o.body = {{"claim", "extremiser-attainment"}, {"levels", rows}, {"target", 4 * pi}, {"increasing", increasing}};
  o.pass = increasing && reaches;
  o.lines.push_back("final ratio / 4 pi = " + format_real(seq.back().ratio / (4 * pi)) +
                    (increasing ? ", increasing" : ", not increasing"));
  o.tables.emplace_back("", std::move(t));
  return o;
}

CommandOutput strichartz(const Config& c) {
  const int d = dimension(c);
  const Rational q = c.rational("q"), r = c.rational("r");
  const bool radial = c.flag("radial");
  const auto levels = c.integers_or("levels", d == 2 ? std::vector<int>{64, 128} : std::vector<int>{32, 64});
  const double len = c.real_or("grid.len", 16 * pi);
  const auto seed = static_cast<std::uint64_t>(c.integer("seed"));
  Table t({"n", "ratio"});
  std::vector<double> ratios;
  std::string flag;
  bool admissible = true;
  for (int n : levels) {
    const SpatialGrid sg{d, n, len};
    SpatialField h = radial ? SpatialField(sg, Domain::frequency) : random_annulus_data(sg, seed);
    if (radial) {
      for (std::size_t i = 0; i < sg.size(); ++i) h.samples()[i] = bump(sg.freq_norm(i));
    }
    const auto p = strichartz_probe(h, q, r, c.real("t_span"), static_cast<int>(c.integer("steps")), radial);
    ratios.push_back(p.ratio);
    flag = p.flag;
    admissible = p.admissible;
    t.add({std::to_string(n), format_real(p.ratio)});
  }
  bool stable = std::isfinite(ratios.front());
  for (std::size_t i = 1; i < ratios.size(); ++i) stable = stable && rel(ratios[i], ratios[i - 1]) < 0.1;
  CommandOutput o;
  o.body = {{"claim", radial ? "strichartz-radial" : "strichartz"}, {"d", d}, {"q", q.str()}, {"r", r.str()},
            {"seed", seed}, {"ratios", ratios}, {"admissible", admissible}, {"flag", flag}, {"stable", stable}};
  o.pass = stable;
  o.lines.push_back("ratio at finest level " + format_real(ratios.back()) + (stable ? ", stable" : ", unstable") +
                    (flag.empty() ? "" : " [" + flag + "]"));
  o.tables.emplace_back("", std::move(t));
  return o;
}

CommandOutput selftest(const Config& c, std::ostream* progress) {
  auto ids = c.integers("criteria");
  if (ids.empty()) ids = criterion_ids();
  CommandOutput o;
  json all = json::array();
  Table t({"id", "title", "pass", "seconds", "budget"});
  bool ok = true;
  for (int id : ids) {
    require(id >= 1 && id <= static_cast<int>(criterion_ids().size()), "unknown criterion " + std::to_string(id));
    const auto r = run_criterion(id);
    ok = ok && r.pass();
    if (progress) *progress << summary_line(r) << std::endl;
    else o.lines.push_back(summary_line(r));
    all.push_back(to_json(r));
    t.add({std::to_string(id), r.title, yes_no(r.pass()), format_real(r.seconds), format_real(r.budget)});
  }
  o.body = {{"claim", "acceptance"}, {"criteria", all}};
  o.pass = ok;
  o.tables.emplace_back("", std::move(t));
  return o;
}

}  // namespace

CommandOutput run_command(const ExperimentConfig& c, std::ostream* progress) {
  const std::string& cmd = c.text("command");
  const std::filesystem::path dir = c.text("output_dir");
  CommandOutput o;
  if (cmd == "thresholds") o = thresholds(c);
  else if (cmd == "constants") o = constants(c);
  else if (cmd == "radon") o = radon(c);
  else if (cmd == "average") o = average(c, dir);
  else if (cmd == "duality-check") o = duality_check(c);
  else if (cmd == "knapp-scan")
    o = scan_output(knapp_scan(dimension(c), c.rational("q"), c.rational("r"), c.rational("alpha"), c.reals("deltas")));
  else if (cmd == "dyadic-scan")
    o = scan_output(dyadic_scan(dimension(c), c.rational("q"), c.rational("r"), c.integers("ks")));
  else if (cmd == "rho-scan")
    o = scan_output(rho_dyadic_scan(dimension(c), c.text("data") == "generic" ? RhoData::generic : RhoData::radial_x,
                                    c.integers("ks")));
  else if (cmd == "funk-hecke") o = funk_hecke(c);
  else if (cmd == "sharp-radial") o = sharp_radial(c);
  else if (cmd == "extremiser") o = extremiser(c);
  else if (cmd == "strichartz-probe") o = strichartz(c);
  else if (cmd == "selftest") o = selftest(c, progress);
  else throw InputError("unknown command '" + cmd + "'");

  json body = {{"command", cmd}};
  for (auto& [k, v] : o.body.items()) body[k] = v;
  body["pass"] = o.pass ? json(*o.pass) : json(nullptr);
  body["config"] = c.to_json();
  body["config"].erase("output_dir");
  o.body = std::move(body);
  return o;
}

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto o = run_command(cfg, &out);
    for (const auto& line : o.lines) out << line << "\n";
    const ReportSink sink{cfg.text("output_dir"), cfg.flag("deterministic")};
    sink.write(cfg.text("command"), o.body, o.tables);
    out << "report: " << (sink.dir / (cfg.text("command") + ".json")).string() << "\n";
    if (o.pass && !*o.pass) {
      err << "check failed\n";
      return 2;
    }
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace kinavg
