#include "kinavg/grid.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <numbers>

#include "kinavg/errors.hpp"
#include "kinavg/symbols.hpp"

namespace kinavg {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<int> spacetime_dims(const GridSpec& g) {
  std::vector<int> dims = g.space.dims();
  dims.push_back(g.n_t);
  return dims;
}

void scale(std::span<cplx> data, double s) {
  for (auto& v : data) v *= s;
}

void expect(Domain have, Domain want, const char* op) {
  if (have != want) {
    throw InputError(std::string(op) + " expects a " + to_string(want) + " field, got " + to_string(have));
  }
}

}  // namespace

std::string to_string(Domain d) {
  switch (d) {
    case Domain::physical: return "physical";
    case Domain::frequency: return "frequency";
    case Domain::mixed: return "mixed";
  }
  return "physical";
}

void SpatialGrid::validate() const {
  require(d == 2 || d == 3, "grids support d in {2, 3}");
  require(n >= 8 && power_of_two(n), "points per axis must be a power of two >= 8");
  require(len > 0.0 && std::isfinite(len), "period must be positive");
}

double SpatialGrid::dxi() const { return two_pi / len; }
double SpatialGrid::cell() const { return std::pow(dx(), d); }
double SpatialGrid::freq_cell() const { return std::pow(dxi(), d); }

std::size_t SpatialGrid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

std::array<int, 3> SpatialGrid::unravel(std::size_t idx) const {
  std::array<int, 3> out{0, 0, 0};
  for (int a = d - 1; a >= 0; --a) {
    out[a] = static_cast<int>(idx % static_cast<std::size_t>(n));
    idx /= static_cast<std::size_t>(n);
  }
  return out;
}

std::array<double, 3> SpatialGrid::point(std::size_t idx) const {
  const auto m = unravel(idx);
  std::array<double, 3> p{0, 0, 0};
  for (int a = 0; a < d; ++a) p[a] = coord(m[a]);
  return p;
}

std::array<double, 3> SpatialGrid::freq_point(std::size_t idx) const {
  const auto m = unravel(idx);
  std::array<double, 3> p{0, 0, 0};
  for (int a = 0; a < d; ++a) p[a] = freq(m[a]);
  return p;
}

double SpatialGrid::freq_norm(std::size_t idx) const {
  const auto p = freq_point(idx);
  return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}

void GridSpec::validate() const {
  space.validate();
  require(n_t >= 8 && power_of_two(n_t), "time points must be a power of two >= 8");
  require(len_t > 0.0 && std::isfinite(len_t), "time period must be positive");
}

double GridSpec::dtau() const { return two_pi / len_t; }

SpaceTimeField::SpaceTimeField(GridSpec grid, Domain domain)
    : grid_(grid), domain_(domain), samples_(grid.size()) {
  grid_.validate();
}

SpaceTimeField::SpaceTimeField(GridSpec grid, Domain domain, std::vector<cplx> samples)
    : grid_(grid), domain_(domain), samples_(std::move(samples)) {
  grid_.validate();
  require(samples_.size() == grid_.size(), "sample count does not match grid");
}

SpatialField::SpatialField(SpatialGrid grid, Domain domain) : grid_(grid), domain_(domain), samples_(grid.size()) {
  grid_.validate();
  require(domain != Domain::mixed, "spatial fields are physical or frequency");
}

SpatialField::SpatialField(SpatialGrid grid, Domain domain, std::vector<cplx> samples)
    : grid_(grid), domain_(domain), samples_(std::move(samples)) {
  grid_.validate();
  require(domain != Domain::mixed, "spatial fields are physical or frequency");
  require(samples_.size() == grid_.size(), "sample count does not match grid");
}

SpaceTimeField forward_transform(const SpaceTimeField& f) {
  expect(f.domain(), Domain::physical, "forward_transform");
  const GridSpec& g = f.grid();
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  dft_inplace(data, spacetime_dims(g), -1);
  scale(data, g.space.cell() * g.dt());
  return SpaceTimeField(g, Domain::frequency, std::move(data));
}

SpaceTimeField inverse_transform(const SpaceTimeField& f) {
  expect(f.domain(), Domain::frequency, "inverse_transform");
  const GridSpec& g = f.grid();
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  dft_inplace(data, spacetime_dims(g), +1);
  scale(data, g.space.freq_cell() * g.dtau() / std::pow(two_pi, g.d() + 1));
  return SpaceTimeField(g, Domain::physical, std::move(data));
}

SpaceTimeField spatial_transform(const SpaceTimeField& f) {
  expect(f.domain(), Domain::physical, "spatial_transform");
  const GridSpec& g = f.grid();
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  dft_inplace(data, g.space.dims(), -1, g.n_t);
  scale(data, g.space.cell());
  return SpaceTimeField(g, Domain::mixed, std::move(data));
}

SpaceTimeField inverse_spatial_transform(const SpaceTimeField& f) {
  expect(f.domain(), Domain::mixed, "inverse_spatial_transform");
  const GridSpec& g = f.grid();
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  dft_inplace(data, g.space.dims(), +1, g.n_t);
  scale(data, g.space.freq_cell() / std::pow(two_pi, g.d()));
  return SpaceTimeField(g, Domain::physical, std::move(data));
}

SpaceTimeField temporal_transform(const SpaceTimeField& f) {
  expect(f.domain(), Domain::mixed, "temporal_transform");
  const GridSpec& g = f.grid();
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  const std::size_t rows = g.space.size();
  for (std::size_t s = 0; s < rows; ++s) {
    dft_inplace(std::span<cplx>(data).subspan(s * g.n_t, g.n_t), {g.n_t}, -1);
  }
  scale(data, g.dt());
  return SpaceTimeField(g, Domain::frequency, std::move(data));
}

SpatialField forward_transform(const SpatialField& f) {
  expect(f.domain(), Domain::physical, "forward_transform");
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  dft_inplace(data, f.grid().dims(), -1);
  scale(data, f.grid().cell());
  return SpatialField(f.grid(), Domain::frequency, std::move(data));
}

SpatialField inverse_transform(const SpatialField& f) {
  expect(f.domain(), Domain::frequency, "inverse_transform");
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  dft_inplace(data, f.grid().dims(), +1);
  scale(data, f.grid().freq_cell() / std::pow(two_pi, f.grid().d));
  return SpatialField(f.grid(), Domain::physical, std::move(data));
}

cplx time_fourier(std::span<const cplx> row, const GridSpec& grid, double tau) {
  // The recurrence e^{-i t tau} = e^{-i dt tau}^j accumulates rounding; at
  // a few thousand steps that is still far below 1e-12.
  const int n = grid.n_t;
  const double dt = grid.dt();
  const cplx step = std::polar(1.0, -dt * tau);
  cplx w = 1.0;
  cplx sum = 0.0;
  for (int j = 0; j < n / 2; ++j) {
    sum += row[j] * w;
    w *= step;
  }
  w = std::polar(1.0, dt * tau * (n / 2));
  for (int j = n / 2; j < n; ++j) {
    sum += row[j] * w;
    w *= step;
  }
  return dt * sum;
}

TimeSpectrum::TimeSpectrum(std::span<const cplx> row, const GridSpec& grid, int oversample) {
  require(oversample >= 4, "oversampling factor must be at least 4");
  require(row.size() == static_cast<std::size_t>(grid.n_t), "row length must equal n_t");
  const int n = grid.n_t;
  const std::size_t size = static_cast<std::size_t>(n) * oversample;
  table_.assign(size, 0.0);
  for (int j = 0; j < n; ++j) table_[j < n / 2 ? j : size - (n - j)] = row[j];
  dft_inplace(table_, {static_cast<int>(size)}, -1);
  for (auto& v : table_) v *= grid.dt();
  h_ = grid.dtau() / oversample;
}

cplx TimeSpectrum::operator()(double tau) const {
  constexpr int q = 10;
  // binomial barycentric weights (-1)^i C(q-1, i) for equispaced nodes
  static constexpr std::array<double, q> bary{1, -9, 36, -84, 126, -126, 84, -36, 9, -1};
  const long size = static_cast<long>(table_.size());
  const double x = tau / h_;
  const long k0 = static_cast<long>(std::floor(x)) - q / 2 + 1;
  cplx num = 0.0;
  double den = 0.0;
  for (int i = 0; i < q; ++i) {
    const double dx = x - static_cast<double>(k0 + i);
    const long k = ((k0 + i) % size + size) % size;
    if (dx == 0.0) return table_[static_cast<std::size_t>(k)];
    const double w = bary[i] / dx;
    num += w * table_[static_cast<std::size_t>(k)];
    den += w;
  }
  return num / den;
}

double mixed_norm(const SpaceTimeField& u, double q, double r) {
  expect(u.domain(), Domain::physical, "mixed_norm");
  require(q >= 2.0 && r >= 2.0 && std::isfinite(q) && std::isfinite(r), "mixed norm exponents must lie in [2, inf)");
  const GridSpec& g = u.grid();
  const std::size_t ns = g.space.size();
  const double cell = g.space.cell();
  std::vector<double> inner(static_cast<std::size_t>(g.n_t), 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    for (int t = 0; t < g.n_t; ++t) inner[t] += std::pow(std::abs(u.at(s, t)), r);
  }
  double total = 0.0;
  for (int t = 0; t < g.n_t; ++t) total += g.dt() * std::pow(cell * inner[t], q / r);
  return std::pow(total, 1.0 / q);
}

double lebesgue_norm(const SpatialField& u, double r) {
  expect(u.domain(), Domain::physical, "lebesgue_norm");
  require(r >= 1.0 && std::isfinite(r), "Lebesgue exponent must be finite and >= 1");
  double s = 0.0;
  for (const auto& v : u.samples()) s += std::pow(std::abs(v), r);
  return std::pow(u.grid().cell() * s, 1.0 / r);
}

double l2_norm_squared(const SpaceTimeField& f) {
  const GridSpec& g = f.grid();
  double cell = 0.0;
  switch (f.domain()) {
    case Domain::physical: cell = g.space.cell() * g.dt(); break;
    case Domain::frequency: cell = g.space.freq_cell() * g.dtau(); break;
    case Domain::mixed: cell = g.space.freq_cell() * g.dt(); break;
  }
  double s = 0.0;
  for (const auto& v : f.samples()) s += std::norm(v);
  return cell * s;
}

double l2_norm_squared(const SpatialField& f) {
  const double cell = f.domain() == Domain::physical ? f.grid().cell() : f.grid().freq_cell();
  double s = 0.0;
  for (const auto& v : f.samples()) s += std::norm(v);
  return cell * s;
}

double raw_bump(double s) {
  if (!(s > 0.5 && s < 2.0)) return 0.0;
  const double l = std::log2(s);
  return std::exp(-1.0 / (1.0 - l * l));
}

double bump(double s) {
  if (!(s > 0.5 && s < 2.0)) return 0.0;
  // only the scales j = -1, 0, 1 can overlap (1/2, 2)
  const double total = raw_bump(2.0 * s) + raw_bump(s) + raw_bump(0.5 * s);
  return raw_bump(s) / total;
}

std::pair<int, int> resolvable_scales(const SpatialGrid& g) {
  const double nyquist = 0.5 * g.n * g.dxi();
  int lo = 0;
  while (std::ldexp(1.0, lo - 1) >= g.dxi()) --lo;
  while (std::ldexp(1.0, lo - 1) < g.dxi()) ++lo;
  int hi = lo;
  while (std::ldexp(1.0, hi + 2) <= nyquist) ++hi;
  return {lo, hi};
}

namespace {

void check_scale(const SpatialGrid& g, int j) {
  const auto [lo, hi] = resolvable_scales(g);
  require(j >= lo && j <= hi, "dyadic scale " + std::to_string(j) + " outside resolvable range [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace

SpaceTimeField lp_project(const SpaceTimeField& f, int j) {
  check_scale(f.grid().space, j);
  const bool was_physical = f.domain() == Domain::physical;
  SpaceTimeField m = f.domain() == Domain::mixed ? f
                     : was_physical              ? spatial_transform(f)
                                                 : f;
  const GridSpec& g = f.grid();
  const double s = std::ldexp(1.0, -j);
  for (std::size_t idx = 0; idx < g.space.size(); ++idx) {
    const double w = bump(s * g.space.freq_norm(idx));
    for (int t = 0; t < g.n_t; ++t) m.at(idx, t) *= w;
  }
  return was_physical ? inverse_spatial_transform(m) : m;
}

SpatialField lp_project(const SpatialField& f, int j) {
  check_scale(f.grid(), j);
  const bool was_physical = f.domain() == Domain::physical;
  SpatialField m = was_physical ? forward_transform(f) : f;
  const double s = std::ldexp(1.0, -j);
  auto data = m.samples();
  for (std::size_t idx = 0; idx < f.grid().size(); ++idx) data[idx] *= bump(s * f.grid().freq_norm(idx));
  return was_physical ? inverse_transform(m) : m;
}

std::optional<cplx> lattice_symbol_value(const SymbolSpec& m, double xn, double tau, double collar) {
  const bool axis_clamp = std::any_of(m.singularities.begin(), m.singularities.end(), [](const Singularity& s) {
    return s.locus == Locus::spatial_origin && s.singular();
  });
  if ((m.cone_singular() && std::abs(xn - std::abs(tau)) < collar) ||
      (m.origin_singular() && xn == 0.0 && tau == 0.0) || (axis_clamp && xn == 0.0)) {
    return std::nullopt;
  }
  const cplx v = m.at(xn, tau);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NumericalError("symbol " + m.name + " is not finite on the lattice at |xi| = " + std::to_string(xn) +
                         ", tau = " + std::to_string(tau));
  }
  return v;
}

SymbolApplication apply_symbol(const SpaceTimeField& f, const SymbolSpec& m) {
  const bool was_physical = f.domain() == Domain::physical;
  SpaceTimeField h = f.domain() == Domain::frequency ? f
                     : was_physical                  ? forward_transform(f)
                                                     : temporal_transform(f);
  const GridSpec& g = f.grid();
  std::size_t clamped = 0;
  for (std::size_t idx = 0; idx < g.space.size(); ++idx) {
    const double xn = g.space.freq_norm(idx);
    for (int t = 0; t < g.n_t; ++t) {
      const auto v = lattice_symbol_value(m, xn, g.tau(t), g.dtau());
      if (!v) {
        h.at(idx, t) = 0.0;
        ++clamped;
      } else {
        h.at(idx, t) *= *v;
      }
    }
  }
  if (f.domain() == Domain::frequency) return {std::move(h), clamped};
  return {inverse_transform(h), clamped};
}

}  // namespace kinavg
