#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinavg/fft.hpp"

namespace kinavg {

// physical: samples in (x, t); frequency: samples in (xi, tau);
// mixed: spatial frequency with physical time, (xi, t).
enum class Domain { physical = 0, frequency = 1, mixed = 2 };

std::string to_string(Domain d);

// Wrapped lattice coordinate: index i of n maps to (i < n/2 ? i : i - n) * step.
inline double wrapped(int i, int n, double step) { return (i < n / 2 ? i : i - n) * step; }

// Periodic box [-len/2, len/2)^d sampled with n points per axis.
struct SpatialGrid {
  int d = 2;
  int n = 64;
  double len = 0.0;

  void validate() const;
  double dx() const { return len / n; }
  double dxi() const;
  double cell() const;       // dx^d
  double freq_cell() const;  // dxi^d
  std::size_t size() const;
  double coord(int i) const { return wrapped(i, n, dx()); }
  double freq(int i) const { return wrapped(i, n, dxi()); }
  // Multi-index of a linear spatial index, and the lattice point it names.
  std::array<int, 3> unravel(std::size_t idx) const;
  std::array<double, 3> point(std::size_t idx) const;
  std::array<double, 3> freq_point(std::size_t idx) const;
  double freq_norm(std::size_t idx) const;
  std::vector<int> dims() const { return std::vector<int>(static_cast<std::size_t>(d), n); }
  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;
};

struct GridSpec {
  SpatialGrid space;
  int n_t = 64;
  double len_t = 0.0;

  static GridSpec cube(int d, int n, double len) { return GridSpec{SpatialGrid{d, n, len}, n, len}; }

  void validate() const;
  int d() const { return space.d; }
  int n_x() const { return space.n; }
  double len_x() const { return space.len; }
  double dt() const { return len_t / n_t; }
  double dtau() const;
  double time(int i) const { return wrapped(i, n_t, dt()); }
  double tau(int i) const { return wrapped(i, n_t, dtau()); }
  std::size_t size() const { return space.size() * static_cast<std::size_t>(n_t); }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Complex samples on a space-time grid, stored [x_1]...[x_d][t] row-major.
class SpaceTimeField {
 public:
  SpaceTimeField(GridSpec grid, Domain domain);
  SpaceTimeField(GridSpec grid, Domain domain, std::vector<cplx> samples);

  const GridSpec& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  std::span<cplx> samples() { return samples_; }
  std::span<const cplx> samples() const { return samples_; }
  cplx& at(std::size_t s, int t) { return samples_[s * grid_.n_t + t]; }
  const cplx& at(std::size_t s, int t) const { return samples_[s * grid_.n_t + t]; }

 private:
  GridSpec grid_;
  Domain domain_;
  std::vector<cplx> samples_;
};

class SpatialField {
 public:
  SpatialField(SpatialGrid grid, Domain domain);
  SpatialField(SpatialGrid grid, Domain domain, std::vector<cplx> samples);

  const SpatialGrid& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  std::span<cplx> samples() { return samples_; }
  std::span<const cplx> samples() const { return samples_; }

 private:
  SpatialGrid grid_;
  Domain domain_;
  std::vector<cplx> samples_;
};

// Transforms under the continuum convention g^(xi) = int g(x) e^{-i x.xi} dx:
// forward multiplies the DFT by the cell volume, inverse by (2 pi)^{-n} times
// the frequency cell volume.
SpaceTimeField forward_transform(const SpaceTimeField& f);
SpaceTimeField inverse_transform(const SpaceTimeField& f);
// physical <-> mixed: transform in x only.
SpaceTimeField spatial_transform(const SpaceTimeField& f);
SpaceTimeField inverse_spatial_transform(const SpaceTimeField& f);
// mixed <-> frequency: transform in t only.
SpaceTimeField temporal_transform(const SpaceTimeField& f);
SpatialField forward_transform(const SpatialField& f);
SpatialField inverse_transform(const SpatialField& f);

// Continuum transform in t of one row of mixed samples, evaluated at an
// arbitrary tau: dt sum_t g(t) e^{-i t tau}.
cplx time_fourier(std::span<const cplx> row, const GridSpec& grid, double tau);

// The same transform tabulated by a zero-padded FFT on a tau lattice
// `oversample` times finer than dtau, then read back with 10-point Lagrange
// interpolation. For many evaluations of one row.
class TimeSpectrum {
 public:
  TimeSpectrum(std::span<const cplx> row, const GridSpec& grid, int oversample = 16);
  cplx operator()(double tau) const;

 private:
  std::vector<cplx> table_;
  double h_ = 0.0;
};

// (sum_t dt (sum_x dx^d |u|^r)^{q/r})^{1/q}
double mixed_norm(const SpaceTimeField& u, double q, double r);
double lebesgue_norm(const SpatialField& u, double r);
// sum |g|^2 times the cell volume of the field's domain
double l2_norm_squared(const SpaceTimeField& f);
double l2_norm_squared(const SpatialField& f);

// Smooth bump exp(-1/(1 - (log2 s)^2)) on (1/2, 2), zero elsewhere.
double raw_bump(double s);
// raw_bump divided by its dyadic sum: sum_j bump(2^{-j} s) = 1 for s > 0.
double bump(double s);

// Littlewood–Paley piece bump(2^{-j}|xi|) in the spatial frequency. Throws
// when the annulus [2^{j-1}, 2^{j+1}] is not resolved by the lattice.
SpaceTimeField lp_project(const SpaceTimeField& f, int j);
SpatialField lp_project(const SpatialField& f, int j);
// Range of j whose annuli are resolved: one cell at the inner radius,
// Nyquist at the outer radius.
std::pair<int, int> resolvable_scales(const SpatialGrid& g);

struct SymbolSpec;

struct SymbolApplication {
  SpaceTimeField field;
  std::size_t collar_points = 0;  // lattice points zeroed near singular loci
};

// F^{-1}(m F f). Points within one tau cell of a cone singularity with
// negative exponent, and lattice origins of negative-power origin loci, are
// set to zero and counted. Any other non-finite value throws.
SymbolApplication apply_symbol(const SpaceTimeField& f, const SymbolSpec& m);
// The multiplier apply_symbol uses at one lattice point; empty where it clamps.
std::optional<cplx> lattice_symbol_value(const SymbolSpec& m, double xi_norm, double tau, double collar);

}  // namespace kinavg
