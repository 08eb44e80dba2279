#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "kinavg/grid.hpp"

namespace kinavg {

enum class MeasureKind { sphere, kappa_ball };

std::string to_string(MeasureKind k);

using Vec3 = std::array<double, 3>;

// Discrete velocity measure. Sphere rules are exact quadratures for spherical
// harmonics up to `degree` times data of the same degree; kappa-ball rules
// carry the weight (1 - |v|^2)^kappa / Gamma(1 + kappa).
struct VelocityMeasure {
  MeasureKind kind = MeasureKind::sphere;
  int d = 2;
  double kappa = -1.0;
  double scale = 1.0;  // sphere only: multiple of surface measure
  int degree = 0;      // sphere only: highest harmonic degree resolved
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double total_mass() const;
};

// d = 2: n equally spaced angles. d = 3: n Gauss–Legendre nodes in cos(theta)
// times 2n azimuths.
VelocityMeasure sphere_measure(int d, int n);
// Unit-ball weight (1 - |v|^2)^kappa / Gamma(1 + kappa), kappa in (-1, 0];
// kappa = -1 is the limit, half the surface measure. Radial nodes are
// Gauss–Jacobi in |v|^2, the angular part is sphere_measure(d, n_angular).
VelocityMeasure kappa_ball_measure(int d, double kappa, int n_radial, int n_angular);

// f(x, v) on a spatial lattice times the nodes of a velocity measure. Both the
// physical samples and the per-node spatial transforms are held.
class PhaseSpaceData {
 public:
  // samples laid out [node][x]
  PhaseSpaceData(SpatialGrid grid, VelocityMeasure measure, std::vector<cplx> physical);
  static PhaseSpaceData from_frequency(SpatialGrid grid, VelocityMeasure measure, std::vector<cplx> hat);

  const SpatialGrid& grid() const { return grid_; }
  const VelocityMeasure& measure() const { return measure_; }
  std::size_t node_count() const { return measure_.size(); }
  std::span<const cplx> physical(std::size_t node) const;
  std::span<const cplx> frequency(std::size_t node) const;
  // sum_v w_v ||f(., v)||^2
  double l2_norm_squared() const;

 private:
  PhaseSpaceData(SpatialGrid grid, VelocityMeasure measure, std::vector<cplx> physical, std::vector<cplx> hat);
  SpatialGrid grid_;
  VelocityMeasure measure_;
  std::vector<cplx> physical_;
  std::vector<cplx> hat_;
};

// Builds f from f^(xi, v) = F(xi, v) evaluated at every lattice xi and node.
PhaseSpaceData phase_space_from_symbol(const SpatialGrid& grid, const VelocityMeasure& measure,
                                       const std::function<cplx(const Vec3& xi, const Vec3& v)>& F);

enum class Sampling {
  cell_average,  // mean of rho^ over each tau cell, clipped to the cone
  point,         // rho^ at the lattice tau; zero on and outside the cone
};

struct RhoOptions {
  Sampling sampling = Sampling::cell_average;
  double slab_cells = 1.0;  // kappa-ball slab half-width in tau cells
};

// rho^f(xi, tau) on the frequency lattice of GridSpec{f.grid(), n_t, len_t}.
SpaceTimeField average_rho(const PhaseSpaceData& f, int n_t, double len_t, const RhoOptions& opt = {});
// One tau row of the same, for streaming over xi.
std::vector<cplx> rho_hat_row(const PhaseSpaceData& f, std::size_t xi_index, const GridSpec& grid,
                              const RhoOptions& opt = {});

// rho^f(xi, tau) at any tau, sphere measures only; zero on and outside the cone.
cplx rho_hat_at(const PhaseSpaceData& f, std::size_t xi_index, double tau);
// The same at many tau, projecting onto zonal harmonics once.
std::vector<cplx> rho_hat_points(const PhaseSpaceData& f, std::size_t xi_index, std::span<const double> taus);

// (1/dtau) int over each tau cell of weight(tau) rho^(xi, tau), sphere measures
// only. Every cell meeting the open cone is filled, so the row is the L^2
// projection of weight * rho^ onto cell indicators. Each cell uses an n-point
// Gauss–Legendre rule in the slice angle (d = 2) or in l = -tau/|xi| (d = 3).
std::vector<cplx> weighted_cell_row(const PhaseSpaceData& f, std::size_t xi_index, const GridSpec& grid,
                                    const std::function<cplx(double tau)>& weight, int nodes = 8);

// sum_v w_v f(x - t v, v) with trigonometric interpolation in x.
cplx average_rho_direct(const PhaseSpaceData& f, const Vec3& x, double t);

struct DualResult {
  PhaseSpaceData data;
  std::size_t out_of_band = 0;  // (xi, v) pairs with |xi.v| beyond the tau Nyquist band, set to 0
};

// rho*g with (rho*g)^(xi, v) = g^(xi, -xi.v), interpolating in tau.
DualResult dual_rho_star(const SpaceTimeField& g, const VelocityMeasure& measure);

// <a, b> = int a conj(b) over space-time, and over space-velocity.
cplx inner_product(const SpaceTimeField& a, const SpaceTimeField& b);
cplx inner_product(const PhaseSpaceData& a, const PhaseSpaceData& b);

// f^(xi, v) value at an arbitrary sphere point, synthesised from the node
// samples through the harmonic expansion.
cplx interpolate_velocity(const PhaseSpaceData& f, std::size_t xi_index, const Vec3& v);

// One term Y_k^r(v) = profile(r) Y(v) of data radial in x. d = 2 uses
// Y = e^{i m theta} with |m| = k; d = 3 the real spherical harmonic (k, m).
class RadialModeData {
 public:
  static constexpr int samples = 128;
  RadialModeData(int d, int k, int m, const std::function<double(double)>& profile);

  int d() const { return d_; }
  int k() const { return k_; }
  int m() const { return m_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }
  // Spline through the geometric samples on [1/2, 2]; zero outside.
  double profile(double r) const;
  cplx harmonic(const Vec3& unit) const;
  // int profile(r)^2 r^{d-1} dr
  double radial_norm_squared() const;

 private:
  int d_, k_, m_;
  std::vector<double> radii_;
  std::vector<double> values_;
  std::function<double(double)> spline_;
};

PhaseSpaceData phase_space_from_modes(const std::vector<RadialModeData>& modes, const SpatialGrid& grid,
                                      const VelocityMeasure& measure);

// Series form of rho^f for data given by radial modes, on the frequency lattice.
SpaceTimeField funk_hecke_average(const std::vector<RadialModeData>& modes, const GridSpec& grid,
                                  Sampling sampling = Sampling::point);

// p_{d,k}(t) for k = 0..k_max, d in {2, 3}.
std::vector<double> legendre_table(int d, int k_max, double t);

}  // namespace kinavg
