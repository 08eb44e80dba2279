#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kinavg/grid.hpp"
#include "kinavg/symbols.hpp"
#include "kinavg/velocity.hpp"

namespace kinavg {

// R w(r) = |S^{d-2}| 1_{[-1,1]}(r) int_{|r|}^1 w(s) s^{d-2} (1 - r^2/s^2)^{(d-3)/2} ds
// for a radial weight w(v) = w_tilde(|v|) on the unit ball.
double radon_radial(int d, const std::function<double(double)>& w_tilde, double r);

// Closed form for w_kappa = (1 - |v|^2)^kappa / Gamma(1 + kappa), kappa in
// [-1, 0]; kappa = -1 is half the surface measure. Zero for |r| >= 1.
double radon_kappa_closed(int d, double kappa, double r);

struct RadonProfile {
  int d = 2;
  double kappa = 0.0;
  double constant = 0.0;  // |S^{d-2}| Gamma((d-1)/2) / (2 Gamma((d+1)/2 + kappa))
  double exponent = 0.0;  // kappa + (d-1)/2
  double closed(double r) const;
  double quadrature(double r) const;  // kappa > -1 only
};

RadonProfile radon_profile(int d, double kappa);

// Radon transform of a discretised measure's continuum weight.
double radon_of_measure(const VelocityMeasure& m, double r);

// m_mu(xi, tau) = m(xi, tau) (R mu(-tau/|xi|) / |xi|)^{1/2}
SymbolSpec build_m_mu(const SymbolSpec& m, const VelocityMeasure& measure);

struct DualityResidual {
  double lhs = 0.0;  // || rho* F^{-1}(m g^) ||^2 over dx dmu
  double rhs = 0.0;  // 2 pi || F^{-1}(m_mu g^) ||^2
  double residual = 0.0;
};

// Both sides of the duality identity for g with spatial spectrum inside the
// annulus 1/2 <= |xi| <= 2. g^(xi, tau) comes from a TimeSpectrum of each
// mixed row. The left side sums over the measure's nodes; the right side
// integrates each cone slice by Gauss–Jacobi in l = -tau/|xi| with the weight
// matched to the cone exponent of m_mu.
DualityResidual duality_residual(const SpaceTimeField& g, const SymbolSpec& m, const VelocityMeasure& measure,
                                 int slice_nodes = 64);

// Resolution ladder for the duality check: n points per axis in space and
// time, period n pi / 8. Sphere rules use 2n nodes (d = 2) or n/4 polar
// nodes (d = 3); kappa-ball rules n/8 radial times n angular.
GridSpec duality_grid(int d, int n);
VelocityMeasure duality_measure(int d, MeasureKind kind, double kappa, int n);

// Seeded random wave packets with spatial spectrum inside the annulus and
// Gaussian time envelopes, defined independently of the lattice and sampled
// on the mixed (xi, t) grid.
SpaceTimeField random_annulus_field(const GridSpec& grid, std::uint64_t seed, int packets = 8);

struct SharpConstantSearch {
  double value = 0.0;       // 4 pi sup M
  double argmax = 0.0;      // golden-section maximiser
  double stationary = 0.0;  // analytic critical point clamped to [0, 1]
  double closed_form = 0.0;
};

// 4 pi sup_{[0,1]} M(l) for the sphere at q = r = 2, beta_+ = 1/2 - beta_-.
SharpConstantSearch sharp_constant_numeric(int d, double beta_minus);

// Fraction of an n-point uniform grid on [0, 1] where M > (1 - rel) sup M.
double near_max_fraction(int d, double beta_minus, int samples, double rel = 1e-6);

// f^(xi, v) = (|xi|^2 - (xi.v)^2)^{1/4} g^(xi, -xi.v) with
// g^(xi, tau) = (|xi|^2 - tau^2)^{-1/4} g0(|xi|), on sphere_measure(2, nodes).
PhaseSpaceData build_extremiser(const SpatialGrid& grid, const std::function<double(double)>& g0, int nodes = 16);

// ||D rho f||^2 / ||f||^2 on GridSpec{f.grid(), n_t, len_t}, streamed one
// spatial frequency at a time. Sphere measures use the tau-cell projection of
// D rho^ (weighted_cell_row), which stays below the continuum norm; kappa-ball
// rows come from rho_hat_row with D at the lattice clamps of apply_symbol.
double l2_smoothing_ratio(const PhaseSpaceData& f, int n_t, double len_t, const SymbolSpec& D,
                          const RhoOptions& opt = {});

struct AttainmentLevel {
  int n = 0;
  double ratio = 0.0;  // ||D rho f||^2 / ||f||^2 with D = D+^{1/4} D-^{1/4}
};

// Extremiser ratio at n_x = n_t = n, len = n pi / 4, for each n.
std::vector<AttainmentLevel> extremiser_sequence(const std::vector<int>& levels,
                                                 const std::function<double(double)>& g0, int nodes = 16);

struct RadialCheck {
  double lhs = 0.0;        // grid value of ||D rho f||^2
  double series = 0.0;     // (2 |S^{d-2}|^2 / (2 pi)^{d-1}) sum I_k ||Y_k||^2
  double ratio = 0.0;      // lhs / series
  double norm_f = 0.0;     // ||f||^2 from the radial profiles
  double c0 = 0.0;         // radial sharp constant
  double series_over_c0 = 0.0;  // series / (c0 ||f||^2), <= 1
  std::vector<double> i_k;
};

RadialCheck sharp_constant_radial_check(int d, double beta_plus, double beta_minus,
                                        const std::vector<RadialModeData>& modes, const GridSpec& grid);

}  // namespace kinavg
