#pragma once

#include <functional>
#include <string>

namespace kinavg {

struct SpecialValue {
  double value = 0.0;
  std::string formula_id;
  std::string branch;
  bool boundary = false;
};

// Surface area of the unit sphere S^n in R^{n+1}; |S^0| = 2.
double sphere_area(int n);

// Legendre polynomial p_{d,k} of dimension d, normalised by p_{d,k}(1) = 1.
// d = 2 gives Chebyshev T_k, d = 3 the classical Legendre polynomials.
double legendre(int d, int k, double t);

// 2^{d-2} pi^{-1/2} Gamma((d-1)/2)
double legendre_bound_constant(int d);
// min{1, C_d k^{(2-d)/2} (1-t^2)^{(2-d)/2}} - |p_{d,k}(t)|
double legendre_bound_margin(int d, int k, double t);

// Lower incomplete beta integral B(x; a, b) = int_0^x s^{a-1} (1-s)^{b-1} ds.
double incomplete_beta(double x, double a, double b);

// (1/2) |S^{d-2}| (1+l)^{(d-1)/2 - 2 bm} (1-l)^{2 bm + (d-3)/2} for l in [0, 1].
double sharp_profile(int d, double beta_minus, double lambda);

// Optimal constant of the L^2 smoothing estimate on the sphere at q = r = 2.
SpecialValue sharp_constant_general(int d, double beta_minus);

// Optimal constant for data radial in x, beta_+ + beta_- = 1/2.
SpecialValue sharp_constant_radial(int d, double beta_plus, double beta_minus);

// int_0^1 p_{d,k}(l)^2 (1+l)^{d-3+2 bp} (1-l)^{d-3+2 bm} dl
double i_k_integral(int d, int k, double beta_plus, double beta_minus);

// zeta_k = |S^{d-2}| int_{-1}^1 F(l) p_{d,k}(l) (1-l^2)^{(d-3)/2} dl
double funk_hecke_coefficient(int d, int k, const std::function<double(double)>& F);

// Real orthonormal spherical harmonic on S^2, degree l, order -l <= m <= l,
// at polar angle theta and azimuth phi.
double real_spherical_harmonic(int l, int m, double theta, double phi);

}  // namespace kinavg
