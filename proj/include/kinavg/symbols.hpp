#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kinavg/fft.hpp"
#include "kinavg/grid.hpp"

namespace kinavg {

enum class Region {
  all,       // no restriction
  cone,      // |tau| <= |xi|
  annulus,   // |xi| in [1/2, 2]
  shell,     // tau > 0, |xi| in [1/2, 2], |xi| - tau in [2^{-k-1}, 2^{-k+1}]
  forward,   // tau >= 0, |xi| in [1/2, 2], |xi| - tau >= 2^{-k0}
};

enum class Locus {
  cone,            // |tau| = |xi|, exponent of (|xi| - |tau|)
  origin,          // xi = 0, tau = 0, exponent of (|xi| + |tau|)
  spatial_origin,  // xi = 0, exponent of |xi|
};

struct Singularity {
  Locus locus;
  double exponent;
  bool singular() const { return exponent < 0.0; }
};

struct SupportTag {
  Region region = Region::all;
  int k = 0;
};

// A Fourier multiplier m(xi, tau). Every symbol in the library is radial in
// xi, so the evaluator receives |xi|.
struct SymbolSpec {
  std::string name;
  std::function<cplx(double, double)> profile;
  std::vector<SupportTag> support;
  std::vector<Singularity> singularities;
  int term_count = 0;

  cplx operator()(std::span<const double> xi, double tau) const;
  cplx at(double xi_norm, double tau) const { return profile(xi_norm, tau); }
  bool in_support(double xi_norm, double tau) const;
  // Sum of the exponents recorded at the cone; the symbol behaves like
  // (|xi| - |tau|)^{e} there.
  double cone_exponent() const;
  bool cone_singular() const;
  bool origin_singular() const;
};

SymbolSpec operator*(const SymbolSpec& a, const SymbolSpec& b);

bool region_contains(const SupportTag& tag, double xi_norm, double tau);

SymbolSpec one_symbol();
// bump(|xi|)
SymbolSpec annulus_symbol();
// (|xi| + |tau|)^{beta}
SymbolSpec d_plus_symbol(double beta);
// ||xi| - |tau||^{beta}
SymbolSpec d_minus_symbol(double beta);
// (1 - tau^2/|xi|^2)_+^alpha bump(|xi|), alpha > -1
SymbolSpec cone_symbol(double alpha);

// psi_alpha(s) = s^alpha bump(s)
double psi_alpha(double alpha, double s);

// 1_{tau > 0} bump(|xi|) psi_alpha(2^k (|xi| - tau)), k >= k0.
constexpr int default_k0 = 3;
SymbolSpec dyadic_cone_symbol(int k, double alpha = 0.0, int k0 = default_k0);

// Partial sums of sum_k 2^{-k alpha} psi_alpha(2^k s) for k = k_lo..k_hi.
std::vector<double> mono_decompose(double alpha, double s, int k_lo, int k_hi);

// sum_{k = -3}^{k0-1} 2^{-k bm} bump(|xi|) psi_bm(2^k (|xi| - tau)) on tau >= 0.
SymbolSpec m0_symbol(double beta_minus, int k0 = default_k0);

// Closed-form multiplier of the duality principle for the kappa weight.
SymbolSpec m_kappa_symbol(int d, double kappa, double beta_plus, double beta_minus);

// Parses products of factors joined by '*':
//   one | phi | dplus:B | dminus:B | cone:A | ck:K[,a=A] | m0:bm=B[,k0=K]
//   | mkappa:d=D,k=K,bp=B,bm=B
SymbolSpec parse_symbol(const std::string& text);

// U(t)h = int e^{i(x.xi + t|xi|)} h^(xi) dxi on the lattice (no (2 pi)^{-d}).
SpatialField half_wave(const SpatialField& h, double t);

}  // namespace kinavg
