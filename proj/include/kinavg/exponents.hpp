#pragma once

#include <string>

#include "kinavg/rational.hpp"

namespace kinavg {

// Result of a max/min of affine branches. Branch numbering follows the order
// in which the branches are listed in each function's comment; on a tie the
// first branch is reported and `boundary` is set.
struct Piecewise {
  Rational value;
  int branch = 0;
  bool boundary = false;
};

enum class Verdict { holds, fails, open };

std::string to_string(Verdict v);

struct ExponentTuple {
  int d = 2;
  Rational q{2};
  Rational r{2};
  Rational p{2};
  Rational s{0};
  Rational kappa{-1};
  Rational beta_plus{0};
  Rational beta_minus{0};
  Rational alpha{0};

  void validate() const;
  // beta_plus + beta_minus == s + d/r + 1/q - d/p, exactly.
  bool scaling_consistent() const;
};

// Rejects d < 2 and Lebesgue exponents below 2.
void check_dimension(int d);
void check_lebesgue(const Rational& e, const char* name);
void check_kappa(const Rational& kappa);

// s + d/r + 1/q - d/p
Rational scaling_total(int d, const Rational& q, const Rational& r, const Rational& p,
                       const Rational& s);

// 1/q <= (d-1)/2 (1/2 - 1/r)
bool wave_admissible(int d, const Rational& q, const Rational& r);
// 1/q < (d-1)(1/2 - 1/r): range of the radial Strichartz estimate
bool radial_admissible(int d, const Rational& q, const Rational& r);

// max{ 1/q + (d-1)/(2r) - (d+1)/4 , -1/2 }
Piecewise alpha_star(int d, const Rational& q, const Rational& r);
// min{ (d+1)/(2r) - 1/2 , d/r + 1/q - (d+1)/4 }
Piecewise beta_plus_star(int d, const Rational& q, const Rational& r);
// max{ 1/q + (d-1)/(2r) - (d+kappa)/2 , -(d+1+2 kappa)/4 }
Piecewise beta_minus_star(int d, const Rational& q, const Rational& r, const Rational& kappa);
// max{ 1/q + (d-1)/r - d/2 , -1/2 }
Piecewise alpha_double_star(int d, const Rational& q, const Rational& r);
// Lower beta_- threshold for data radial in x:
// max{ 1/q + (d-1)/(2r) - 3(d-1)/4 , (1-d)/2 }
Piecewise radial_x_beta_minus_star(int d, const Rational& q, const Rational& r);
// Lower beta_- threshold for data radial in x and v:
// max{ 1/q + (d-1)/r - (d-1) , (1-d)/2 }
Piecewise radial_xv_beta_minus_star(int d, const Rational& q, const Rational& r);

// Order of the cone multiplier equivalent to the smoothing estimate:
// beta_- + kappa/2 + (d-1)/4.
Rational equiv_alpha(int d, const Rational& beta_minus, const Rational& kappa);

// Decoupling exponent on the triangle 0 <= 1/q <= 1/p <= 1/2. Branch 0 is the
// region 1/q >= (d-1)/(2(d+1)), branch 1 the complement.
Piecewise gamma_decoupling(int d, const Rational& p, const Rational& q);
// gamma(p,q) + (3-d)/(2p)
Rational besov_beta_minus_star(int d, const Rational& p, const Rational& q);

// Classification of the L^2 -> L^q_t L^r_x smoothing estimate with exponents
// tied by scaling. Exactly at the threshold the estimate fails in the
// wave-admissible range and is reported as open elsewhere.
Verdict smoothing_verdict(int d, const Rational& q, const Rational& r, const Rational& beta_plus);
// Same classification for the cone multiplier of order alpha.
Verdict cone_verdict(int d, const Rational& q, const Rational& r, const Rational& alpha);

}  // namespace kinavg
