#include "kinavg/exponents.hpp"

namespace kinavg {

namespace {

const Rational half(1, 2);

Piecewise pick_max(const Rational& a, const Rational& b) {
  if (a == b) return {a, 0, true};
  return a > b ? Piecewise{a, 0, false} : Piecewise{b, 1, false};
}

Piecewise pick_min(const Rational& a, const Rational& b) {
  if (a == b) return {a, 0, true};
  return a < b ? Piecewise{a, 0, false} : Piecewise{b, 1, false};
}

Rational inv(const Rational& x) { return Rational(1) / x; }

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::open: return "open";
  }
  return "open";
}

void check_dimension(int d) { require(d >= 2, "dimension must be at least 2"); }

void check_lebesgue(const Rational& e, const char* name) {
  require(e >= Rational(2), std::string(name) + " must lie in [2, inf), got " + e.str());
}

void check_kappa(const Rational& kappa) {
  require(kappa >= Rational(-1) && kappa <= Rational(0), "kappa must lie in [-1, 0], got " + kappa.str());
}

void ExponentTuple::validate() const {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  check_lebesgue(p, "p");
  check_kappa(kappa);
}

bool ExponentTuple::scaling_consistent() const {
  return beta_plus + beta_minus == scaling_total(d, q, r, p, s);
}

Rational scaling_total(int d, const Rational& q, const Rational& r, const Rational& p,
                       const Rational& s) {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  check_lebesgue(p, "p");
  return s + Rational(d) / r + inv(q) - Rational(d) / p;
}

bool wave_admissible(int d, const Rational& q, const Rational& r) {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  return inv(q) <= Rational(d - 1, 2) * (half - inv(r));
}

bool radial_admissible(int d, const Rational& q, const Rational& r) {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  return inv(q) < Rational(d - 1) * (half - inv(r));
}

Piecewise alpha_star(int d, const Rational& q, const Rational& r) {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  return pick_max(inv(q) + Rational(d - 1, 2) / r - Rational(d + 1, 4), -half);
}

Piecewise beta_plus_star(int d, const Rational& q, const Rational& r) {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  return pick_min(Rational(d + 1, 2) / r - half, Rational(d) / r + inv(q) - Rational(d + 1, 4));
}

Piecewise beta_minus_star(int d, const Rational& q, const Rational& r, const Rational& kappa) {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  check_kappa(kappa);
  return pick_max(inv(q) + Rational(d - 1, 2) / r - (Rational(d) + kappa) / Rational(2),
                  -(Rational(d + 1) + Rational(2) * kappa) / Rational(4));
}

Piecewise alpha_double_star(int d, const Rational& q, const Rational& r) {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  return pick_max(inv(q) + Rational(d - 1) / r - Rational(d, 2), -half);
}

Piecewise radial_x_beta_minus_star(int d, const Rational& q, const Rational& r) {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  return pick_max(inv(q) + Rational(d - 1, 2) / r - Rational(3 * (d - 1), 4), Rational(1 - d, 2));
}

Piecewise radial_xv_beta_minus_star(int d, const Rational& q, const Rational& r) {
  check_dimension(d);
  check_lebesgue(q, "q");
  check_lebesgue(r, "r");
  return pick_max(inv(q) + Rational(d - 1) / r - Rational(d - 1), Rational(1 - d, 2));
}

Rational equiv_alpha(int d, const Rational& beta_minus, const Rational& kappa) {
  check_dimension(d);
  check_kappa(kappa);
  return beta_minus + kappa / Rational(2) + Rational(d - 1, 4);
}

Piecewise gamma_decoupling(int d, const Rational& p, const Rational& q) {
  check_dimension(d);
  check_lebesgue(p, "p");
  check_lebesgue(q, "q");
  require(inv(p) >= inv(q), "decoupling exponent needs 1/p >= 1/q");
  const Rational split = Rational(d - 1) / Rational(2 * (d + 1));
  if (inv(q) >= split) {
    return {Rational(d + 1, 2) / q + Rational(d - 1, 4) - Rational(d) / p, 0, inv(q) == split};
  }
  return {Rational(d - 1, 2) - Rational(d) / p, 1, false};
}

Rational besov_beta_minus_star(int d, const Rational& p, const Rational& q) {
  return gamma_decoupling(d, p, q).value + Rational(3 - d, 2) / p;
}

namespace {

Verdict classify(bool strictly_inside, bool on_threshold, bool admissible) {
  if (strictly_inside) return Verdict::holds;
  if (on_threshold) return admissible ? Verdict::fails : Verdict::open;
  return Verdict::fails;
}

}  // namespace

Verdict smoothing_verdict(int d, const Rational& q, const Rational& r, const Rational& beta_plus) {
  const Rational star = beta_plus_star(d, q, r).value;
  return classify(beta_plus < star, beta_plus == star, wave_admissible(d, q, r));
}

Verdict cone_verdict(int d, const Rational& q, const Rational& r, const Rational& alpha) {
  const Rational star = alpha_star(d, q, r).value;
  return classify(alpha > star, alpha == star, wave_admissible(d, q, r));
}

}  // namespace kinavg
