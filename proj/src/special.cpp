#include "kinavg/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/special_functions/spherical_harmonic.hpp>

#include "kinavg/errors.hpp"
#include "kinavg/quadrature.hpp"

namespace kinavg {

namespace {

constexpr double pi = std::numbers::pi;

// x^y with 0^0 = 1
double pow00(double x, double y) { return (x == 0.0 && y == 0.0) ? 1.0 : std::pow(x, y); }

}  // namespace

double sphere_area(int n) {
  require(n >= 0, "sphere dimension must be nonnegative");
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(pi, h) / std::tgamma(h);
}

double legendre(int d, int k, double t) {
  require(d >= 2, "dimension must be at least 2");
  require(k >= 0, "degree must be nonnegative");
  require(std::abs(t) <= 1.0, "Legendre argument outside [-1, 1]");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + d - 2) * t * cur - j * prev) / (j + d - 2);
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre_bound_constant(int d) {
  return std::pow(2.0, d - 2) / std::sqrt(pi) * std::tgamma(0.5 * (d - 1));
}

double legendre_bound_margin(int d, int k, double t) {
  require(k >= 1, "bound needs k >= 1");
  require(std::abs(t) < 1.0, "bound needs |t| < 1");
  const double e = 0.5 * (2 - d);
  const double bound = std::min(1.0, legendre_bound_constant(d) * std::pow(k, e) * std::pow(1.0 - t * t, e));
  return bound - std::abs(legendre(d, k, t));
}

namespace {

// int_0^m s^{a-1} (1-s)^{b-1} ds for m <= 1/2. With s = m u the power
// singularity becomes the Jacobi weight u^{a-1}; the remaining factor
// (1 - m u)^{b-1} is analytic on a neighbourhood of [0, 1].
double lower_beta_piece(double m, double a, double b) {
  if (m == 0.0) return 0.0;
  static thread_local std::vector<std::pair<double, QuadratureRule>> cache;
  const QuadratureRule* rule = nullptr;
  for (const auto& [key, r] : cache) {
    if (key == a) rule = &r;
  }
  if (rule == nullptr) {
    if (cache.size() > 16) cache.clear();
    cache.emplace_back(a, gauss_jacobi_unit(48, 0.0, a - 1.0));
    rule = &cache.back().second;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < rule->size(); ++i) {
    sum += rule->weights[i] * std::pow(1.0 - m * rule->nodes[i], b - 1.0);
  }
  return std::pow(m, a) * sum;
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
  require(a > 0.0 && b > 0.0, "incomplete beta needs a, b > 0");
  require(x >= 0.0 && x <= 1.0, "incomplete beta needs x in [0, 1]");
  if (x <= 0.5) return lower_beta_piece(x, a, b);
  // reflect the part beyond 1/2 onto the other endpoint
  return lower_beta_piece(0.5, a, b) + lower_beta_piece(0.5, b, a) - lower_beta_piece(1.0 - x, b, a);
}

double sharp_profile(int d, double beta_minus, double lambda) {
  const double a = 0.5 * (d - 1) - 2.0 * beta_minus;
  const double b = 2.0 * beta_minus + 0.5 * (d - 3);
  return 0.5 * sphere_area(d - 2) * pow00(1.0 + lambda, a) * pow00(1.0 - lambda, b);
}

SpecialValue sharp_constant_general(int d, double beta_minus) {
  require(d >= 2, "dimension must be at least 2");
  const double lower = 0.25 * (3 - d);
  require(beta_minus >= lower - 1e-15, "beta_minus below (3-d)/4");
  const double s = sphere_area(d - 2);
  SpecialValue out;
  out.formula_id = "sharp_constant_general";
  if (beta_minus > 0.25) {
    out.value = 2.0 * pi * s;
    out.branch = "endpoint";
    return out;
  }
  const double a = 0.5 * (d - 1) - 2.0 * beta_minus;
  const double b = 0.5 * (d - 3) + 2.0 * beta_minus;
  out.value = 2.0 * pi * s * pow00(d - 2.0, 2.0 - d) * pow00(2.0 * a, a) * pow00(std::max(2.0 * b, 0.0), b);
  out.branch = "interior";
  out.boundary = beta_minus == 0.25 || beta_minus == lower;
  return out;
}

SpecialValue sharp_constant_radial(int d, double beta_plus, double beta_minus) {
  require(d >= 2, "dimension must be at least 2");
  require(std::abs(beta_plus + beta_minus - 0.5) < 1e-14, "radial sharp constant needs beta_+ + beta_- = 1/2");
  require(beta_minus > 0.5 * (2 - d), "radial sharp constant needs beta_- > (2-d)/2");
  require(beta_plus > 0.5 * (2 - d), "radial sharp constant needs beta_+ > (2-d)/2");
  const double s2 = sphere_area(d - 2);
  const double beta = incomplete_beta(0.5, 2.0 * beta_minus + d - 2, 2.0 * beta_plus + d - 2);
  SpecialValue out;
  out.value = std::pow(2.0, 2 * d - 2) * pi * s2 * s2 / sphere_area(d - 1) * beta;
  out.formula_id = "sharp_constant_radial";
  out.branch = "incomplete_beta";
  return out;
}

double i_k_integral(int d, int k, double beta_plus, double beta_minus) {
  require(d >= 2 && k >= 0, "bad dimension or degree");
  const double ep = d - 3 + 2.0 * beta_plus;
  const double em = d - 3 + 2.0 * beta_minus;
  require(em > -1.0, "integrand not integrable at 1: need beta_- > (2-d)/2");
  require(ep > -1.0 - 1e-300, "integrand exponent at -1 too small");
  // Gauss–Jacobi absorbs (1-l)^em; what remains is a polynomial times a
  // smooth power, so a modest rule converges to machine precision.
  const QuadratureRule rule = gauss_jacobi_unit(96 + 2 * k, em, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double l = rule.nodes[i];
    const double p = legendre(d, k, l);
    sum += rule.weights[i] * p * p * std::pow(1.0 + l, ep);
  }
  return sum;
}

double funk_hecke_coefficient(int d, int k, const std::function<double(double)>& F) {
  require(d >= 2 && k >= 0, "bad dimension or degree");
  const double e = 0.5 * (d - 3);
  double integral = 0.0;
  if (e == 0.0) {
    integral = integrate([&](double l) { return F(l) * legendre(d, k, l); }, -1.0, 1.0, 1e-13);
  } else {
    // l = sin u removes the (1-l^2)^{e} endpoint behaviour
    integral = integrate(
        [&](double u) {
          const double l = std::sin(u);
          const double c = std::cos(u);
          return F(l) * legendre(d, k, std::clamp(l, -1.0, 1.0)) * std::pow(c, 2.0 * e + 1.0);
        },
        -0.5 * pi, 0.5 * pi, 1e-13);
  }
  if (!std::isfinite(integral)) throw InputError("Funk-Hecke integrand is not integrable");
  return sphere_area(d - 2) * integral;
}

double real_spherical_harmonic(int l, int m, double theta, double phi) {
  require(l >= 0 && std::abs(m) <= l, "bad spherical harmonic indices");
  namespace bm = boost::math;
  if (m == 0) return bm::spherical_harmonic_r(l, 0, theta, phi);
  if (m > 0) return std::sqrt(2.0) * bm::spherical_harmonic_r(l, m, theta, phi);
  return std::sqrt(2.0) * bm::spherical_harmonic_i(l, -m, theta, phi);
}

}  // namespace kinavg
