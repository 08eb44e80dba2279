#pragma once

#include <functional>
#include <vector>

namespace kinavg {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// n-point Gauss–Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// n-point Gauss–Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

// Rule on [0, 1] for the weight (1-s)^a, i.e. Gauss–Jacobi pulled back by
// x = 2s - 1 with the Jacobian folded into the weights.
QuadratureRule gauss_jacobi_unit(int n, double a, double b = 0.0);

// Adaptive Gauss–Kronrod on a finite interval. Throws NumericalError when the
// estimated relative error exceeds 100 * tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

// Double-exponential rule for integrands with endpoint singularities.
double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-13);

struct Maximum {
  double x;
  double value;
};

// Golden-section search for the maximum of a unimodal function on [a, b].
// Endpoint values are compared at the end so that monotone functions return
// the endpoint exactly.
Maximum golden_section_max(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12);

}  // namespace kinavg
