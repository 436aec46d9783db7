#pragma once

// Reference computations for the test suite. Nothing here calls into the library's
// quadrature or assembly code.

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

namespace oracle {

/// n-point Gauss-Legendre rule on [-1, 1] from the Golub-Welsch eigenproblem.
std::pair<std::vector<double>, std::vector<double>> golub_welsch(int n);

/// Composite n-point Gauss of f over [a, b] with m equal panels.
double composite_gauss(const std::function<double(double)>& f, double a, double b, int n, int m);

/// Integral over [a, b] of a function singular at the endpoint `toward` (a or b), using
/// geometrically shrinking panels (ratio 0.15, 36 levels) of the n-point rule.
double graded_toward(const std::function<double(double)>& f, double a, double b, double toward, int n);

/// Classical fractional Laplacian constant s 4^s Gamma((1+2s)/2) / (sqrt(pi) Gamma(1-s)), n = 1.
double classical_constant_1d(double s);

/// Dense stiffness matrix over the free nodes of the uniform grid of [-1-lambda, 1+lambda]
/// with spacing 2/N (lambda must be a multiple of 2/N): the unfolded double integral
/// (c/2) int int_{|y-x| <= lambda} (phi_j(y)-phi_j(x)) (phi_i(y)-phi_i(x)) |y-x|^{-1-2s}
/// evaluated element pair by element pair.
Eigen::MatrixXd stiffness(int N, double lambda, double s, double c);

} // namespace oracle
