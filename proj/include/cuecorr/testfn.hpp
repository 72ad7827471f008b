#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace cuecorr {

// Smooth even bump supported on [-half_width, half_width]:
// amplitude * exp(-1 / (1 - (t/half_width)^2)).
struct BumpFunction {
  double half_width = 1.0;
  double amplitude = 1.0;

  double operator()(double t) const {
    const double u = t / half_width;
    if (!(std::abs(u) < 1.0)) return 0.0;
    return amplitude * std::exp(-1.0 / (1.0 - u * u));
  }
};

// h(x) = int g(t) e^{i x t} dt, valid for complex x (entire function).
// achieved_tol, when given, receives the quadrature error estimate.
std::complex<double> h_from_g(const BumpFunction& g, std::complex<double> x,
                              double* achieved_tol = nullptr);

// Product of identical unit bumps with per-coordinate half-width rho.
// Vanishes exactly (not merely small) once any |xi_j| >= rho, hence whenever
// sum |xi_j| exceeds the budget n * rho.
struct PhiFunction {
  int n = 1;
  double rho = 0.95;
  double amplitude = 1.0;

  double budget() const { return n * rho; }
  double operator()(const Eigen::VectorXd& xi) const {
    double p = amplitude;
    if (p == 0.0) return 0.0;
    for (int j = 0; j < xi.size(); ++j) {
      const double u = xi[j] / rho;
      if (!(std::abs(u) < 1.0)) return 0.0;
      p *= std::exp(-1.0 / (1.0 - u * u));
    }
    return p;
  }
  double at_zero() const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    return (*this)(z);
  }
};

// The full test-function package: Phi, the per-coordinate bumps, and the two
// scales. big_t plays the slow scale and should dominate matrix_size.
struct TestFunctionBundle {
  PhiFunction phi;
  std::vector<BumpFunction> g;
  int matrix_size = 0;
  double big_t = 0.0;
  double epsilon = 0.1;  // support budget written as 2q - epsilon
  std::vector<std::string> warnings;

  int n() const { return phi.n; }
};

// Canonical bundle: rho = budget / n, unit-width unit-amplitude bumps,
// big_t = t_ratio * matrix_size. A ratio below 5 gets a warning.
TestFunctionBundle make_canonical_bundle(int n, int matrix_size,
                                         double support_budget,
                                         double t_ratio = 10.0);

// f evaluated through its constrained transform: the last frequency variable
// is eliminated against the delta constraint and Phi is integrated over the
// hyperplane. x may be complex (entire continuation). n = 1 returns Phi(0).
std::complex<double> f_from_phi(const PhiFunction& phi,
                                const Eigen::VectorXcd& x,
                                double* achieved_tol = nullptr);

struct KappaResult {
  double value = 0.0;
  double error = 0.0;
};

// kappa(h) = int h_1(u) ... h_n(u) du over the real line (truncated where the
// integrand is below noise; the truncation estimate is folded into error).
KappaResult kappa(const TestFunctionBundle& bundle);

// Same scalar through the compactly supported side: 2*pi times the (n-1)-fold
// convolution of the g's at zero. Fast and tail-free; the engines use this.
KappaResult kappa_convolution(const TestFunctionBundle& bundle);

// F(i z_1, ..., i z_n) = f(i N z / 2pi) * prod_j h_j(i z_j / big_t)
std::complex<double> assemble_F(const TestFunctionBundle& bundle,
                                const Eigen::VectorXcd& z);

}  // namespace cuecorr
