#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace cuecorr {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

struct ComplexQuadResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b] to absolute tolerance tol.
QuadResult integrate_1d(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_intervals = 4000);

ComplexQuadResult integrate_1d_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol, int max_intervals = 4000);

// Strict half-space condition  c0 + a.x < b.x  (boundaries have measure zero,
// so strict vs non-strict is immaterial).
struct LinearConstraint {
  double c0 = 0.0;
  Eigen::VectorXd a;
  Eigen::VectorXd b;

  bool satisfied(const Eigen::VectorXd& x) const {
    double lhs = c0;
    if (a.size()) lhs += a.dot(x);
    double rhs = b.size() ? b.dot(x) : 0.0;
    return lhs < rhs;
  }
};

// Axis-aligned box with half-space cuts. Integrands carry a compactly
// supported factor, so the box is exact, not a truncation.
struct ConstrainedDomain {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  std::vector<LinearConstraint> constraints;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::VectorXd& x) const;
  // Interior provably empty: some constraint is infeasible over the box.
  bool empty_interior() const;
};

// Hybrid integrator: tensor-product adaptive Gauss-Kronrod for dim <= 3,
// randomly shifted rank-1 lattice QMC with indicator constraints for
// dim >= 4. Empty domains return exactly (0, 0).
QuadResult integrate(const std::function<double(const Eigen::VectorXd&)>& f,
                     const ConstrainedDomain& domain, double tol,
                     std::uint64_t qmc_seed = 0);

struct ContourResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  double tail_bound = 0.0;
  bool tail_warning = false;
};

// Path-parameter integral int_{-H}^{H} f(delta + i t) dt over the truncated
// vertical segment; tail_bound reports the endpoint magnitude as the
// truncation proxy and trips tail_warning when it exceeds tol.
ContourResult contour_integral_truncated(
    const std::function<std::complex<double>(std::complex<double>)>& f,
    double delta, double height, double tol);

}  // namespace cuecorr
