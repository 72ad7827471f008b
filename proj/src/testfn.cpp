#include "cuecorr/testfn.hpp"

#include <cmath>
#include <numbers>

#include "cuecorr/quadrature.hpp"

namespace cuecorr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::complex<double> h_from_g(const BumpFunction& g, std::complex<double> x,
                              double* achieved_tol) {
  auto f = [&](double t) { return g(t) * std::exp(std::complex<double>(0, 1) * x * t); };
  auto r = integrate_1d_complex(f, -g.half_width, g.half_width, 1e-12);
  if (achieved_tol) *achieved_tol = r.error;
  return r.value;
}

TestFunctionBundle make_canonical_bundle(int n, int matrix_size,
                                         double support_budget,
                                         double t_ratio) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (matrix_size < 1) throw std::invalid_argument("matrix size must be >= 1");
  TestFunctionBundle b;
  b.phi.n = n;
  b.phi.rho = support_budget / n;
  b.g.assign(n, BumpFunction{});
  b.matrix_size = matrix_size;
  b.big_t = t_ratio * matrix_size;
  if (t_ratio < 5.0)
    b.warnings.push_back("slow-scale ratio below 5; subleading terms may "
                         "contaminate comparisons");
  return b;
}

std::complex<double> f_from_phi(const PhiFunction& phi,
                                const Eigen::VectorXcd& x,
                                double* achieved_tol) {
  const int n = phi.n;
  if (x.size() != n) throw std::invalid_argument("dimension mismatch");
  if (achieved_tol) *achieved_tol = 0.0;
  if (n == 1) return phi.at_zero();

  // eliminate xi_n = -(xi_1 + ... + xi_{n-1}); phases use x_j - x_n
  Eigen::VectorXcd dx(n - 1);
  for (int j = 0; j + 1 < n; ++j) dx[j] = x[j] - x[n - 1];

  Eigen::VectorXd xi(n);
  double err_acc = 0.0;
  std::function<std::complex<double>(int)> level = [&](int k) -> std::complex<double> {
    if (k == n - 1) {
      double s = 0.0;
      for (int j = 0; j + 1 < n; ++j) s += xi[j];
      xi[n - 1] = -s;
      const double w = phi(xi);
      if (w == 0.0) return {0.0, 0.0};
      std::complex<double> phase = 0.0;
      for (int j = 0; j + 1 < n; ++j) phase += dx[j] * xi[j];
      return w * std::exp(std::complex<double>(0, -kTwoPi) * phase);
    }
    auto f = [&](double t) {
      xi[k] = t;
      return level(k + 1);
    };
    auto r = integrate_1d_complex(f, -phi.rho, phi.rho, k == 0 ? 1e-10 : 1e-11);
    if (k == 0) err_acc += r.error;
    return r.value;
  };
  auto v = level(0);
  if (achieved_tol) *achieved_tol = err_acc;
  return v;
}

KappaResult kappa(const TestFunctionBundle& bundle) {
  auto product = [&](double u) {
    double p = 1.0;
    for (const auto& g : bundle.g) p *= h_from_g(g, u).real();
    return p;
  };
  const double cut = 400.0;
  auto core = integrate_1d(product, -cut, cut, 1e-10, 20000);
  // crude but conservative truncation estimate from the endpoint magnitude
  const double tail =
      2.0 * std::sqrt(cut) * (std::abs(product(cut)) + std::abs(product(-cut)));
  return {core.value, core.error + tail};
}

KappaResult kappa_convolution(const TestFunctionBundle& bundle) {
  const int n = bundle.n();
  if (n == 1) return {kTwoPi * bundle.g[0](0.0), 0.0};

  ConstrainedDomain dom;
  dom.lo.resize(n - 1);
  dom.hi.resize(n - 1);
  for (int j = 0; j + 1 < n; ++j) {
    dom.lo[j] = -bundle.g[j].half_width;
    dom.hi[j] = bundle.g[j].half_width;
  }
  auto f = [&](const Eigen::VectorXd& t) {
    double p = 1.0, s = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
      p *= bundle.g[j](t[j]);
      s += t[j];
    }
    return p * bundle.g[n - 1](-s);
  };
  auto r = integrate(f, dom, 1e-12);
  return {kTwoPi * r.value, kTwoPi * r.error};
}

std::complex<double> assemble_F(const TestFunctionBundle& bundle,
                                const Eigen::VectorXcd& z) {
  const int n = bundle.n();
  const double scale = bundle.matrix_size / kTwoPi;
  Eigen::VectorXcd x = std::complex<double>(0, 1) * scale * z;
  std::complex<double> out = f_from_phi(bundle.phi, x);
  for (int j = 0; j < n; ++j)
    out *= h_from_g(bundle.g[j], std::complex<double>(0, 1) * z[j] / bundle.big_t);
  return out;
}

}  // namespace cuecorr
