#include "cuecorr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "cuecorr/rng.hpp"

namespace cuecorr {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename T>
double norm_of(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::abs(v);
  } else {
    return std::abs(v);
  }
}

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T resk = T{}, resg = T{};
  for (int j = 0; j < 8; ++j) {
    const double x = h * kXgk[j];
    T v = (j == 7) ? f(c) : static_cast<T>(f(c - x) + f(c + x));
    resk += kWgk[j] * v;
    if (j % 2 == 1) resg += kWg[j / 2] * v;
  }
  Segment<T> s;
  s.a = a;
  s.b = b;
  s.value = resk * h;
  s.error = norm_of<T>((resk - resg) * h);
  return s;
}

template <typename T, typename F>
std::pair<T, double> adaptive(const F& f, double a, double b, double tol,
                              int max_intervals, bool* converged) {
  std::priority_queue<Segment<T>> q;
  q.push(gk15<T>(f, a, b));
  T total = q.top().value;
  double err = q.top().error;
  int n = 1;
  while (err > tol && n < max_intervals) {
    Segment<T> worst = q.top();
    q.pop();
    const double m = 0.5 * (worst.a + worst.b);
    Segment<T> left = gk15<T>(f, worst.a, m);
    Segment<T> right = gk15<T>(f, m, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    q.push(left);
    q.push(right);
    ++n;
    if (worst.b - worst.a < 1e-14 * (b - a)) break;
  }
  if (converged) *converged = err <= tol;
  // Re-sum from the queue for a tighter error estimate.
  double esum = 0.0;
  while (!q.empty()) {
    esum += q.top().error;
    q.pop();
  }
  return {total, esum};
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_intervals) {
  if (!(b > a)) return {0.0, 0.0, true};
  QuadResult r;
  auto [v, e] = adaptive<double>(f, a, b, tol, max_intervals, &r.converged);
  r.value = v;
  r.error = e;
  return r;
}

ComplexQuadResult integrate_1d_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol, int max_intervals) {
  if (!(b > a)) return {{0.0, 0.0}, 0.0, true};
  ComplexQuadResult r;
  auto [v, e] =
      adaptive<std::complex<double>>(f, a, b, tol, max_intervals, &r.converged);
  r.value = v;
  r.error = e;
  return r;
}

bool ConstrainedDomain::contains(const Eigen::VectorXd& x) const {
  for (const auto& c : constraints)
    if (!c.satisfied(x)) return false;
  return true;
}

bool ConstrainedDomain::empty_interior() const {
  const int d = dim();
  for (const auto& c : constraints) {
    // max over the box of (b - a).x; constraint feasible iff it exceeds c0
    double best = 0.0;
    for (int j = 0; j < d; ++j) {
      const double g = (c.b.size() ? c.b[j] : 0.0) - (c.a.size() ? c.a[j] : 0.0);
      best += g > 0.0 ? g * hi[j] : g * lo[j];
    }
    if (!(best > c.c0)) return true;
  }
  for (int j = 0; j < d; ++j)
    if (!(hi[j] > lo[j])) return true;
  return false;
}

namespace {

QuadResult integrate_tensor(const std::function<double(const Eigen::VectorXd&)>& f,
                            const ConstrainedDomain& dom, double tol) {
  const int d = dom.dim();
  Eigen::VectorXd x(d);
  double errs[3] = {0.0, 0.0, 0.0};

  std::function<double(int, double)> level = [&](int k, double level_tol) {
    if (k == d) {
      return dom.contains(x) ? f(x) : 0.0;
    }
    const double width = dom.hi[k] - dom.lo[k];
    auto g = [&](double t) {
      x[k] = t;
      return level(k + 1, level_tol / std::max(1.0, width) * 0.5);
    };
    bool conv = false;
    auto [v, e] = adaptive<double>(g, dom.lo[k], dom.hi[k], level_tol,
                                   k == 0 ? 2000 : 400, &conv);
    errs[std::min(k, 2)] = std::max(errs[std::min(k, 2)], e);
    return v;
  };

  QuadResult r;
  r.value = level(0, tol);
  r.error = errs[0] + errs[1] + errs[2];
  r.converged = r.error <= 10.0 * tol;
  return r;
}

QuadResult integrate_qmc(const std::function<double(const Eigen::VectorXd&)>& f,
                         const ConstrainedDomain& dom, double tol,
                         std::uint64_t seed) {
  const int d = dom.dim();
  double vol = 1.0;
  for (int j = 0; j < d; ++j) vol *= dom.hi[j] - dom.lo[j];

  // Korobov rank-1 lattice, 16 independent random shifts for the error bar.
  const int kShifts = 16;
  std::vector<Eigen::VectorXd> shifts;
  CounterRng rng(seed, 0xABCDull);
  for (int s = 0; s < kShifts; ++s) {
    Eigen::VectorXd sh(d);
    for (int j = 0; j < d; ++j) sh[j] = rng.uniform01();
    shifts.push_back(sh);
  }

  std::uint64_t npts = 1 << 12;
  const std::uint64_t max_pts = 1ull << 19;
  QuadResult r;
  Eigen::VectorXd x(d);
  while (true) {
    const std::uint64_t a = 1571;
    std::vector<double> est(kShifts, 0.0);
    Eigen::VectorXd z(d);
    std::uint64_t ak = 1;
    for (int j = 0; j < d; ++j) {
      z[j] = static_cast<double>(ak % npts) / static_cast<double>(npts);
      ak = (ak * a) % npts;
    }
    for (int s = 0; s < kShifts; ++s) {
      double acc = 0.0;
      for (std::uint64_t i = 0; i < npts; ++i) {
        for (int j = 0; j < d; ++j) {
          double t = std::fmod(static_cast<double>(i) * z[j] + shifts[s][j], 1.0);
          x[j] = dom.lo[j] + t * (dom.hi[j] - dom.lo[j]);
        }
        if (dom.contains(x)) acc += f(x);
      }
      est[s] = vol * acc / static_cast<double>(npts);
    }
    double mean = 0.0;
    for (double e : est) mean += e;
    mean /= kShifts;
    double var = 0.0;
    for (double e : est) var += (e - mean) * (e - mean);
    var /= (kShifts - 1);
    r.value = mean;
    r.error = std::sqrt(var / kShifts);
    if (r.error <= tol || npts >= max_pts) {
      r.converged = r.error <= tol;
      return r;
    }
    npts <<= 2;
  }
}

}  // namespace

QuadResult integrate(const std::function<double(const Eigen::VectorXd&)>& f,
                     const ConstrainedDomain& domain, double tol,
                     std::uint64_t qmc_seed) {
  if (domain.dim() == 0) {
    Eigen::VectorXd x(0);
    return {domain.contains(x) ? f(x) : 0.0, 0.0, true};
  }
  if (domain.empty_interior()) return {0.0, 0.0, true};
  if (domain.dim() <= 3) return integrate_tensor(f, domain, tol);
  return integrate_qmc(f, domain, tol, qmc_seed);
}

ContourResult contour_integral_truncated(
    const std::function<std::complex<double>(std::complex<double>)>& f,
    double delta, double height, double tol) {
  ContourResult r;
  auto g = [&](double t) { return f(std::complex<double>(delta, t)); };
  auto q = integrate_1d_complex(g, -height, height, tol, 20000);
  r.value = q.value;
  r.error = q.error;
  r.tail_bound = std::abs(g(height)) + std::abs(g(-height));
  r.tail_warning = r.tail_bound > tol;
  return r;
}

}  // namespace cuecorr
