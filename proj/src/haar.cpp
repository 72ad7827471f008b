#include "cuecorr/haar.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "cuecorr/quadrature.hpp"
#include "cuecorr/rng.hpp"

namespace cuecorr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Eigen::MatrixXcd sample_haar_unitary(int n, std::uint64_t seed,
                                     std::uint64_t draw) {
  if (n < 1) throw std::invalid_argument("matrix size must be >= 1");
  CounterRng rng(seed, draw);
  Eigen::MatrixXcd a(n, n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      a(i, j) = std::complex<double>(rng.gaussian() * s, rng.gaussian() * s);

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Normalizing the R diagonal to positive reals makes the factorization
  // unique and the Q factor exactly Haar.
  for (int j = 0; j < n; ++j) {
    std::complex<double> d = r(j, j);
    double m = std::abs(d);
    q.col(j) *= (m > 0.0) ? d / m : 1.0;
  }
  return q;
}

EigenphaseSample sample_haar_eigenphases(int n, std::uint64_t seed,
                                         std::uint64_t draw) {
  Eigen::MatrixXcd u = sample_haar_unitary(n, seed, draw);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, false);
  EigenphaseSample out;
  out.matrix_size = n;
  out.seed = seed;
  out.draw = draw;
  out.phases.resize(n);
  for (int j = 0; j < n; ++j) {
    double t = std::arg(es.eigenvalues()[j]);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t -= kTwoPi;
    out.phases[j] = t;
  }
  std::sort(out.phases.data(), out.phases.data() + n);
  return out;
}

double kernel_sn(double theta, int n) {
  const double r = theta - kTwoPi * std::round(theta / kTwoPi);
  if (std::abs(r) < 1e-8) return n / kTwoPi;
  return std::sin(0.5 * n * theta) / (kTwoPi * std::sin(0.5 * theta));
}

double det_correlation(const std::vector<double>& points, int n) {
  const int m = static_cast<int>(points.size());
  if (m < 1) throw std::invalid_argument("need at least one point");
  Eigen::MatrixXd k(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) k(i, j) = kernel_sn(points[i] - points[j], n);
  return k.determinant();
}

double pair_correlation_limit(double r) {
  if (r == 0.0) return 0.0;
  const double s = std::sin(std::numbers::pi * r) / (std::numbers::pi * r);
  return 1.0 - s * s;
}

void write_samples_csv(const std::string& path,
                       const std::vector<EigenphaseSample>& samples) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "N,seed,draw";
  int maxn = 0;
  for (const auto& s : samples) maxn = std::max(maxn, s.matrix_size);
  for (int j = 0; j < maxn; ++j) f << ",theta" << j;
  f << "\n";
  f.precision(17);
  for (const auto& s : samples) {
    f << s.matrix_size << "," << s.seed << "," << s.draw;
    for (int j = 0; j < s.matrix_size; ++j) f << "," << s.phases[j];
    f << "\n";
  }
}

PairCorrelationHistogram empirical_pair_correlation(int n, int num_samples,
                                                    std::uint64_t seed,
                                                    int bins, double rmax,
                                                    int threads) {
  if (n < 2 || bins < 1 || num_samples < 1)
    throw std::invalid_argument("bad pair-correlation parameters");
  PairCorrelationHistogram h;
  h.num_samples = num_samples;
  h.matrix_size = n;
  h.bin_left.resize(bins);
  const double w = rmax / bins;
  for (int b = 0; b < bins; ++b) h.bin_left[b] = b * w;

  // fixed-size chunks combined in index order: results do not depend on the
  // thread count
  const int chunk = 256;
  const int nchunks = (num_samples + chunk - 1) / chunk;
  std::vector<std::vector<double>> csum(nchunks), csum2(nchunks);

  auto run_chunk = [&](int c) {
    std::vector<double> sum(bins, 0.0), sum2(bins, 0.0), count(bins);
    const int lo = c * chunk, hi = std::min(num_samples, lo + chunk);
    for (int s = lo; s < hi; ++s) {
      EigenphaseSample es = sample_haar_eigenphases(n, seed, s);
      std::fill(count.begin(), count.end(), 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          double gap = es.phases[j] - es.phases[i];
          if (gap < 0.0) gap += kTwoPi;
          const double x = n * gap / kTwoPi;
          if (x < rmax) count[static_cast<int>(x / w)] += 1.0;
        }
      for (int b = 0; b < bins; ++b) {
        sum[b] += count[b];
        sum2[b] += count[b] * count[b];
      }
    }
    csum[c] = std::move(sum);
    csum2[c] = std::move(sum2);
  };

  if (threads <= 1) {
    for (int c = 0; c < nchunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1))
          run_chunk(c);
      });
    for (auto& t : pool) t.join();
  }

  h.mean_count.assign(bins, 0.0);
  h.std_error.assign(bins, 0.0);
  for (int c = 0; c < nchunks; ++c)
    for (int b = 0; b < bins; ++b) {
      h.mean_count[b] += csum[c][b];
      h.std_error[b] += csum2[c][b];
    }
  for (int b = 0; b < bins; ++b) {
    const double mean = h.mean_count[b] / num_samples;
    const double var =
        (h.std_error[b] / num_samples - mean * mean) * num_samples /
        std::max(1, num_samples - 1);
    h.mean_count[b] = mean;
    h.std_error[b] = std::sqrt(std::max(0.0, var) / num_samples);
  }

  h.predicted.assign(bins, 0.0);
  for (int b = 0; b < bins; ++b) {
    auto f = [](double x) { return pair_correlation_limit(x); };
    h.predicted[b] =
        n * integrate_1d(f, h.bin_left[b], h.bin_left[b] + w, 1e-12).value;
  }
  return h;
}

}  // namespace cuecorr
