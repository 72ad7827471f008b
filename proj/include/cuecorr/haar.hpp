#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace cuecorr {

// One draw of eigenphases of a Haar-random U(N) matrix.
// Phases are canonicalized to [0, 2*pi) and sorted ascending; the pair
// (seed, draw) pins the sample exactly.
struct EigenphaseSample {
  Eigen::VectorXd phases;
  int matrix_size = 0;
  std::uint64_t seed = 0;
  std::uint64_t draw = 0;
};

// Haar-distributed unitary via QR of a complex Ginibre matrix with the
// R-diagonal phases divided out (plain QR is not Haar).
Eigen::MatrixXcd sample_haar_unitary(int n, std::uint64_t seed,
                                     std::uint64_t draw = 0);

EigenphaseSample sample_haar_eigenphases(int n, std::uint64_t seed,
                                         std::uint64_t draw = 0);

// S_N(theta) = sin(N theta / 2) / (2 pi sin(theta / 2)); arguments within
// 1e-8 of a multiple of 2*pi are routed to the limit value N / (2 pi).
double kernel_sn(double theta, int n);

// n x n determinant of the S_N kernel matrix over the given angles.
double det_correlation(const std::vector<double>& points, int n);

// Scaled large-N pair correlation 1 - (sin(pi r)/(pi r))^2, with value 0 at r=0.
double pair_correlation_limit(double r);

// One row per matrix: N, seed, draw, phases...
void write_samples_csv(const std::string& path,
                       const std::vector<EigenphaseSample>& samples);

// Histogram of scaled nearest-index spacings x = N (theta_k - theta_j) / 2pi
// accumulated over all ordered pairs, compared against the sine-kernel limit.
struct PairCorrelationHistogram {
  std::vector<double> bin_left;     // size bins
  std::vector<double> mean_count;   // mean per-sample count per bin
  std::vector<double> std_error;    // standard error of the mean
  std::vector<double> predicted;    // limit-curve prediction per bin
  int num_samples = 0;
  int matrix_size = 0;
};

PairCorrelationHistogram empirical_pair_correlation(int n, int num_samples,
                                                    std::uint64_t seed,
                                                    int bins, double rmax,
                                                    int threads = 1);

}  // namespace cuecorr
