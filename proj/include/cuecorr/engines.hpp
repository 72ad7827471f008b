#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cuecorr/combinatorics.hpp"
#include "cuecorr/quadrature.hpp"
#include "cuecorr/testfn.hpp"

namespace cuecorr {

// Placement of the (-1)^{|L|} factor across the bracket blocks. The source
// material is internally inconsistent here; the default is the variant that
// matches the determinantal and sampling routes (see the adjudication tests).
enum class BlockSignRule {
  kAdjudicated,       // +1 on every block
  kCorrectionParity,  // (-1)^{|L|} on the correction blocks only
  kBracketParity,     // (-1)^{|L|} on the whole bracket
};

inline const char* to_string(BlockSignRule r) {
  switch (r) {
    case BlockSignRule::kAdjudicated: return "adjudicated-plus-one";
    case BlockSignRule::kCorrectionParity: return "correction-parity";
    default: return "bracket-parity";
  }
}

struct EngineOptions {
  BlockSignRule sign_rule = BlockSignRule::kAdjudicated;
  bool i22_factor_two = true;  // derivation carries 2 on families 3..6
  double quad_tol = 1e-9;
  int window = 3;  // relative 2*pi shifts kept in the sampling sum
  int threads = 1;
  int index_cap = kDefaultIndexCap;
  bool keep_breakdown = true;
};

struct StatisticResult {
  double value = 0.0;
  double uncertainty = 0.0;
  double kappa_value = 0.0;
  double normalization = 0.0;  // kappa * N * T / (2 pi)
  std::vector<std::pair<std::string, double>> breakdown;
  int n = 0;
  int matrix_size = 0;
  double big_t = 0.0;
  std::uint64_t seed = 0;
  std::string engine;
  std::string sign_rule;
  std::vector<std::string> warnings;

  double bracket() const { return value / normalization; }
};

struct MeanResult {
  std::complex<double> value{0.0, 0.0};
  double std_error = 0.0;
  std::int64_t rejected = 0;
  int num_samples = 0;
};

// Monte Carlo average of ratios of characteristic polynomials over U(N).
// Samples whose denominator comes within 1e-12 of zero are rejected and
// counted.
MeanResult ratios_mc(int matrix_size, Complex alpha, Complex beta,
                     Complex gamma, Complex delta, int num_samples,
                     std::uint64_t seed, int threads = 1);

// The two-term closed form for the same average.
Complex ratios_closed(int matrix_size, Complex alpha, Complex beta,
                      Complex gamma, Complex delta);

// sum_{k=0}^{N} e^{-k x}; equals z(x) + e^{-N x} z(-x).
Complex cue_moment_sum(int matrix_size, Complex x);

// ---- restricted-support statistic evaluators ------------------------------

StatisticResult q1_statistic(const TestFunctionBundle& bundle, int n,
                             const EngineOptions& opt = {});
StatisticResult q2_statistic(const TestFunctionBundle& bundle, int n,
                             const EngineOptions& opt = {});
StatisticResult q3_statistic(const TestFunctionBundle& bundle, int n,
                             const EngineOptions& opt = {});

// One first-correction configuration: config sign and prod(-xi_q) included,
// bracket units (multiply by kappa * N * T / 2pi for the raw statistic).
QuadResult i11_term(const TestFunctionBundle& bundle, int n,
                    const Q2Config& config, const EngineOptions& opt = {});

// One second-correction configuration and family (1..6): family sign and the
// derivation's factor of two included (the factor is released by
// opt.i22_factor_two = false).
QuadResult i22_term(const TestFunctionBundle& bundle, int n,
                    const Q3Config& config, int family,
                    const EngineOptions& opt = {});

// ---- sampling evaluator ----------------------------------------------------
// Unrestricted n-tuple sum over periodically extended eigenphases. The rigid
// common 2*pi-shift direction is summed in closed form (exact when big_t
// exceeds the summed bump widths); relative shifts are kept to |d| <= window
// with the spillover reported.
StatisticResult empirical_ncorr(const TestFunctionBundle& bundle, int n,
                                int num_samples, std::uint64_t seed,
                                const EngineOptions& opt = {});

// ---- determinantal evaluator (n <= 3) --------------------------------------
// Same statistic through the kernel-determinant densities plus the explicit
// coincidence terms; no sampling, no subset sums.
StatisticResult detform_ncorr(const TestFunctionBundle& bundle, int n,
                              const EngineOptions& opt = {});

// ---- truncated-contour evaluation of the subset-sum representation ---------
// n in {1, 2}. delta is the base contour offset, height the truncation of
// the vertical paths.
StatisticResult theorem4_rhs_validation(const TestFunctionBundle& bundle,
                                        int n, double delta, double height,
                                        const EngineOptions& opt = {});

// Residue bookkeeping probe on the first-correction integrand (a 3-variable
// instance): the two exchanged-index residue expressions must cancel, and the
// symmetrized integrand must stay bounded as the two right-contour variables
// collide.
struct PoleCancellationCheck {
  double max_residue_pair = 0.0;  // worst |Res_A + Res_B| over the draws
  double max_growth = 0.0;        // worst decade-to-decade growth factor
};

PoleCancellationCheck pole_cancellation_check(const TestFunctionBundle& bundle3,
                                              int draws, std::uint64_t seed);

}  // namespace cuecorr
