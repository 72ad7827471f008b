#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace cuecorr {

// Index sets over {1, ..., n}, stored sorted ascending.
using IndexSet = std::vector<int>;

struct PartitionKLM {
  IndexSet K, L, M;
};

// Bijection between equal-size K and L; first components ascend, so each
// pairing appears exactly once.
using Pairing = std::vector<std::pair<int, int>>;

// One term of the first-correction sum: proper subsets R of K and Q of L of
// equal size, a pairing (R:Q), a split of R^c and Q^c, and the chosen k, l.
struct Q2Config {
  IndexSet K, L;
  IndexSet R, Q;
  Pairing pairing;  // (r_j, q_j)
  IndexSet Rc, Qc;  // complements of R in K and Q in L
  IndexSet R1, R1c, Q1, Q1c;
  int k = 0, l = 0;
  IndexSet R1_below, R1_above;  // R1 split strictly by k
  IndexSet Q1_below, Q1_above;  // Q1 split strictly by l
  IndexSet S1;                  // R1c u R1_above u Q1_below u {l}
  IndexSet S2;                  // R1_below u Q1_above u Q1c
  int sign = 1;                 // (-1)^{|R1_above u Q1_above|}
};

// One term of the second-correction sum: R^c and Q^c each split four ways
// with R1, R2, Q1, Q2 nonempty; k1 < k2 and l1 < l2 avoid double counting.
struct Q3Config {
  IndexSet K, L;
  IndexSet R, Q;
  Pairing pairing;
  IndexSet Rc, Qc;
  IndexSet R1, R1c, R2, R2c;
  IndexSet Q1, Q1c, Q2, Q2c;
  int k1 = 0, k2 = 0, l1 = 0, l2 = 0;
  IndexSet R1_below, R1_above;  // split of R1 by k1
  IndexSet R2_below, R2_above;  // split of R2 by k2
  IndexSet Q1_below, Q1_above;  // split of Q1 by l1
  IndexSet Q2_below, Q2_above;  // split of Q2 by l2
  IndexSet K1, K2, L1, L2;      // K1 = R1 u Q1c, K2 = R2 u Q2c,
                                // L1 = Q1 u R1c, L2 = Q2 u R2c
  IndexSet A;  // R1_below u R2_below u Q1_above u Q2_above u Q1c u Q2c
  IndexSet B;  // R1_above u R2_above u Q1_below u Q2_below u R1c u R2c
  int sign = 1;
};

// Partition by strict comparison against the pivot; pivot itself excluded.
std::pair<IndexSet, IndexSet> split_relative(const IndexSet& s, int pivot);

// All 3^n assignments of {1, ..., n} to (K, L, M), each exactly once.
void for_each_klm(int n, const std::function<void(const PartitionKLM&)>& fn);

// All |K|! pairings when sizes match; nothing otherwise.
void for_each_pairing(const IndexSet& k, const IndexSet& l,
                      const std::function<void(const Pairing&)>& fn);

void for_each_q2_config(const IndexSet& k, const IndexSet& l,
                        const std::function<void(const Q2Config&)>& fn);

void for_each_q3_config(const IndexSet& k, const IndexSet& l,
                        const std::function<void(const Q3Config&)>& fn);

std::size_t count_q2_configs(const IndexSet& k, const IndexSet& l);
std::size_t count_q3_configs(const IndexSet& k, const IndexSet& l);

// Default cap on n; the sums grow combinatorially.
inline constexpr int kDefaultIndexCap = 8;

// counts of configurations per (n, |K|, |L|) as CSV
std::string config_census_csv(int n);

}  // namespace cuecorr
