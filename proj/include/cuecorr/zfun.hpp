#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace cuecorr {

using Complex = std::complex<double>;

class pole_error : public std::domain_error {
 public:
  explicit pole_error(const std::string& what) : std::domain_error(what) {}
};

// z(x) = 1 / (1 - e^{-x}); simple poles at 2*pi*i*k with residue 1.
// Arguments within 1e-12 of a pole are rejected rather than absorbed.
Complex z_fn(Complex x);

// z'/z (x) = 1 - z(x)
Complex zlog_deriv(Complex x);

// (z'/z)'(x) = z(x)^2 - z(x); behaves like 1/x^2 near the origin.
// The closed form is gated by a finite-difference unit test.
Complex zlog_deriv_prime(Complex x);

// Z(A, B) = prod_{alpha in A, beta in B} z(alpha + beta)
Complex Z_product(const std::vector<Complex>& a, const std::vector<Complex>& b);

// Dagger variant: factors with exactly zero argument are omitted.
Complex Z_dagger(const std::vector<Complex>& a, const std::vector<Complex>& b);

inline std::vector<Complex> negated(const std::vector<Complex>& s) {
  std::vector<Complex> out;
  out.reserve(s.size());
  for (const auto& v : s) out.push_back(-v);
  return out;
}

// One block of a partition of (A - S) + (B - T): a singleton from either
// side or a mixed pair; indices refer to the element lists handed to the
// partition enumerator.
struct PartitionBlock {
  int a = -1;
  int b = -1;
  bool is_pair() const { return a >= 0 && b >= 0; }
};
using BlockPartition = std::vector<PartitionBlock>;

// Enumerates every partition of na side-A elements and nb side-B elements
// into singletons and mixed pairs, each exactly once, in a fixed order
// (recursion over A indices; "leave single" before pairing, B ascending).
void for_each_block_partition(int na, int nb,
                              const std::function<void(const BlockPartition&)>& fn);

std::size_t count_block_partitions(int na, int nb);

// The four-case block weight: singletons see sums of z'/z over the chosen
// subsets, mixed pairs see (z'/z)'(alpha + beta).
Complex H_st(const PartitionBlock& w, const std::vector<Complex>& rest_a,
             const std::vector<Complex>& rest_b, const std::vector<Complex>& s,
             const std::vector<Complex>& t);

// Ordered shift sets feeding J*: A holds the right-contour values, B the
// negated left-contour values; within each list real parts must strictly
// increase (the spread-contour layout).
struct ComplexArgumentSets {
  std::vector<Complex> a;
  std::vector<Complex> b;
  int matrix_size = 0;

  void validate() const;
};

// Single layer |S| = |T| = m of the subset sum.
Complex jstar_layer(const ComplexArgumentSets& args, int m);

// J*_q: sum over |S| = |T| < q. q must be 1, 2 or 3.
Complex jstar_q(const ComplexArgumentSets& args, int q);

// Untruncated J* (all subset sizes); used by the contour-representation
// validator where no support restriction applies.
Complex jstar_untruncated(const ComplexArgumentSets& args);

// One line per (S, T, partition) term with its complex value.
void jstar_dump_terms(const ComplexArgumentSets& args, int q, std::ostream& os);

}  // namespace cuecorr
