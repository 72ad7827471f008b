#include "cuecorr/zfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace cuecorr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleRadius = 1e-12;

double distance_to_pole(Complex x) {
  const double k = std::round(x.imag() / kTwoPi);
  return std::abs(x - Complex(0.0, kTwoPi * k));
}
}  // namespace

Complex z_fn(Complex x) {
  if (distance_to_pole(x) < kPoleRadius) {
    std::ostringstream os;
    os << "z(x) pole at x = (" << x.real() << ", " << x.imag() << ")";
    throw pole_error(os.str());
  }
  return 1.0 / (1.0 - std::exp(-x));
}

Complex zlog_deriv(Complex x) { return 1.0 - z_fn(x); }

Complex zlog_deriv_prime(Complex x) {
  const Complex z = z_fn(x);
  return z * z - z;
}

Complex Z_product(const std::vector<Complex>& a,
                  const std::vector<Complex>& b) {
  Complex p = 1.0;
  for (const auto& alpha : a)
    for (const auto& beta : b) p *= z_fn(alpha + beta);
  return p;
}

Complex Z_dagger(const std::vector<Complex>& a,
                 const std::vector<Complex>& b) {
  Complex p = 1.0;
  for (const auto& alpha : a)
    for (const auto& beta : b) {
      const Complex arg = alpha + beta;
      if (arg.real() == 0.0 && arg.imag() == 0.0) continue;
      p *= z_fn(arg);
    }
  return p;
}

void for_each_block_partition(
    int na, int nb, const std::function<void(const BlockPartition&)>& fn) {
  BlockPartition blocks;
  std::vector<bool> b_used(nb, false);

  std::function<void(int)> rec = [&](int ia) {
    if (ia == na) {
      const std::size_t base = blocks.size();
      for (int j = 0; j < nb; ++j)
        if (!b_used[j]) blocks.push_back({-1, j});
      fn(blocks);
      blocks.resize(base);
      return;
    }
    blocks.push_back({ia, -1});
    rec(ia + 1);
    blocks.pop_back();
    for (int j = 0; j < nb; ++j) {
      if (b_used[j]) continue;
      b_used[j] = true;
      blocks.push_back({ia, j});
      rec(ia + 1);
      blocks.pop_back();
      b_used[j] = false;
    }
  };
  rec(0);
}

std::size_t count_block_partitions(int na, int nb) {
  std::size_t total = 0;
  for_each_block_partition(na, nb, [&](const BlockPartition&) { ++total; });
  return total;
}

Complex H_st(const PartitionBlock& w, const std::vector<Complex>& rest_a,
             const std::vector<Complex>& rest_b, const std::vector<Complex>& s,
             const std::vector<Complex>& t) {
  if (w.is_pair())
    return zlog_deriv_prime(rest_a[w.a] + rest_b[w.b]);
  if (w.a >= 0) {
    const Complex alpha = rest_a[w.a];
    Complex sum = 0.0;
    for (const auto& sh : s) sum += zlog_deriv(alpha - sh);
    for (const auto& th : t) sum -= zlog_deriv(alpha + th);
    return sum;
  }
  const Complex beta = rest_b[w.b];
  Complex sum = 0.0;
  for (const auto& th : t) sum += zlog_deriv(beta - th);
  for (const auto& sh : s) sum -= zlog_deriv(beta + sh);
  return sum;
}

void ComplexArgumentSets::validate() const {
  for (std::size_t j = 1; j < a.size(); ++j)
    if (!(a[j].real() > a[j - 1].real()))
      throw std::invalid_argument("A real parts must strictly increase");
  for (std::size_t j = 1; j < b.size(); ++j)
    if (!(b[j].real() > b[j - 1].real()))
      throw std::invalid_argument("B real parts must strictly increase");
}

namespace {

void for_each_subset(int n, int size, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(idx.size()) == size) {
      fn(idx);
      return;
    }
    for (int j = start; j <= n - (size - static_cast<int>(idx.size())); ++j) {
      idx.push_back(j);
      rec(j + 1);
      idx.pop_back();
    }
  };
  rec(0);
}

// One (S, T) term: exponential prefactor, Z ratio, partition sum over the
// remaining elements.
Complex subset_term(const ComplexArgumentSets& args,
                    const std::vector<int>& sel_a,
                    const std::vector<int>& sel_b,
                    std::ostream* dump) {
  std::vector<Complex> s, t, rest_a, rest_b;
  std::vector<bool> in_s(args.a.size(), false), in_t(args.b.size(), false);
  for (int j : sel_a) {
    s.push_back(args.a[j]);
    in_s[j] = true;
  }
  for (int j : sel_b) {
    t.push_back(args.b[j]);
    in_t[j] = true;
  }
  for (std::size_t j = 0; j < args.a.size(); ++j)
    if (!in_s[j]) rest_a.push_back(args.a[j]);
  for (std::size_t j = 0; j < args.b.size(); ++j)
    if (!in_t[j]) rest_b.push_back(args.b[j]);

  Complex expo = 0.0;
  for (const auto& v : s) expo += v;
  for (const auto& v : t) expo += v;
  const Complex pref =
      std::exp(-static_cast<double>(args.matrix_size) * expo) *
      Z_product(s, t) * Z_product(negated(s), negated(t)) /
      (Z_dagger(s, negated(s)) * Z_dagger(t, negated(t)));

  Complex inner = 0.0;
  for_each_block_partition(
      static_cast<int>(rest_a.size()), static_cast<int>(rest_b.size()),
      [&](const BlockPartition& blocks) {
        Complex prod = 1.0;
        for (const auto& w : blocks) prod *= H_st(w, rest_a, rest_b, s, t);
        inner += prod;
        if (dump) {
          *dump << "    partition";
          for (const auto& w : blocks) {
            *dump << " {";
            if (w.a >= 0) *dump << "a" << w.a;
            if (w.is_pair()) *dump << ",";
            if (w.b >= 0) *dump << "b" << w.b;
            *dump << "}";
          }
          *dump << " -> (" << (pref * prod).real() << ","
                << (pref * prod).imag() << ")\n";
        }
      });
  return pref * inner;
}

Complex jstar_sum(const ComplexArgumentSets& args, int max_excl,
                  std::ostream* dump) {
  Complex total = 0.0;
  const int top = std::min({max_excl - 1, static_cast<int>(args.a.size()),
                            static_cast<int>(args.b.size())});
  for (int m = 0; m <= top; ++m) {
    for_each_subset(static_cast<int>(args.a.size()), m,
                    [&](const std::vector<int>& sa) {
      for_each_subset(static_cast<int>(args.b.size()), m,
                      [&](const std::vector<int>& sb) {
        if (dump) {
          *dump << "term S={";
          for (int j : sa) *dump << "a" << j << " ";
          *dump << "} T={";
          for (int j : sb) *dump << "b" << j << " ";
          *dump << "}\n";
        }
        total += subset_term(args, sa, sb, dump);
      });
    });
  }
  return total;
}

}  // namespace

Complex jstar_layer(const ComplexArgumentSets& args, int m) {
  Complex total = 0.0;
  for_each_subset(static_cast<int>(args.a.size()), m,
                  [&](const std::vector<int>& sa) {
    for_each_subset(static_cast<int>(args.b.size()), m,
                    [&](const std::vector<int>& sb) {
      total += subset_term(args, sa, sb, nullptr);
    });
  });
  return total;
}

Complex jstar_q(const ComplexArgumentSets& args, int q) {
  if (q < 1 || q > 3) throw std::invalid_argument("q must be 1, 2 or 3");
  return jstar_sum(args, q, nullptr);
}

Complex jstar_untruncated(const ComplexArgumentSets& args) {
  const int full =
      std::min(static_cast<int>(args.a.size()), static_cast<int>(args.b.size()));
  return jstar_sum(args, full + 2, nullptr);
}

void jstar_dump_terms(const ComplexArgumentSets& args, int q,
                      std::ostream& os) {
  if (q < 1 || q > 3) throw std::invalid_argument("q must be 1, 2 or 3");
  jstar_sum(args, q, &os);
}

}  // namespace cuecorr
