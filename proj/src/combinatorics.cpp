#include "cuecorr/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cuecorr {

namespace {

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

IndexSet set_minus(const IndexSet& a, int v) {
  IndexSet out;
  for (int x : a)
    if (x != v) out.push_back(x);
  return out;
}

// All subsets of s (as sorted lists), by bitmask in increasing order.
void for_each_subset_of(const IndexSet& s,
                        const std::function<void(const IndexSet&)>& fn,
                        bool proper) {
  const int n = static_cast<int>(s.size());
  const unsigned top = 1u << n;
  for (unsigned m = 0; m < top; ++m) {
    if (proper && m == top - 1) continue;
    IndexSet sub;
    for (int j = 0; j < n; ++j)
      if (m & (1u << j)) sub.push_back(s[j]);
    fn(sub);
  }
}

IndexSet complement_in(const IndexSet& whole, const IndexSet& part) {
  IndexSet out;
  std::set_difference(whole.begin(), whole.end(), part.begin(), part.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

std::pair<IndexSet, IndexSet> split_relative(const IndexSet& s, int pivot) {
  IndexSet below, above;
  for (int x : s) {
    if (x < pivot) below.push_back(x);
    if (x > pivot) above.push_back(x);
  }
  return {below, above};
}

void for_each_klm(int n, const std::function<void(const PartitionKLM&)>& fn) {
  if (n < 1) return;
  std::vector<int> label(n, 0);
  PartitionKLM p;
  while (true) {
    p.K.clear();
    p.L.clear();
    p.M.clear();
    for (int j = 0; j < n; ++j) {
      if (label[j] == 0) p.K.push_back(j + 1);
      if (label[j] == 1) p.L.push_back(j + 1);
      if (label[j] == 2) p.M.push_back(j + 1);
    }
    fn(p);
    int j = 0;
    while (j < n && label[j] == 2) label[j++] = 0;
    if (j == n) break;
    ++label[j];
  }
}

void for_each_pairing(const IndexSet& k, const IndexSet& l,
                      const std::function<void(const Pairing&)>& fn) {
  if (k.size() != l.size()) return;
  IndexSet perm = l;
  std::sort(perm.begin(), perm.end());
  Pairing p(k.size());
  do {
    for (std::size_t j = 0; j < k.size(); ++j) p[j] = {k[j], perm[j]};
    fn(p);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

void for_each_q2_config(const IndexSet& kset, const IndexSet& lset,
                        const std::function<void(const Q2Config&)>& fn) {
  if (kset.empty() || lset.empty()) return;
  for_each_subset_of(kset, [&](const IndexSet& r) {
    for_each_subset_of(lset, [&](const IndexSet& q) {
      if (r.size() != q.size()) return;
      Q2Config c;
      c.K = kset;
      c.L = lset;
      c.R = r;
      c.Q = q;
      c.Rc = complement_in(kset, r);
      c.Qc = complement_in(lset, q);
      for_each_pairing(r, q, [&](const Pairing& pr) {
        c.pairing = pr;
        for_each_subset_of(c.Rc, [&](const IndexSet& r1) {
          c.R1 = r1;
          c.R1c = complement_in(c.Rc, r1);
          for_each_subset_of(c.Qc, [&](const IndexSet& q1) {
            c.Q1 = q1;
            c.Q1c = complement_in(c.Qc, q1);
            for (int k : c.R1c) {
              for (int l : c.Q1c) {
                c.k = k;
                c.l = l;
                std::tie(c.R1_below, c.R1_above) = split_relative(c.R1, k);
                std::tie(c.Q1_below, c.Q1_above) = split_relative(c.Q1, l);
                c.S1 = set_union(set_union(c.R1c, c.R1_above),
                                 set_union(c.Q1_below, IndexSet{l}));
                c.S2 = set_union(set_union(c.R1_below, c.Q1_above), c.Q1c);
                c.sign =
                    (c.R1_above.size() + c.Q1_above.size()) % 2 == 0 ? 1 : -1;
                fn(c);
              }
            }
          }, /*proper=*/true);
        }, /*proper=*/true);
      });
    }, /*proper=*/true);
  }, /*proper=*/true);
}

void for_each_q3_config(const IndexSet& kset, const IndexSet& lset,
                        const std::function<void(const Q3Config&)>& fn) {
  if (kset.size() < 2 || lset.size() < 2) return;

  // four-way labeled split of s into (s1, s1c, s2, s2c) with s1, s2 nonempty
  auto for_each_split4 =
      [](const IndexSet& s,
         const std::function<void(const IndexSet&, const IndexSet&,
                                  const IndexSet&, const IndexSet&)>& g) {
        const int n = static_cast<int>(s.size());
        std::vector<int> label(n, 0);
        while (true) {
          IndexSet p1, p1c, p2, p2c;
          for (int j = 0; j < n; ++j) {
            switch (label[j]) {
              case 0: p1.push_back(s[j]); break;
              case 1: p1c.push_back(s[j]); break;
              case 2: p2.push_back(s[j]); break;
              default: p2c.push_back(s[j]); break;
            }
          }
          if (!p1.empty() && !p2.empty()) g(p1, p1c, p2, p2c);
          int j = 0;
          while (j < n && label[j] == 3) label[j++] = 0;
          if (j == n) break;
          ++label[j];
        }
      };

  for_each_subset_of(kset, [&](const IndexSet& r) {
    if (kset.size() - r.size() < 2) return;
    for_each_subset_of(lset, [&](const IndexSet& q) {
      if (r.size() != q.size()) return;
      if (lset.size() - q.size() < 2) return;
      Q3Config c;
      c.K = kset;
      c.L = lset;
      c.R = r;
      c.Q = q;
      c.Rc = complement_in(kset, r);
      c.Qc = complement_in(lset, q);
      for_each_pairing(r, q, [&](const Pairing& pr) {
        c.pairing = pr;
        for_each_split4(c.Rc, [&](const IndexSet& r1, const IndexSet& r1c,
                                  const IndexSet& r2, const IndexSet& r2c) {
          c.R1 = r1;
          c.R1c = r1c;
          c.R2 = r2;
          c.R2c = r2c;
          for_each_split4(c.Qc, [&](const IndexSet& q1, const IndexSet& q1c,
                                    const IndexSet& q2, const IndexSet& q2c) {
            c.Q1 = q1;
            c.Q1c = q1c;
            c.Q2 = q2;
            c.Q2c = q2c;
            for (int k1 : c.R1) {
              for (int k2 : c.R2) {
                if (!(k2 > k1)) continue;
                for (int l1 : c.Q1) {
                  for (int l2 : c.Q2) {
                    if (!(l2 > l1)) continue;
                    c.k1 = k1;
                    c.k2 = k2;
                    c.l1 = l1;
                    c.l2 = l2;
                    std::tie(c.R1_below, c.R1_above) = split_relative(c.R1, k1);
                    std::tie(c.R2_below, c.R2_above) = split_relative(c.R2, k2);
                    std::tie(c.Q1_below, c.Q1_above) = split_relative(c.Q1, l1);
                    std::tie(c.Q2_below, c.Q2_above) = split_relative(c.Q2, l2);
                    c.K1 = set_union(c.R1, c.Q1c);
                    c.K2 = set_union(c.R2, c.Q2c);
                    c.L1 = set_union(c.Q1, c.R1c);
                    c.L2 = set_union(c.Q2, c.R2c);
                    c.A = set_union(
                        set_union(c.R1_below, c.R2_below),
                        set_union(set_union(c.Q1_above, c.Q2_above),
                                  set_union(c.Q1c, c.Q2c)));
                    c.B = set_union(
                        set_union(c.R1_above, c.R2_above),
                        set_union(set_union(c.Q1_below, c.Q2_below),
                                  set_union(c.R1c, c.R2c)));
                    c.sign = (c.R1_above.size() + c.R2_above.size() +
                              c.Q1_above.size() + c.Q2_above.size()) %
                                     2 ==
                                 0
                                 ? 1
                                 : -1;
                    fn(c);
                  }
                }
              }
            }
          });
        });
      });
    }, /*proper=*/false);
  }, /*proper=*/false);
}

std::size_t count_q2_configs(const IndexSet& k, const IndexSet& l) {
  std::size_t n = 0;
  for_each_q2_config(k, l, [&](const Q2Config&) { ++n; });
  return n;
}

std::size_t count_q3_configs(const IndexSet& k, const IndexSet& l) {
  std::size_t n = 0;
  for_each_q3_config(k, l, [&](const Q3Config&) { ++n; });
  return n;
}

std::string config_census_csv(int n) {
  std::map<std::pair<std::size_t, std::size_t>,
           std::pair<std::size_t, std::size_t>>
      census;
  for_each_klm(n, [&](const PartitionKLM& p) {
    auto key = std::make_pair(p.K.size(), p.L.size());
    auto& cell = census[key];
    cell.first += count_q2_configs(p.K, p.L);
    cell.second += count_q3_configs(p.K, p.L);
  });
  std::ostringstream os;
  os << "n,sizeK,sizeL,q2_configs,q3_configs\n";
  for (const auto& [key, val] : census)
    os << n << "," << key.first << "," << key.second << "," << val.first << ","
       << val.second << "\n";
  return os.str();
}

}  // namespace cuecorr
