#include "cuecorr/engines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "cuecorr/haar.hpp"
#include "cuecorr/interp.hpp"
#include "cuecorr/zfun.hpp"

namespace cuecorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// chunked sample loop with a thread-count-independent reduction order
// ---------------------------------------------------------------------------
template <typename PerSample>
std::pair<double, double> chunked_mean(int num_samples, int threads,
                                       const PerSample& value_of) {
  const int chunk = 256;
  const int nchunks = (num_samples + chunk - 1) / chunk;
  std::vector<double> sums(nchunks, 0.0), sums2(nchunks, 0.0);
  auto run = [&](int c) {
    const int lo = c * chunk, hi = std::min(num_samples, lo + chunk);
    double s = 0.0, s2 = 0.0;
    for (int i = lo; i < hi; ++i) {
      const double v = value_of(i);
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    sums2[c] = s2;
  };
  if (threads <= 1) {
    for (int c = 0; c < nchunks; ++c) run(c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1))
          run(c);
      });
    for (auto& t : pool) t.join();
  }
  double s = 0.0, s2 = 0.0;
  for (int c = 0; c < nchunks; ++c) {
    s += sums[c];
    s2 += sums2[c];
  }
  const double mean = s / num_samples;
  double var = s2 / num_samples - mean * mean;
  var *= static_cast<double>(num_samples) /
         std::max(1, num_samples - 1);
  return {mean, std::sqrt(std::max(0.0, var) / num_samples)};
}

std::string set_to_string(const IndexSet& s) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << "}";
  return os.str();
}

int parity_sign(std::size_t m) { return m % 2 == 0 ? 1 : -1; }

// integral over [0, rho]^{|K|} of prod xi_j * Phi(sum xi_j (e_kj - e_lj))
QuadResult block1_term(const TestFunctionBundle& bundle, int n,
                       const Pairing& pairing, double tol) {
  const double rho = bundle.phi.rho;
  const int d = static_cast<int>(pairing.size());
  if (d == 0) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    return {bundle.phi(x), 0.0, true};
  }
  ConstrainedDomain dom;
  dom.lo = Eigen::VectorXd::Zero(d);
  dom.hi = Eigen::VectorXd::Constant(d, rho);
  Eigen::VectorXd x(n);
  auto f = [&](const Eigen::VectorXd& v) {
    x.setZero();
    double w = 1.0;
    for (int j = 0; j < d; ++j) {
      x[pairing[j].first - 1] += v[j];
      x[pairing[j].second - 1] -= v[j];
      w *= v[j];
    }
    return w * bundle.phi(x);
  };
  return integrate(f, dom, tol);
}

struct BlockSigns {
  int block1 = 1;
  int correction = 1;
};

BlockSigns signs_for(BlockSignRule rule, std::size_t l_size) {
  const int pl = parity_sign(l_size);
  switch (rule) {
    case BlockSignRule::kAdjudicated: return {1, 1};
    case BlockSignRule::kCorrectionParity: return {1, pl};
    default: return {pl, pl};
  }
}

// variable slots for the correction-term integrals
struct SlotMap {
  std::vector<int> slot;  // 1-based index -> slot, -1 if absent
  int dim = 0;

  explicit SlotMap(int n) : slot(n + 1, -1) {}
  int add(int index) {
    slot[index] = dim;
    return dim++;
  }
  double sum_over(const IndexSet& s, const Eigen::VectorXd& v) const {
    double acc = 0.0;
    for (int j : s) acc += v[slot[j]];
    return acc;
  }
  void fill_a(Eigen::VectorXd& weights, const IndexSet& s, double w) const {
    for (int j : s) weights[slot[j]] += w;
  }
};

IndexSet minus_elt(const IndexSet& s, int v) {
  IndexSet out;
  for (int x : s)
    if (x != v) out.push_back(x);
  return out;
}

IndexSet join(std::initializer_list<const IndexSet*> sets) {
  IndexSet out;
  for (const auto* s : sets) out.insert(out.end(), s->begin(), s->end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ratios
// ---------------------------------------------------------------------------

Complex cue_moment_sum(int matrix_size, Complex x) {
  Complex acc = 0.0;
  for (int k = 0; k <= matrix_size; ++k)
    acc += std::exp(-static_cast<double>(k) * x);
  return acc;
}

Complex ratios_closed(int matrix_size, Complex alpha, Complex beta,
                      Complex gamma, Complex delta) {
  const double n = matrix_size;
  const Complex first = z_fn(alpha + beta) * z_fn(gamma + delta) /
                        (z_fn(alpha + delta) * z_fn(beta + gamma));
  const Complex second = std::exp(-n * (alpha + beta)) *
                         z_fn(-beta - alpha) * z_fn(gamma + delta) /
                         (z_fn(-beta + delta) * z_fn(-alpha + gamma));
  return first + second;
}

MeanResult ratios_mc(int matrix_size, Complex alpha, Complex beta,
                     Complex gamma, Complex delta, int num_samples,
                     std::uint64_t seed, int threads) {
  if (!(gamma.real() > 0.0) || !(delta.real() > 0.0))
    throw std::invalid_argument("gamma and delta must have positive real part");

  const Complex sa = std::exp(-alpha), sb = std::exp(-beta);
  const Complex sg = std::exp(-gamma), sd = std::exp(-delta);

  const int chunk = 256;
  const int nchunks = (num_samples + chunk - 1) / chunk;
  std::vector<Complex> csum(nchunks, Complex{0, 0});
  std::vector<double> cabs2(nchunks, 0.0);
  std::vector<std::int64_t> crej(nchunks, 0);

  auto run = [&](int c) {
    const int lo = c * chunk, hi = std::min(num_samples, lo + chunk);
    Complex s{0, 0};
    double a2 = 0.0;
    std::int64_t rej = 0;
    for (int i = lo; i < hi; ++i) {
      EigenphaseSample es = sample_haar_eigenphases(matrix_size, seed, i);
      Complex lam_a{1, 0}, lam_b{1, 0}, lam_g{1, 0}, lam_d{1, 0};
      for (int j = 0; j < matrix_size; ++j) {
        const Complex e{std::cos(es.phases[j]), std::sin(es.phases[j])};
        lam_a *= 1.0 - sa * e;
        lam_g *= 1.0 - sg * e;
        lam_b *= 1.0 - sb * std::conj(e);
        lam_d *= 1.0 - sd * std::conj(e);
      }
      if (std::abs(lam_g) < 1e-12 || std::abs(lam_d) < 1e-12) {
        ++rej;
        continue;
      }
      const Complex r = lam_a * lam_b / (lam_g * lam_d);
      s += r;
      a2 += std::norm(r);
    }
    csum[c] = s;
    cabs2[c] = a2;
    crej[c] = rej;
  };
  if (threads <= 1) {
    for (int c = 0; c < nchunks; ++c) run(c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1))
          run(c);
      });
    for (auto& t : pool) t.join();
  }

  MeanResult out;
  out.num_samples = num_samples;
  Complex sum{0, 0};
  double abs2 = 0.0;
  for (int c = 0; c < nchunks; ++c) {
    sum += csum[c];
    abs2 += cabs2[c];
    out.rejected += crej[c];
  }
  const std::int64_t kept = num_samples - out.rejected;
  if (kept > 0) {
    out.value = sum / static_cast<double>(kept);
    const double var =
        std::max(0.0, abs2 / kept - std::norm(out.value)) *
        static_cast<double>(kept) / std::max<std::int64_t>(1, kept - 1);
    out.std_error = std::sqrt(var / kept);
  }
  return out;
}

// ---------------------------------------------------------------------------
// restricted-support statistic evaluators
// ---------------------------------------------------------------------------

QuadResult i11_term(const TestFunctionBundle& bundle, int n,
                    const Q2Config& cfg, const EngineOptions& opt) {
  const double rho = bundle.phi.rho;
  SlotMap sm(n);

  std::vector<int> q_slots;
  for (const auto& [r, q] : cfg.pairing) {
    (void)r;
    q_slots.push_back(sm.add(q));
  }
  const IndexSet rc_vars = minus_elt(cfg.Rc, cfg.k);
  const IndexSet qc_vars = minus_elt(cfg.Qc, cfg.l);
  for (int j : rc_vars) sm.add(j);
  for (int j : qc_vars) sm.add(j);
  const int l_slot = sm.add(cfg.l);

  ConstrainedDomain dom;
  dom.lo = Eigen::VectorXd::Zero(sm.dim);
  dom.hi = Eigen::VectorXd::Constant(sm.dim, rho);
  dom.lo[l_slot] = -rho;

  // xi_l + sum_{R1c\{k}} xi + sum_{Q1<l} xi + 1 < sum_{Q1>l} xi
  LinearConstraint cond;
  cond.c0 = 1.0;
  cond.a = Eigen::VectorXd::Zero(sm.dim);
  cond.b = Eigen::VectorXd::Zero(sm.dim);
  cond.a[l_slot] = 1.0;
  sm.fill_a(cond.a, minus_elt(cfg.R1c, cfg.k), 1.0);
  sm.fill_a(cond.a, cfg.Q1_below, 1.0);
  sm.fill_a(cond.b, cfg.Q1_above, 1.0);
  dom.constraints.push_back(cond);

  // the factor equals the (negative) condition expression
  const IndexSet fac_plus = join({&cfg.R1c, &cfg.Q1_below});
  const IndexSet fac_plus_vars = minus_elt(fac_plus, cfg.k);

  // e_k coefficient: the S2 side drops l (the derivation's set), the S1 side
  // drops k; see the decisions record for the statement-vs-derivation gap.
  const IndexSet s2_vars = minus_elt(cfg.S2, cfg.l);
  const IndexSet s1_vars = minus_elt(cfg.S1, cfg.k);

  Eigen::VectorXd x(n);
  auto f = [&](const Eigen::VectorXd& v) {
    x.setZero();
    for (std::size_t j = 0; j < cfg.pairing.size(); ++j) {
      const double xq = v[q_slots[j]];
      x[cfg.pairing[j].first - 1] = xq;
      x[cfg.pairing[j].second - 1] = xq;
    }
    for (int j : rc_vars) x[j - 1] = v[sm.slot[j]];
    for (int j : qc_vars) x[j - 1] = v[sm.slot[j]];
    x[cfg.l - 1] = v[l_slot];
    x[cfg.k - 1] = sm.sum_over(s2_vars, v) - sm.sum_over(s1_vars, v);
    const double w = bundle.phi(x);
    if (w == 0.0) return 0.0;
    const double fac = v[l_slot] + 1.0 + sm.sum_over(fac_plus_vars, v) -
                       sm.sum_over(cfg.Q1_above, v);
    double pq = 1.0;
    for (int s : q_slots) pq *= -v[s];
    return pq * fac * w;
  };

  QuadResult r = integrate(f, dom, opt.quad_tol);
  r.value *= cfg.sign;
  return r;
}

QuadResult i22_term(const TestFunctionBundle& bundle, int n,
                    const Q3Config& cfg, int family,
                    const EngineOptions& opt) {
  if (family < 1 || family > 6)
    throw std::invalid_argument("family must be in 1..6");
  const double rho = bundle.phi.rho;
  const bool with_k2 = family >= 3;
  SlotMap sm(n);

  std::vector<int> q_slots;
  for (const auto& [r, q] : cfg.pairing) {
    (void)r;
    q_slots.push_back(sm.add(q));
  }
  IndexSet bulk = join({&cfg.A, &cfg.B});  // (Rc u Qc) \ {k1,k2,l1,l2}
  for (int j : bulk) sm.add(j);
  const int l1_slot = sm.add(cfg.l1);
  const int l2_slot = sm.add(cfg.l2);
  const int k2_slot = with_k2 ? sm.add(cfg.k2) : -1;

  ConstrainedDomain dom;
  dom.lo = Eigen::VectorXd::Zero(sm.dim);
  dom.hi = Eigen::VectorXd::Constant(sm.dim, rho);
  dom.lo[l1_slot] = -rho;
  dom.lo[l2_slot] = -rho;
  if (with_k2) dom.lo[k2_slot] = -rho;

  const IndexSet q1_le = join({&cfg.Q1_below});  // plus l1 handled via slot
  const IndexSet q2_le = join({&cfg.Q2_below});

  // shared gates: 1 + sum_{Q1<=l1 u R1c} - sum_{Q1>l1} < 0, and the L2 analog
  auto shared_gate = [&](const IndexSet& q_le, int l_slot, const IndexSet& r1c,
                         const IndexSet& q_above) {
    LinearConstraint c;
    c.c0 = 1.0;
    c.a = Eigen::VectorXd::Zero(sm.dim);
    c.b = Eigen::VectorXd::Zero(sm.dim);
    c.a[l_slot] = 1.0;
    sm.fill_a(c.a, q_le, 1.0);
    sm.fill_a(c.a, r1c, 1.0);
    sm.fill_a(c.b, q_above, 1.0);
    return c;
  };
  dom.constraints.push_back(shared_gate(q1_le, l1_slot, cfg.R1c, cfg.Q1_above));
  dom.constraints.push_back(shared_gate(q2_le, l2_slot, cfg.R2c, cfg.Q2_above));

  // family-specific positivity gate written as expr > 0; expr is also the
  // linear factor for families 3..6
  struct Lin {
    double c0 = 0.0;
    Eigen::VectorXd w;
  };
  auto lin = [&]() {
    Lin l;
    l.w = Eigen::VectorXd::Zero(sm.dim);
    return l;
  };
  auto add = [&](Lin& l, const IndexSet& s, double wgt) {
    for (int j : s) l.w[sm.slot[j]] += wgt;
  };
  auto value_of = [&](const Lin& l, const Eigen::VectorXd& v) {
    return l.c0 + l.w.dot(v);
  };
  auto gate_positive = [&](const Lin& l) {
    LinearConstraint c;
    c.c0 = -l.c0;
    c.a = -l.w;
    c.b = Eigen::VectorXd::Zero(sm.dim);
    dom.constraints.push_back(c);
  };

  Lin fam_factor = lin();
  if (family == 3) {
    // sum_{R2 >= k2} - 1 - sum_{R2<k2 u Q2c}
    fam_factor.c0 = -1.0;
    add(fam_factor, cfg.R2_above, 1.0);
    fam_factor.w[k2_slot] += 1.0;
    add(fam_factor, cfg.R2_below, -1.0);
    add(fam_factor, cfg.Q2c, -1.0);
    gate_positive(fam_factor);
  } else if (family == 4) {
    add(fam_factor, cfg.R2_above, 1.0);
    fam_factor.w[k2_slot] += 1.0;
    add(fam_factor, cfg.R1c, 1.0);
    add(fam_factor, cfg.Q1_below, 1.0);
    fam_factor.w[l1_slot] += 1.0;
    add(fam_factor, cfg.R2_below, -1.0);
    add(fam_factor, cfg.Q2c, -1.0);
    add(fam_factor, cfg.Q1_above, -1.0);
    gate_positive(fam_factor);
  } else if (family == 5) {
    add(fam_factor, cfg.R2_above, 1.0);
    fam_factor.w[k2_slot] += 1.0;
    add(fam_factor, cfg.R2c, 1.0);
    add(fam_factor, cfg.Q2_below, 1.0);
    fam_factor.w[l2_slot] += 1.0;
    add(fam_factor, cfg.R2_below, -1.0);
    add(fam_factor, cfg.Q2c, -1.0);
    add(fam_factor, cfg.Q2_above, -1.0);
    gate_positive(fam_factor);
  } else if (family == 6) {
    // 1 + sum over K2 u L1 u L2 in signed variables (the derivation keeps the
    // L2 block that the statement display drops)
    fam_factor.c0 = 1.0;
    add(fam_factor, cfg.R2_above, 1.0);
    fam_factor.w[k2_slot] += 1.0;
    add(fam_factor, cfg.R1c, 1.0);
    add(fam_factor, cfg.Q1_below, 1.0);
    fam_factor.w[l1_slot] += 1.0;
    add(fam_factor, cfg.R2c, 1.0);
    add(fam_factor, cfg.Q2_below, 1.0);
    fam_factor.w[l2_slot] += 1.0;
    add(fam_factor, cfg.R2_below, -1.0);
    add(fam_factor, cfg.Q2c, -1.0);
    add(fam_factor, cfg.Q1_above, -1.0);
    add(fam_factor, cfg.Q2_above, -1.0);
    gate_positive(fam_factor);
  }

  // the two shared-gate expressions also form the family-1/2 product factor
  Lin g1 = lin(), g2 = lin();
  g1.c0 = 1.0;
  add(g1, cfg.Q1_below, 1.0);
  g1.w[l1_slot] += 1.0;
  add(g1, cfg.R1c, 1.0);
  add(g1, cfg.Q1_above, -1.0);
  g2.c0 = 1.0;
  add(g2, cfg.Q2_below, 1.0);
  g2.w[l2_slot] += 1.0;
  add(g2, cfg.R2c, 1.0);
  add(g2, cfg.Q2_above, -1.0);

  // e_{k1} / e_{k2} coefficients
  Lin c1 = lin(), c2 = lin();
  if (family == 1) {
    add(c1, cfg.R1_below, 1.0);
    add(c1, cfg.Q1c, 1.0);
    add(c1, cfg.Q2_above, 1.0);
    add(c1, cfg.R1_above, -1.0);
    add(c1, cfg.Q2_below, -1.0);
    c1.w[l2_slot] -= 1.0;
    add(c1, cfg.R2c, -1.0);
    add(c2, cfg.R2_below, 1.0);
    add(c2, cfg.Q2c, 1.0);
    add(c2, cfg.Q1_above, 1.0);
    add(c2, cfg.R2_above, -1.0);
    add(c2, cfg.Q1_below, -1.0);
    c2.w[l1_slot] -= 1.0;
    add(c2, cfg.R1c, -1.0);
  } else if (family == 2) {
    add(c1, cfg.R1_below, 1.0);
    add(c1, cfg.Q1c, 1.0);
    add(c1, cfg.Q1_above, 1.0);
    add(c1, cfg.R1_above, -1.0);
    add(c1, cfg.Q1_below, -1.0);
    c1.w[l1_slot] -= 1.0;
    add(c1, cfg.R1c, -1.0);
    add(c2, cfg.R2_below, 1.0);
    add(c2, cfg.Q2c, 1.0);
    add(c2, cfg.Q2_above, 1.0);
    add(c2, cfg.R2_above, -1.0);
    add(c2, cfg.Q2_below, -1.0);
    c2.w[l2_slot] -= 1.0;
    add(c2, cfg.R2c, -1.0);
  } else {
    // common coefficient sum_A - sum_{B u {k2, l1, l2}}
    add(c1, cfg.A, 1.0);
    add(c1, cfg.B, -1.0);
    c1.w[k2_slot] -= 1.0;
    c1.w[l1_slot] -= 1.0;
    c1.w[l2_slot] -= 1.0;
  }

  const double fam_sign = (family == 3 || family == 6) ? -1.0 : 1.0;
  const double fam_scale =
      (family >= 3 && opt.i22_factor_two) ? 2.0 : 1.0;

  Eigen::VectorXd x(n);
  auto f = [&](const Eigen::VectorXd& v) {
    x.setZero();
    for (std::size_t j = 0; j < cfg.pairing.size(); ++j) {
      const double xq = v[q_slots[j]];
      x[cfg.pairing[j].first - 1] = xq;
      x[cfg.pairing[j].second - 1] = xq;
    }
    for (int j : bulk) x[j - 1] = v[sm.slot[j]];
    x[cfg.l1 - 1] = v[l1_slot];
    x[cfg.l2 - 1] = v[l2_slot];
    if (with_k2) x[cfg.k2 - 1] = v[k2_slot];
    x[cfg.k1 - 1] = value_of(c1, v);
    if (!with_k2) x[cfg.k2 - 1] = value_of(c2, v);
    const double w = bundle.phi(x);
    if (w == 0.0) return 0.0;
    double fac;
    if (family <= 2)
      fac = value_of(g1, v) * value_of(g2, v);
    else
      fac = value_of(fam_factor, v);
    double pq = 1.0;
    for (int s : q_slots) pq *= -v[s];
    return pq * fac * w;
  };

  QuadResult r = integrate(f, dom, opt.quad_tol);
  r.value *= cfg.sign * fam_sign * fam_scale;
  return r;
}

namespace {

StatisticResult q_statistic_impl(const TestFunctionBundle& bundle, int n,
                                 int q, const EngineOptions& opt) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n > opt.index_cap)
    throw std::invalid_argument("n exceeds the configured index cap");
  if (bundle.n() != n) throw std::invalid_argument("bundle dimension mismatch");
  const double budget = bundle.phi.budget();
  if (!(budget < 2.0 * q)) {
    std::ostringstream os;
    os << "support budget " << budget << " requires q > " << q;
    throw std::invalid_argument(os.str());
  }

  StatisticResult res;
  res.n = n;
  res.matrix_size = bundle.matrix_size;
  res.big_t = bundle.big_t;
  res.engine = "q" + std::to_string(q);
  res.sign_rule = to_string(opt.sign_rule);
  const KappaResult kap = kappa_convolution(bundle);
  res.kappa_value = kap.value;
  res.normalization =
      kap.value * bundle.matrix_size * bundle.big_t / kTwoPi;

  double bracket = 0.0, err = 0.0;
  const bool keep = opt.keep_breakdown && n <= 4;

  for_each_klm(n, [&](const PartitionKLM& p) {
    const BlockSigns bs = signs_for(opt.sign_rule, p.L.size());
    const std::string tag =
        "K" + set_to_string(p.K) + "L" + set_to_string(p.L);

    if (p.K.size() == p.L.size()) {
      double blk = 0.0;
      for_each_pairing(p.K, p.L, [&](const Pairing& pr) {
        QuadResult t = block1_term(bundle, n, pr, opt.quad_tol);
        blk += t.value;
        err += t.error;
      });
      bracket += bs.block1 * blk;
      if (keep && blk != 0.0)
        res.breakdown.emplace_back(tag + "|pairs", bs.block1 * blk);
    }

    if (q >= 2) {
      double blk = 0.0;
      for_each_q2_config(p.K, p.L, [&](const Q2Config& cfg) {
        QuadResult t = i11_term(bundle, n, cfg, opt);
        blk += t.value;
        err += t.error;
      });
      bracket += bs.correction * blk;
      if (keep && blk != 0.0)
        res.breakdown.emplace_back(tag + "|i11", bs.correction * blk);
    }

    if (q >= 3) {
      double blk = 0.0;
      for_each_q3_config(p.K, p.L, [&](const Q3Config& cfg) {
        for (int family = 1; family <= 6; ++family) {
          QuadResult t = i22_term(bundle, n, cfg, family, opt);
          blk += t.value;
          err += t.error;
        }
      });
      bracket += bs.correction * blk;
      if (keep && blk != 0.0)
        res.breakdown.emplace_back(tag + "|i22", bs.correction * blk);
    }
  });

  if (keep)
    for (auto& [k, v] : res.breakdown) v *= res.normalization;
  res.value = bracket * res.normalization;
  res.uncertainty = err * res.normalization +
                    std::abs(bracket) * kap.error * bundle.matrix_size *
                        bundle.big_t / kTwoPi;
  res.warnings = bundle.warnings;
  res.warnings.push_back("leading order only; subleading terms are O(N)+O(T)");
  return res;
}

}  // namespace

StatisticResult q1_statistic(const TestFunctionBundle& bundle, int n,
                             const EngineOptions& opt) {
  return q_statistic_impl(bundle, n, 1, opt);
}
StatisticResult q2_statistic(const TestFunctionBundle& bundle, int n,
                             const EngineOptions& opt) {
  return q_statistic_impl(bundle, n, 2, opt);
}
StatisticResult q3_statistic(const TestFunctionBundle& bundle, int n,
                             const EngineOptions& opt) {
  return q_statistic_impl(bundle, n, 3, opt);
}

// ---------------------------------------------------------------------------
// sampling evaluator
// ---------------------------------------------------------------------------

namespace {

void fft_radix2(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 1.0 : -1.0) * kTwoPi / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        Complex u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// samples psi on a centered grid and returns f(D_k) = int psi e^{-2pi i D xi}
// on the centered frequency grid (spacing 1 / (M dxi))
std::vector<double> transform_grid_1d(const std::function<double(double)>& psi,
                                      std::size_t m, double dxi) {
  std::vector<Complex> a(m);
  const auto half = static_cast<std::ptrdiff_t>(m / 2);
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = (static_cast<std::ptrdiff_t>(i) - half) * dxi;
    a[i] = psi(xi);
  }
  // shift so index 0 holds xi=0
  std::rotate(a.begin(), a.begin() + half, a.end());
  fft_radix2(a, false);
  std::rotate(a.begin(), a.begin() + half, a.end());
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = a[k].real() * dxi;
  return out;
}

struct EmpiricalGrids {
  int n = 0;
  double dcut = 0.0;        // |D| beyond which f is treated as zero
  double window_tail = 0.0; // max |f| in the region the window drops
  UniformGrid1D g2;         // n=2: kappa2(2 pi D / (N T)) * f2(D)
  UniformGrid2D f3;
  UniformGrid2D k3;
};

double kappa_shift2(const TestFunctionBundle& b, double delta) {
  auto f = [&](double t) {
    return b.g[1](t) * b.g[0](-t) * std::cos(delta * t);
  };
  const double w = b.g[1].half_width;
  return kTwoPi * integrate_1d(f, -w, w, 1e-12).value;
}

double kappa_shift3(const TestFunctionBundle& b, double d2, double d3) {
  const double w2 = b.g[1].half_width, w3 = b.g[2].half_width;
  auto outer = [&](double t2) {
    auto inner = [&](double t3) {
      return b.g[1](t2) * b.g[2](t3) * b.g[0](-t2 - t3) *
             std::cos(d2 * t2 + d3 * t3);
    };
    return integrate_1d(inner, -w3, w3, 1e-13).value;
  };
  return kTwoPi * integrate_1d(outer, -w2, w2, 1e-11).value;
}

EmpiricalGrids build_empirical_grids(const TestFunctionBundle& bundle, int n,
                                     const EngineOptions& opt) {
  EmpiricalGrids eg;
  eg.n = n;
  const double rho = bundle.phi.rho;
  const double nt = bundle.matrix_size * bundle.big_t;
  const double dscale = kTwoPi / nt;

  if (n == 2) {
    const double pad = 48.0 * rho + 16.0;
    const double drange = 64.0;
    std::size_t m = 1;
    while (m < static_cast<std::size_t>(2.0 * drange * pad)) m <<= 1;
    const double dxi = pad / static_cast<double>(m);
    auto psi = [&](double xi) {
      Eigen::Vector2d v(xi, -xi);
      return bundle.phi(v);
    };
    auto f2 = transform_grid_1d(psi, m, dxi);
    const double dstep = 1.0 / (static_cast<double>(m) * dxi);
    const auto half = static_cast<std::ptrdiff_t>(m / 2);
    eg.dcut = static_cast<double>(half - 1) * dstep;
    std::vector<double> vals(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double d = (static_cast<std::ptrdiff_t>(k) - half) * dstep;
      vals[k] = kappa_shift2(bundle, d * dscale) * f2[k];
    }
    eg.g2 = UniformGrid1D(-static_cast<double>(half) * dstep,
                          (static_cast<double>(m - 1) - half) * dstep,
                          std::move(vals));
    const double wedge = bundle.matrix_size * (opt.window - 0.5);
    double tail = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double d = std::abs((static_cast<std::ptrdiff_t>(k) - half) * dstep);
      if (d >= wedge) tail = std::max(tail, std::abs(f2[k]));
    }
    eg.window_tail = tail;
    return eg;
  }

  if (n == 3) {
    const double pad = 12.0 * rho + 6.0;
    const double drange = 28.0;
    std::size_t m = 1;
    while (m < static_cast<std::size_t>(2.0 * drange * pad)) m <<= 1;
    m = std::min<std::size_t>(m, 2048);
    const double dxi = pad / static_cast<double>(m);
    const auto half = static_cast<std::ptrdiff_t>(m / 2);
    // separable FFT: rows then columns of psi(xi2, xi3)
    std::vector<Complex> row(m);
    std::vector<std::vector<Complex>> stage(m, std::vector<Complex>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const double x2 = (static_cast<std::ptrdiff_t>(i) - half) * dxi;
      for (std::size_t j = 0; j < m; ++j) {
        const double x3 = (static_cast<std::ptrdiff_t>(j) - half) * dxi;
        Eigen::Vector3d v(x2, x3, -x2 - x3);
        row[j] = bundle.phi(v);
      }
      std::rotate(row.begin(), row.begin() + half, row.end());
      fft_radix2(row, false);
      std::rotate(row.begin(), row.begin() + half, row.end());
      stage[i] = row;
    }
    std::vector<double> grid(m * m);
    std::vector<Complex> col(m);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < m; ++i) col[i] = stage[i][j];
      std::rotate(col.begin(), col.begin() + half, col.end());
      fft_radix2(col, false);
      std::rotate(col.begin(), col.begin() + half, col.end());
      for (std::size_t i = 0; i < m; ++i)
        grid[i * m + j] = col[i].real() * dxi * dxi;
    }
    const double dstep = 1.0 / (static_cast<double>(m) * dxi);
    const double lo = -static_cast<double>(half) * dstep;
    const double hi = (static_cast<double>(m - 1) - half) * dstep;
    eg.dcut = std::min(-lo, hi) * 0.999;
    eg.f3 = UniformGrid2D(lo, hi, m, lo, hi, m, std::move(grid));

    const int kn = 33;
    const double dmax = (opt.window + 1.2) * kTwoPi / bundle.big_t;
    std::vector<double> kv(kn * kn);
    for (int i = 0; i < kn; ++i)
      for (int j = 0; j < kn; ++j) {
        const double d2 = -dmax + 2.0 * dmax * i / (kn - 1);
        const double d3 = -dmax + 2.0 * dmax * j / (kn - 1);
        kv[i * kn + j] = kappa_shift3(bundle, d2, d3);
      }
    eg.k3 = UniformGrid2D(-dmax, dmax, kn, -dmax, dmax, kn, std::move(kv));

    const double wedge = bundle.matrix_size * (opt.window - 0.5);
    double tail = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = std::abs(lo + static_cast<double>(i) * dstep);
      if (d >= wedge)
        tail = std::max(tail, std::abs(eg.f3(lo + i * dstep, 0.0)));
    }
    eg.window_tail = tail;
    return eg;
  }

  throw std::invalid_argument("sampling evaluator supports n <= 3");
}

}  // namespace

StatisticResult empirical_ncorr(const TestFunctionBundle& bundle, int n,
                                int num_samples, std::uint64_t seed,
                                const EngineOptions& opt) {
  if (bundle.n() != n) throw std::invalid_argument("bundle dimension mismatch");
  if (n < 1 || n > 3)
    throw std::invalid_argument("sampling evaluator supports 1 <= n <= 3");
  if (num_samples < 1) throw std::invalid_argument("need samples");
  double width_sum = 0.0;
  for (const auto& g : bundle.g) width_sum += g.half_width;
  if (!(bundle.big_t > 4.0 * width_sum))
    throw std::invalid_argument(
        "big_t must dominate the summed bump widths for the exact shift sum");

  StatisticResult res;
  res.n = n;
  res.matrix_size = bundle.matrix_size;
  res.big_t = bundle.big_t;
  res.seed = seed;
  res.engine = "empirical";
  const KappaResult kap = kappa_convolution(bundle);
  res.kappa_value = kap.value;
  res.normalization = kap.value * bundle.matrix_size * bundle.big_t / kTwoPi;
  res.warnings = bundle.warnings;

  const int nn = bundle.matrix_size;
  const double tb = bundle.big_t;

  if (n == 1) {
    // the common-shift sum is exact and sample-independent here
    const double kappa1 = kTwoPi * bundle.g[0](0.0) * 1.0;
    res.value = (tb / kTwoPi) * nn * kappa1 * bundle.phi.at_zero();
    res.uncertainty = 0.0;
    return res;
  }

  EmpiricalGrids eg = build_empirical_grids(bundle, n, opt);
  if (eg.window_tail > 1e-12)
    res.warnings.push_back("window spillover metric " +
                           std::to_string(eg.window_tail));

  const int w = opt.window;
  const double dscale = kTwoPi / (nn * tb);

  auto per_sample = [&](int i) {
    EigenphaseSample es = sample_haar_eigenphases(nn, seed, i);
    const auto& th = es.phases;
    double acc = 0.0;
    if (n == 2) {
      for (int j1 = 0; j1 < nn; ++j1)
        for (int j2 = 0; j2 < nn; ++j2) {
          const double base = nn * (th[j2] - th[j1]) / kTwoPi;
          for (int d = -w; d <= w; ++d) {
            const double dd = base + nn * d;
            if (std::abs(dd) <= eg.dcut) acc += eg.g2(dd);
          }
        }
    } else {
      for (int j1 = 0; j1 < nn; ++j1)
        for (int j2 = 0; j2 < nn; ++j2) {
          const double b2 = nn * (th[j2] - th[j1]) / kTwoPi;
          for (int d2 = -w; d2 <= w; ++d2) {
            const double dd2 = b2 + nn * d2;
            if (std::abs(dd2) > eg.dcut) continue;
            for (int j3 = 0; j3 < nn; ++j3) {
              const double b3 = nn * (th[j3] - th[j1]) / kTwoPi;
              for (int d3 = -w; d3 <= w; ++d3) {
                const double dd3 = b3 + nn * d3;
                if (std::abs(dd3) > eg.dcut) continue;
                acc += eg.k3(dd2 * dscale, dd3 * dscale) * eg.f3(dd2, dd3);
              }
            }
          }
        }
    }
    return (tb / kTwoPi) * acc;
  };

  auto [mean, se] = chunked_mean(num_samples, opt.threads, per_sample);
  res.value = mean;
  res.uncertainty = se;
  return res;
}

// ---------------------------------------------------------------------------
// determinantal evaluator
// ---------------------------------------------------------------------------

namespace {

double f_real(const TestFunctionBundle& b, const Eigen::VectorXd& x) {
  Eigen::VectorXcd xc = x.cast<Complex>();
  return f_from_phi(b.phi, xc).real();
}

}  // namespace

StatisticResult detform_ncorr(const TestFunctionBundle& bundle, int n,
                              const EngineOptions& opt) {
  if (bundle.n() != n) throw std::invalid_argument("bundle dimension mismatch");
  if (n < 1 || n > 3)
    throw std::invalid_argument("determinantal evaluator supports n <= 3");

  StatisticResult res;
  res.n = n;
  res.matrix_size = bundle.matrix_size;
  res.big_t = bundle.big_t;
  res.engine = "detform";
  const KappaResult kap = kappa_convolution(bundle);
  res.kappa_value = kap.value;
  res.normalization = kap.value * bundle.matrix_size * bundle.big_t / kTwoPi;
  res.warnings = bundle.warnings;

  const int nn = bundle.matrix_size;
  const double tb = bundle.big_t;
  const int w = opt.window;
  double err = 0.0;

  if (n == 1) {
    auto f = [&](double u) { return h_from_g(bundle.g[0], u).real(); };
    auto r = integrate_1d(f, -40.0 * tb, 40.0 * tb, 1e-8, 20000);
    res.value = (nn / kTwoPi) * bundle.phi.at_zero() * r.value;
    res.uncertainty = (nn / kTwoPi) * bundle.phi.at_zero() * r.error;
    return res;
  }

  if (n == 2) {
    auto f2 = [&](double d) {
      Eigen::VectorXd x(2);
      x << 0.0, d;
      return f_real(bundle, x);
    };
    // same-base pairs (d = 0 is the repeated-index diagonal)
    double same = 0.0;
    for (int d = -w; d <= w; ++d)
      same += kappa_shift2(bundle, kTwoPi * d / tb) * f2(nn * d);
    same *= (tb / kTwoPi) * nn;
    res.breakdown.emplace_back("same-base", same);

    // distinct-base pairs against the kernel-determinant density
    const double taucut = kTwoPi * 32.0 / nn;
    auto integrand = [&](double tau) {
      const double s = kernel_sn(tau, nn);
      const double rho2 = std::pow(nn / kTwoPi, 2) - s * s;
      return f2(nn * tau / kTwoPi) * rho2 * tb *
             kappa_shift2(bundle, tau / tb);
    };
    auto r = integrate_1d(integrand, -taucut, taucut,
                          1e-7 * std::max(1.0, res.normalization), 6000);
    res.breakdown.emplace_back("distinct-base", r.value);
    err += r.error;
    res.value = same + r.value;
    res.uncertainty = err;
    return res;
  }

  // n == 3
  auto f3 = [&](double d2, double d3) {
    Eigen::VectorXd x(3);
    x << 0.0, d2, d3;
    return f_real(bundle, x);
  };
  const int kn = 17;
  const double dmax = (w + 1.2) * kTwoPi / tb;
  std::vector<double> kv(kn * kn);
  for (int i = 0; i < kn; ++i)
    for (int j = 0; j < kn; ++j)
      kv[i * kn + j] =
          kappa_shift3(bundle, -dmax + 2.0 * dmax * i / (kn - 1),
                       -dmax + 2.0 * dmax * j / (kn - 1));
  UniformGrid2D k3(-dmax, dmax, kn, -dmax, dmax, kn, std::move(kv));

  auto rho2 = [&](double tau) {
    const double s = kernel_sn(tau, nn);
    return std::pow(nn / kTwoPi, 2) - s * s;
  };
  auto rho3 = [&](double t2, double t3) {
    const double a = nn / kTwoPi;
    const double s12 = kernel_sn(t2, nn), s13 = kernel_sn(t3, nn),
                 s23 = kernel_sn(t3 - t2, nn);
    return a * a * a + 2.0 * s12 * s13 * s23 -
           a * (s12 * s12 + s13 * s13 + s23 * s23);
  };
  auto kfac = [&](double p2, double p3) { return k3(p2 / tb, p3 / tb); };
  auto ffac = [&](double p2, double p3) {
    return f3(nn * p2 / kTwoPi, nn * p3 / kTwoPi);
  };

  const double unit = tb / kTwoPi * nn;
  double total = 0.0;

  // all three slots on one extended index
  double e1 = unit * kfac(0, 0) * ffac(0, 0);
  res.breakdown.emplace_back("triple-same", e1);
  total += e1;

  const double taucut = kTwoPi * 24.0 / nn;
  const double tol_outer = 1e-7 * std::max(1.0, res.normalization);

  // one pair of slots shares an extended index; the lone slot sits on either
  // a shifted copy of the same base (discrete sum) or a distinct base
  // (kernel-determinant density)
  double e2 = 0.0;
  for (int c = 0; c < 3; ++c) {  // c: which pair of slots shares the index
    for (int d = -w; d <= w; ++d) {
      if (d == 0) continue;
      const double p2 = (c == 2) ? 0.0 : kTwoPi * d;  // pair {1,2}: slot2 at 0
      const double p3 = (c == 1) ? 0.0 : kTwoPi * d;
      e2 += unit * kfac(p2, p3) * ffac(p2, p3);
    }
    auto ig = [&](double tau) {
      const double a2 = (c == 2) ? 0.0 : tau;
      const double a3 = (c == 1) ? 0.0 : tau;
      return rho2(tau) * tb * kfac(a2, a3) * ffac(a2, a3);
    };
    auto r = integrate_1d(ig, -taucut, taucut, tol_outer, 4000);
    e2 += r.value;
    err += r.error;
  }
  res.breakdown.emplace_back("pair-same", e2);
  total += e2;

  // three distinct extended indices
  double e3 = 0.0;
  {
    // distinct bases: 2-d kernel-determinant integral
    Eigen::VectorXd lo(2), hi(2);
    lo << -taucut, -taucut;
    hi << taucut, taucut;
    ConstrainedDomain dom{lo, hi, {}};
    auto ig = [&](const Eigen::VectorXd& t) {
      return rho3(t[0], t[1]) * tb * kfac(t[0], t[1]) * ffac(t[0], t[1]);
    };
    auto r = integrate(ig, dom, tol_outer * 10.0);
    e3 += r.value;
    err += r.error;

    // one base-coincident pair among the three indices
    for (int paircase = 0; paircase < 3; ++paircase) {
      for (int d = -w; d <= w; ++d) {
        if (d == 0) continue;
        auto ig1 = [&](double tau) {
          double p2, p3;
          if (paircase == 0) {  // slots 1,2 same base (offset 2 pi d), slot 3 away
            p2 = kTwoPi * d;
            p3 = tau;
          } else if (paircase == 1) {  // slots 1,3 same base
            p2 = tau;
            p3 = kTwoPi * d;
          } else {  // slots 2,3 same base (relative 2 pi d)
            p2 = tau;
            p3 = tau + kTwoPi * d;
          }
          return rho2(tau) * tb * kfac(p2, p3) * ffac(p2, p3);
        };
        auto r1 = integrate_1d(ig1, -taucut, taucut, tol_outer, 2000);
        e3 += r1.value;
        err += r1.error;
      }
    }

    // all three on one base
    for (int d2 = -w; d2 <= w; ++d2)
      for (int d3 = -w; d3 <= w; ++d3) {
        if (d2 == 0 || d3 == 0 || d2 == d3) continue;
        e3 += unit * kfac(kTwoPi * d2, kTwoPi * d3) *
              ffac(kTwoPi * d2, kTwoPi * d3);
      }
  }
  res.breakdown.emplace_back("distinct", e3);
  total += e3;

  res.value = total;
  res.uncertainty = err;
  return res;
}

// ---------------------------------------------------------------------------
// truncated-contour evaluation of the subset-sum representation
// ---------------------------------------------------------------------------

StatisticResult theorem4_rhs_validation(const TestFunctionBundle& bundle,
                                        int n, double delta, double height,
                                        const EngineOptions& opt) {
  if (n < 1 || n > 2)
    throw std::invalid_argument("contour validation supports n in {1, 2}");
  if (bundle.n() != n) throw std::invalid_argument("bundle dimension mismatch");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");

  StatisticResult res;
  res.n = n;
  res.matrix_size = bundle.matrix_size;
  res.big_t = bundle.big_t;
  res.engine = "theorem4";
  const KappaResult kap = kappa_convolution(bundle);
  res.kappa_value = kap.value;
  res.normalization = kap.value * bundle.matrix_size * bundle.big_t / kTwoPi;
  res.warnings = bundle.warnings;

  const int nn = bundle.matrix_size;
  const double tb = bundle.big_t;
  double err = 0.0, tail = 0.0;
  double total = 0.0;

  for_each_klm(n, [&](const PartitionKLM& p) {
    // with one side of the subset sum empty and the other not, every block
    // weight vanishes and the whole term is identically zero
    if (p.K.empty() != p.L.empty()) return;
    // contour offsets, spread so the z'/z arguments stay off the pole lines
    std::vector<double> off(n, 0.0);
    for (std::size_t r = 0; r < p.K.size(); ++r)
      off[p.K[r] - 1] = delta * (1.0 + 0.25 * static_cast<double>(r));
    for (std::size_t r = 0; r < p.L.size(); ++r)
      off[p.L[r] - 1] = -delta * (1.0 + 0.25 * static_cast<double>(r));

    // K contours keep their textbook (upward) orientation; L and M contours
    // are traversed downward. Net effect: (-1)^{|L|+|M|} times the upward
    // value, which cancels the alternating prefactor. Pinned by the n = 1
    // reduction against the sampling engine.
    const double pref =
        std::pow(static_cast<double>(nn), static_cast<double>(p.M.size())) /
        std::pow(kTwoPi, n);

    // The transform factor decays superpolynomially in t1 - t2, so for n = 2
    // the mass sits in a band |t1 - t2| <= taucut. Work in sum/difference
    // coordinates: slow h factors along the sum, the oscillatory transform
    // across the band.
    const double taucut =
        (n == 2) ? std::max(8.0, 80.0 / (nn * bundle.phi.rho)) : 0.0;

    // per-variable h factors along the contour, cached as splines in t
    const int hn = 8193;
    const double hrange = height + taucut;
    std::vector<UniformGrid1D> h_re, h_im;
    for (int j = 0; j < n; ++j) {
      std::vector<double> re(hn), im(hn);
      for (int i = 0; i < hn; ++i) {
        const double t = -hrange + 2.0 * hrange * i / (hn - 1);
        const Complex z(off[j], t);
        const Complex v = h_from_g(bundle.g[j], Complex(0, 1) * z / tb);
        re[i] = v.real();
        im[i] = v.imag();
      }
      h_re.emplace_back(-hrange, hrange, std::move(re));
      h_im.emplace_back(-hrange, hrange, std::move(im));
    }

    UniformGrid1D f_re, f_im;
    if (n == 2) {
      const int fn = 16385;
      const double rho = bundle.phi.rho;
      std::vector<double> re(fn), im(fn);
      const double dre = off[0] - off[1];
      for (int i = 0; i < fn; ++i) {
        const double tau = -taucut + 2.0 * taucut * i / (fn - 1);
        const Complex wdiff(dre, tau);
        auto g = [&](double xi) {
          Eigen::Vector2d v(xi, -xi);
          return bundle.phi(v) * std::exp(static_cast<double>(nn) * wdiff * xi);
        };
        auto rr = integrate_1d_complex(g, -rho, rho, 1e-11);
        re[i] = rr.value.real();
        im[i] = rr.value.imag();
      }
      f_re = UniformGrid1D(-taucut, taucut, std::move(re));
      f_im = UniformGrid1D(-taucut, taucut, std::move(im));
    }

    auto integrand = [&](double t1, double t2) {
      const Complex z1(off[0], t1);
      const Complex z2(n == 2 ? off[1] : 0.0, t2);
      ComplexArgumentSets args;
      args.matrix_size = nn;
      for (int k : p.K) args.a.push_back(k == 1 ? z1 : z2);
      for (int l : p.L) args.b.push_back(-(l == 1 ? z1 : z2));
      Complex jv = jstar_untruncated(args);
      if (jv == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
      Complex fv;
      if (n == 1) {
        fv = bundle.phi.at_zero();
        fv *= Complex(h_re[0](t1), h_im[0](t1));
      } else {
        fv = Complex(f_re(t1 - t2), f_im(t1 - t2));
        fv *= Complex(h_re[0](t1), h_im[0](t1));
        fv *= Complex(h_re[1](t2), h_im[1](t2));
      }
      return jv * fv;
    };

    Complex path;
    if (n == 1) {
      auto g = [&](double t) { return integrand(t, 0.0); };
      auto r = integrate_1d_complex(g, -height, height, opt.quad_tol, 20000);
      path = r.value;
      err += pref * r.error;
      tail += pref * (std::abs(g(height)) + std::abs(g(-height))) * height;
    } else {
      // t1 = (u + tau) / 2, t2 = (u - tau) / 2, Jacobian 1/2
      auto outer = [&](double u) {
        auto g = [&](double tau) {
          return integrand(0.5 * (u + tau), 0.5 * (u - tau));
        };
        auto r = integrate_1d_complex(g, -taucut, taucut,
                                      opt.quad_tol / (4.0 * height), 2000);
        return r.value;
      };
      auto r = integrate_1d_complex(outer, -2.0 * height, 2.0 * height,
                                    opt.quad_tol, 4000);
      path = 0.5 * r.value;
      err += pref * 0.5 * r.error;
      tail += pref *
              (std::abs(outer(2.0 * height)) + std::abs(outer(-2.0 * height))) *
              height;
    }
    total += pref * path.real();
    if (std::abs(path.imag()) > 1e-6 * std::abs(path.real()) + 1e-9)
      res.warnings.push_back("nonvanishing imaginary part in a contour term");
  });

  res.value = total;
  res.uncertainty = err + tail;
  if (tail > opt.quad_tol)
    res.warnings.push_back("contour tail metric " + std::to_string(tail));
  return res;
}

}  // namespace cuecorr
