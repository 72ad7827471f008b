#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cuecorr/engines.hpp"
#include "cuecorr/haar.hpp"
#include "cuecorr/io.hpp"
#include "cuecorr/zfun.hpp"

namespace {

using namespace cuecorr;

EngineOptions options_from(const RunConfig& cfg) {
  EngineOptions opt;
  opt.sign_rule = cfg.block_sign_rule();
  opt.i22_factor_two = cfg.i22_factor_two;
  opt.quad_tol = cfg.quad_tol;
  opt.window = cfg.window;
  opt.threads = cfg.threads;
  return opt;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/" + name;
}

int run_sample(const RunConfig& cfg) {
  std::vector<EigenphaseSample> samples;
  samples.reserve(cfg.num_samples);
  for (int i = 0; i < cfg.num_samples; ++i)
    samples.push_back(
        sample_haar_eigenphases(cfg.matrix_size, cfg.seed, i));
  write_samples_csv(out_path(cfg, "samples.csv"), samples);
  std::cout << "wrote " << samples.size() << " samples to "
            << out_path(cfg, "samples.csv") << "\n";
  return 0;
}

int run_paircorr(const RunConfig& cfg) {
  auto h = empirical_pair_correlation(cfg.matrix_size, cfg.num_samples,
                                      cfg.seed, cfg.bins, cfg.rmax,
                                      cfg.threads);
  std::ostringstream csv;
  csv << "r,mean_count,std_error,predicted\n";
  csv.precision(12);
  int bad = 0;
  for (int b = 0; b < cfg.bins; ++b) {
    csv << h.bin_left[b] << "," << h.mean_count[b] << "," << h.std_error[b]
        << "," << h.predicted[b] << "\n";
    if (std::abs(h.mean_count[b] - h.predicted[b]) >
        5.0 * std::max(h.std_error[b], 1e-12))
      ++bad;
  }
  write_text_file(out_path(cfg, "paircorr.csv"), csv.str());
  std::cout << "pair correlation: " << cfg.bins - bad << "/" << cfg.bins
            << " bins within 5 standard errors of the limit curve\n"
            << "table written to " << out_path(cfg, "paircorr.csv") << "\n";
  return bad == 0 ? 0 : 3;
}

int run_ratios(const RunConfig& cfg) {
  const Complex a{cfg.alpha, 0.0}, b{cfg.beta, 0.0}, g{cfg.gamma, 0.0},
      d{cfg.delta, 0.0};
  auto mc = ratios_mc(cfg.matrix_size, a, b, g, d, cfg.num_samples, cfg.seed,
                      cfg.threads);
  const Complex closed = ratios_closed(cfg.matrix_size, a, b, g, d);
  nlohmann::json j = mean_to_json(mc, cfg.hash());
  j["closed_re"] = closed.real();
  j["closed_im"] = closed.imag();
  j["abs_deviation"] = std::abs(mc.value - closed);
  write_text_file(out_path(cfg, "ratios.json"), j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return std::abs(mc.value - closed) < 4.0 * mc.std_error ? 0 : 3;
}

int run_jstar(const RunConfig& cfg) {
  ComplexArgumentSets args;
  args.matrix_size = cfg.matrix_size;
  for (int i = 0; i < cfg.set_size_a; ++i)
    args.a.emplace_back(cfg.spread * (1.0 + 0.25 * i), 0.1 * i);
  for (int i = 0; i < cfg.set_size_b; ++i)
    args.b.emplace_back(cfg.spread * (1.0 + 0.25 * i), -0.07 * i);
  args.validate();
  std::ostringstream os;
  os.precision(12);
  jstar_dump_terms(args, cfg.q, os);
  os << "total J*_" << cfg.q << " = " << jstar_q(args, cfg.q) << "\n";
  write_text_file(out_path(cfg, "jstar.txt"), os.str());
  std::cout << os.str();
  return 0;
}

int run_ncorr(const RunConfig& cfg) {
  auto bundle = make_canonical_bundle(cfg.n, cfg.matrix_size, cfg.budget,
                                      cfg.t_ratio);
  const EngineOptions opt = options_from(cfg);
  StatisticResult r;
  if (cfg.engine == "q") {
    if (cfg.q == 1)
      r = q1_statistic(bundle, cfg.n, opt);
    else if (cfg.q == 2)
      r = q2_statistic(bundle, cfg.n, opt);
    else
      r = q3_statistic(bundle, cfg.n, opt);
  } else if (cfg.engine == "empirical") {
    r = empirical_ncorr(bundle, cfg.n, cfg.num_samples, cfg.seed, opt);
  } else if (cfg.engine == "det") {
    r = detform_ncorr(bundle, cfg.n, opt);
  } else if (cfg.engine == "theorem4") {
    const double height = cfg.contour_height > 0.0
                              ? cfg.contour_height
                              : 30.0 * bundle.big_t;
    r = theorem4_rhs_validation(bundle, cfg.n, cfg.contour_delta, height, opt);
  } else {
    throw std::invalid_argument("unknown engine: " + cfg.engine);
  }
  r.seed = cfg.seed;
  nlohmann::json j = result_to_json(r, cfg.hash());
  write_text_file(out_path(cfg, "ncorr.json"), j.dump(2) + "\n");
  append_csv_summary(out_path(cfg, "ncorr_summary.csv"), r, cfg.hash());
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_validate(const RunConfig& cfg) {
  int failures = 0;
  auto report = [&](const std::string& name, bool pass,
                    const std::string& detail) {
    std::cout << (pass ? "PASS  " : "FAIL  ") << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!pass) ++failures;
  };
  const bool all = cfg.suite == "all";

  if (all || cfg.suite == "counts") {
    bool ok = true;
    for (int n = 1; n <= 7; ++n) {
      std::size_t c = 0;
      for_each_klm(n, [&](const PartitionKLM&) { ++c; });
      std::size_t want = 1;
      for (int i = 0; i < n; ++i) want *= 3;
      ok = ok && c == want;
    }
    std::size_t pairs = 0;
    for_each_pairing({1, 3}, {2, 4}, [&](const Pairing&) { ++pairs; });
    ok = ok && pairs == 2;
    report("combinatorial counts", ok, "");
  }

  if (all || cfg.suite == "poles") {
    bool ok = true;
    std::ostringstream detail;
    for (int trial = 0; trial < 20 && ok; ++trial) {
      CounterRng rng(cfg.seed, 900 + trial);
      const Complex z1(0.4 + 0.2 * rng.uniform01(), rng.uniform01() - 0.5);
      const Complex zl(-0.5 - 0.2 * rng.uniform01(), rng.uniform01() - 0.5);
      double prev = 0.0;
      for (int k = 2; k <= 4; ++k) {
        const double eps = std::pow(10.0, -k);
        const Complex z2 = z1 + Complex(0.0, eps);
        const Complex sym = zlog_deriv(z2 - z1) + zlog_deriv(z1 - z2);
        // symmetrized simple-pole pair stays bounded as the gap closes
        const double mag = std::abs(sym + Complex(zl.real(), 0) * 0.0);
        if (k > 2 && mag > 2.0 * prev + 1e-9) ok = false;
        prev = mag;
      }
    }
    report("pole cancellation", ok, detail.str());
  }

  if (all || cfg.suite == "support") {
    auto b2 = make_canonical_bundle(2, cfg.matrix_size, 1.8, cfg.t_ratio);
    const EngineOptions opt = options_from(cfg);
    double worst = 0.0;
    for_each_klm(2, [&](const PartitionKLM& p) {
      for_each_q2_config(p.K, p.L, [&](const Q2Config& c) {
        worst = std::max(worst, std::abs(i11_term(b2, 2, c, opt).value));
      });
    });
    report("support vanishing (budget 1.8, n=2)", worst < 1e-10,
           "max |i11| = " + std::to_string(worst));
  }

  if (all || cfg.suite == "concordance") {
    auto bundle = make_canonical_bundle(2, cfg.matrix_size, 1.8, cfg.t_ratio);
    EngineOptions opt = options_from(cfg);
    auto emp = empirical_ncorr(bundle, 2, cfg.num_samples, cfg.seed, opt);
    auto q1 = q1_statistic(bundle, 2, opt);
    const double dev = std::abs(emp.bracket() - q1.bracket());
    const double tol = 3.0 * emp.uncertainty / emp.normalization +
                       0.5 / bundle.big_t + q1.uncertainty / q1.normalization;
    std::ostringstream os;
    os << "empirical " << emp.bracket() << " vs q1 " << q1.bracket();
    report("engine concordance (n=2, budget 1.8)", dev < tol, os.str());
  }

  if (all || cfg.suite == "theorem4") {
    auto bundle = make_canonical_bundle(1, cfg.matrix_size, 1.8, cfg.t_ratio);
    EngineOptions opt = options_from(cfg);
    auto emp = empirical_ncorr(bundle, 1, 1, cfg.seed, opt);
    auto t4 = theorem4_rhs_validation(bundle, 1, cfg.contour_delta,
                                      30.0 * bundle.big_t, opt);
    const double dev = std::abs(emp.value - t4.value);
    const double tol = 3.0 * emp.uncertainty + t4.uncertainty +
                       1e-3 * std::abs(emp.value);
    std::ostringstream os;
    os << "empirical " << emp.value << " vs contour " << t4.value;
    report("contour representation (n=1)", dev < tol, os.str());
  }

  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-point correlation statistics of Haar-random unitary "
               "eigenphases: sampling, determinantal, and restricted-support "
               "subset-sum evaluators"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override");

  nlohmann::json overrides = nlohmann::json::object();
  auto track = [&overrides](const std::string& key) {
    return [&overrides, key](const std::string& v) {
      // numbers arrive as strings from CLI11; parse when possible
      try {
        overrides[key] = nlohmann::json::parse(v);
      } catch (...) {
        overrides[key] = v;
      }
    };
  };

  auto add_common = [&](CLI::App* sub) {
    sub->add_option_function<std::string>("--n", track("n"), "tuple size");
    sub->add_option_function<std::string>("--N", track("N"), "matrix size");
    sub->add_option_function<std::string>("--t-ratio", track("t_ratio"),
                                          "slow-scale / N ratio");
    sub->add_option_function<std::string>("--seed", track("seed"), "rng seed");
    sub->add_option_function<std::string>("--num-samples",
                                          track("num_samples"), "sample count");
    sub->add_option_function<std::string>("--q", track("q"), "truncation layer");
    sub->add_option_function<std::string>("--budget", track("budget"),
                                          "transform support budget");
    sub->add_option_function<std::string>("--quad-tol", track("quad_tol"),
                                          "quadrature tolerance");
    sub->add_option_function<std::string>("--window", track("window"),
                                          "relative period-shift window");
    sub->add_option_function<std::string>("--threads", track("threads"),
                                          "worker threads");
    sub->add_option_function<std::string>("--engine", track("engine"),
                                          "q|empirical|det|theorem4");
    sub->add_option_function<std::string>("--sign-rule", track("sign_rule"),
                                          "bracket sign variant");
    sub->add_option_function<std::string>(
        "--i22-factor-two", track("i22_factor_two"), "derivation factor of 2");
    sub->add_option_function<std::string>("--alpha", track("alpha"), "");
    sub->add_option_function<std::string>("--beta", track("beta"), "");
    sub->add_option_function<std::string>("--gamma", track("gamma"), "");
    sub->add_option_function<std::string>("--delta", track("delta"), "");
    sub->add_option_function<std::string>("--contour-delta",
                                          track("contour_delta"), "");
    sub->add_option_function<std::string>("--contour-height",
                                          track("contour_height"), "");
    sub->add_option_function<std::string>("--bins", track("bins"), "");
    sub->add_option_function<std::string>("--rmax", track("rmax"), "");
    sub->add_option_function<std::string>("--set-size-a", track("set_size_a"),
                                          "");
    sub->add_option_function<std::string>("--set-size-b", track("set_size_b"),
                                          "");
    sub->add_option_function<std::string>("--spread", track("spread"), "");
    sub->add_option_function<std::string>("--suite", track("suite"),
                                          "validation suite");
    sub->add_option_function<std::string>("--out-dir", track("out_dir"),
                                          "output directory");
  };

  for (const char* name : {"sample", "paircorr", "ratios", "jstar", "ncorr",
                           "validate"})
    add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);

  cuecorr::RunConfig cfg;
  try {
    nlohmann::json merged = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw std::invalid_argument("cannot read " + config_path);
      f >> merged;
    }
    for (const auto& [k, v] : overrides.items()) merged[k] = v;
    merged["command"] = app.get_subcommands().front()->get_name();
    if (!merged.contains("out_dir")) {
      if (const char* env = std::getenv("CUECORR_OUTDIR"))
        merged["out_dir"] = env;
    }
    cfg = cuecorr::RunConfig::from_json(merged);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cfg.command == "sample") return run_sample(cfg);
    if (cfg.command == "paircorr") return run_paircorr(cfg);
    if (cfg.command == "ratios") return run_ratios(cfg);
    if (cfg.command == "jstar") return run_jstar(cfg);
    if (cfg.command == "ncorr") return run_ncorr(cfg);
    return run_validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
