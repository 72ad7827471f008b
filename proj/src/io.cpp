#include "cuecorr/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace cuecorr {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::string_view s) {
  std::ostringstream os;
  os << std::hex << fnv1a64(s);
  return os.str();
}

nlohmann::json RunConfig::to_json() const {
  return nlohmann::json{{"command", command},
                        {"n", n},
                        {"N", matrix_size},
                        {"t_ratio", t_ratio},
                        {"seed", seed},
                        {"num_samples", num_samples},
                        {"q", q},
                        {"budget", budget},
                        {"quad_tol", quad_tol},
                        {"window", window},
                        {"threads", threads},
                        {"engine", engine},
                        {"sign_rule", sign_rule},
                        {"i22_factor_two", i22_factor_two},
                        {"alpha", alpha},
                        {"beta", beta},
                        {"gamma", gamma},
                        {"delta", delta},
                        {"contour_delta", contour_delta},
                        {"contour_height", contour_height},
                        {"bins", bins},
                        {"rmax", rmax},
                        {"set_size_a", set_size_a},
                        {"set_size_b", set_size_b},
                        {"spread", spread},
                        {"suite", suite},
                        {"out_dir", out_dir}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  static const char* known[] = {
      "command", "n", "N", "t_ratio", "seed", "num_samples", "q", "budget",
      "quad_tol", "window", "threads", "engine", "sign_rule",
      "i22_factor_two", "alpha", "beta", "gamma", "delta", "contour_delta",
      "contour_height", "bins", "rmax", "set_size_a", "set_size_b", "spread",
      "suite", "out_dir"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("unknown config key: " + key);
  }
  auto get = [&](const char* key, auto& into) {
    if (j.contains(key)) j.at(key).get_to(into);
  };
  get("command", c.command);
  get("n", c.n);
  get("N", c.matrix_size);
  get("t_ratio", c.t_ratio);
  get("seed", c.seed);
  get("num_samples", c.num_samples);
  get("q", c.q);
  get("budget", c.budget);
  get("quad_tol", c.quad_tol);
  get("window", c.window);
  get("threads", c.threads);
  get("engine", c.engine);
  get("sign_rule", c.sign_rule);
  get("i22_factor_two", c.i22_factor_two);
  get("alpha", c.alpha);
  get("beta", c.beta);
  get("gamma", c.gamma);
  get("delta", c.delta);
  get("contour_delta", c.contour_delta);
  get("contour_height", c.contour_height);
  get("bins", c.bins);
  get("rmax", c.rmax);
  get("set_size_a", c.set_size_a);
  get("set_size_b", c.set_size_b);
  get("spread", c.spread);
  get("suite", c.suite);
  get("out_dir", c.out_dir);

  static const char* commands[] = {"sample", "paircorr", "ratios",
                                   "jstar",  "ncorr",    "validate"};
  bool ok = false;
  for (const char* k : commands) ok = ok || c.command == k;
  if (!ok) throw std::invalid_argument("unknown command: " + c.command);
  if (c.n < 1 || c.matrix_size < 1 || c.num_samples < 1 || c.bins < 1)
    throw std::invalid_argument("sizes must be positive");
  if (c.q < 1 || c.q > 3) throw std::invalid_argument("q must be 1, 2 or 3");
  return c;
}

std::string RunConfig::hash() const { return hash_hex(to_json().dump()); }

BlockSignRule RunConfig::block_sign_rule() const {
  if (sign_rule == "adjudicated-plus-one") return BlockSignRule::kAdjudicated;
  if (sign_rule == "correction-parity") return BlockSignRule::kCorrectionParity;
  if (sign_rule == "bracket-parity") return BlockSignRule::kBracketParity;
  throw std::invalid_argument("unknown sign rule: " + sign_rule);
}

nlohmann::json result_to_json(const StatisticResult& r,
                              const std::string& config_hash) {
  nlohmann::json j{{"value", r.value},
                   {"uncertainty", r.uncertainty},
                   {"bracket", r.bracket()},
                   {"kappa", r.kappa_value},
                   {"normalization", r.normalization},
                   {"n", r.n},
                   {"N", r.matrix_size},
                   {"T", r.big_t},
                   {"seed", r.seed},
                   {"engine", r.engine},
                   {"sign_rule", r.sign_rule},
                   {"config_hash", config_hash},
                   {"warnings", r.warnings}};
  if (!r.breakdown.empty()) {
    nlohmann::json b = nlohmann::json::object();
    for (const auto& [k, v] : r.breakdown) b[k] = v;
    j["breakdown"] = b;
  }
  return j;
}

nlohmann::json mean_to_json(const MeanResult& r,
                            const std::string& config_hash) {
  return nlohmann::json{{"value_re", r.value.real()},
                        {"value_im", r.value.imag()},
                        {"std_error", r.std_error},
                        {"rejected", r.rejected},
                        {"num_samples", r.num_samples},
                        {"config_hash", config_hash}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << content;
}

void append_csv_summary(const std::string& path, const StatisticResult& r,
                        const std::string& config_hash) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::runtime_error("cannot open " + path);
  if (fresh)
    f << "engine,n,N,T,seed,value,uncertainty,bracket,kappa,config_hash\n";
  f.precision(17);
  f << r.engine << "," << r.n << "," << r.matrix_size << "," << r.big_t << ","
    << r.seed << "," << r.value << "," << r.uncertainty << "," << r.bracket()
    << "," << r.kappa_value << "," << config_hash << "\n";
}

}  // namespace cuecorr
