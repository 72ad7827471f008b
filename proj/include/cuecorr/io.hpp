#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cuecorr/engines.hpp"

namespace cuecorr {

std::uint64_t fnv1a64(std::string_view s);
std::string hash_hex(std::string_view s);

// Run description shared by the CLI and the batch front end. Every output
// embeds hash() so results can be traced back to the exact configuration.
struct RunConfig {
  std::string command = "ncorr";  // sample|paircorr|ratios|jstar|ncorr|validate
  int n = 2;
  int matrix_size = 20;
  double t_ratio = 10.0;
  std::uint64_t seed = 1;
  int num_samples = 10000;
  int q = 1;
  double budget = 1.8;
  double quad_tol = 1e-9;
  int window = 3;
  int threads = 1;
  std::string engine = "q";  // q|empirical|det|theorem4
  std::string sign_rule = "adjudicated-plus-one";
  bool i22_factor_two = true;
  // ratios parameters
  double alpha = 0.2, beta = 0.2, gamma = 0.3, delta = 0.3;
  // contour parameters
  double contour_delta = 0.3;
  double contour_height = 0.0;  // 0: derived from big_t
  // pair-correlation parameters
  int bins = 60;
  double rmax = 3.0;
  // jstar dump parameters
  int set_size_a = 2, set_size_b = 2;
  double spread = 0.5;
  std::string suite = "all";
  std::string out_dir = ".";

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);  // throws on bad schema
  std::string hash() const;

  BlockSignRule block_sign_rule() const;
};

nlohmann::json result_to_json(const StatisticResult& r,
                              const std::string& config_hash);
nlohmann::json mean_to_json(const MeanResult& r,
                            const std::string& config_hash);

void write_text_file(const std::string& path, const std::string& content);

// one summary row per result; header written when the file is new
void append_csv_summary(const std::string& path, const StatisticResult& r,
                        const std::string& config_hash);

}  // namespace cuecorr
