#pragma once

#include <string>
#include <utility>
#include <vector>

#include "necrotic/model.hpp"

namespace necrotic {

/// Unknown key or unparsable value in a config file or flag.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct RunConfig {
  RawParams params;
  double tol = 1e-12;  ///< residual tolerance for the scalar root solves

  // evolve
  double R0 = 0.0;  ///< 0 means R_s / 2
  double horizon = 200.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  int samples = 512;

  // spectrum
  int k_max = 256;
  int k_max_cap = 4096;
  int table_k_max = 64;
  int crosscheck_up_to = 32;

  // oracle
  int vi_n = 256;
  double vi_tol = 1e-12;
  double omega = 0.0;          ///< 0 selects the relaxation factor automatically
  std::vector<double> radii;   ///< empty means {1.5 R*, 2 R*, R_s}

  // mode-response
  int mode = 2;
  std::vector<double> eps{0.01, 0.02};
  int n_r = 256;
  int n_theta = 64;
  double axisym_tol = 1e-11;
  int zeta_k_max = 32;

  std::string out_dir = "out";
};

/// Config keys in a fixed order, as accepted by the parser and the CLI.
const std::vector<std::string>& config_keys();

/// Sets one key from its text form.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Text form of one key; round-trips through set_config_value.
std::string get_config_value(const RunConfig& cfg, const std::string& key);

/// Parses `key = value` lines; '#' starts a comment.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// All keys in config_keys() order.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg);

}  // namespace necrotic
