#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "necrotic/config.hpp"

using namespace necrotic;

TEST_CASE("every key round-trips through its text form") {
  RunConfig cfg;
  cfg.params.sigma_hat = 0.3;
  cfg.params.mu = 2.0;
  cfg.R0 = 1.0 / 3.0;
  cfg.radii = {2.5, 7.125};
  cfg.eps = {0.005};
  cfg.out_dir = "results/run";
  const auto echo = config_echo(cfg);
  REQUIRE(echo.size() == config_keys().size());
  RunConfig copy;
  for (const auto& [k, v] : echo) set_config_value(copy, k, v);
  CHECK(config_echo(copy) == echo);
  CHECK(copy.R0 == cfg.R0);
  CHECK(copy.radii == cfg.radii);
  CHECK(get_config_value(cfg, "sigma_hat") == "0.3");
  CHECK(get_config_value(cfg, "eps") == "0.005");
}

TEST_CASE("echo follows the key order") {
  const auto echo = config_echo(RunConfig{});
  for (std::size_t i = 0; i < echo.size(); ++i) CHECK(echo[i].first == config_keys()[i]);
  CHECK(echo.front().first == "sigma_hat");
  CHECK(echo.back().first == "out_dir");
}

TEST_CASE("parser handles comments, blanks and whitespace") {
  const RunConfig cfg = parse_config(
      "# parameter set 2\n"
      "\n"
      "sigma_hat = 0.3   # threshold\n"
      "  mu=2\n"
      "radii = 3, 4.5 ,6\n"
      "out_dir = somewhere\n");
  CHECK(cfg.params.sigma_hat == 0.3);
  CHECK(cfg.params.mu == 2.0);
  CHECK(cfg.params.nu == 0.25);
  CHECK(cfg.radii == std::vector<double>{3.0, 4.5, 6.0});
  CHECK(cfg.out_dir == "somewhere");
}

TEST_CASE("parser rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_config("sigma = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("mu = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("mu = 1.0x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k_max = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k_max = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("out_dir =\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("radii = 1,,2\n"), ConfigError);
  RunConfig cfg;
  CHECK_THROWS_AS(set_config_value(cfg, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(get_config_value(cfg, "nope"), ConfigError);
}

TEST_CASE("an empty list selects the defaults") {
  const RunConfig cfg = parse_config("radii = 4\nradii =\n");
  CHECK(cfg.radii.empty());
  CHECK(get_config_value(cfg, "radii").empty());
}

TEST_CASE("load_config reads a file and layers over a base") {
  const std::string path = "test_config_tmp.cfg";
  {
    std::ofstream out(path);
    out << "nu = 0.1\nhorizon = 50\n";
  }
  RunConfig base;
  base.params.gamma = 4.0;
  const RunConfig cfg = load_config(path, base);
  std::remove(path.c_str());
  CHECK(cfg.params.nu == 0.1);
  CHECK(cfg.horizon == 50.0);
  CHECK(cfg.params.gamma == 4.0);
  CHECK_THROWS_AS(load_config("does/not/exist.cfg"), ConfigError);
}
