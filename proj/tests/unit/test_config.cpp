#include <doctest.h>

#include "hycal/config.hpp"
#include "hycal/error.hpp"

using namespace hycal;
using nlohmann::json;

TEST_CASE("run config with every key") {
  const auto doc = json::parse(R"({
    "dataset": "data/x.hyeb",
    "setting": {"kind": "CrossScaleImbalance", "shot_min": 2, "shot_max": 9},
    "setting_name": "cs",
    "fusion": "concat",
    "alpha": 20, "beta": 5, "lambda": 0.01, "gamma": 2,
    "scorers": ["CosineOnly", "DynamicHybrid"],
    "seeds": [3, 4],
    "order_seed": 8,
    "grids": {"alpha": [1, 2]},
    "output_dir": "results"
  })");
  const auto cfg = parse_run_config(doc, "/base");
  CHECK(cfg.dataset == std::filesystem::path("/base/data/x.hyeb"));
  CHECK(cfg.setting.kind == SettingKind::CrossScaleImbalance);
  CHECK(cfg.setting.shot_max == 9);
  CHECK(cfg.setting_name == "cs");
  CHECK(cfg.session.fusion == FusionMode::Concat);
  CHECK(cfg.session.hybrid.alpha == 20.0);
  CHECK(cfg.session.reg.gamma == 2.0);
  CHECK(cfg.scorers == std::vector<Scorer>{Scorer::CosineOnly, Scorer::DynamicHybrid});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(cfg.order_seed == 8u);
  CHECK(cfg.sweep.alpha_grid == std::vector<double>{1, 2});
  CHECK(cfg.output_dir == std::filesystem::path("/base/results"));
}

TEST_CASE("run config defaults") {
  const auto cfg = parse_run_config(json::parse(R"({"dataset": "x.hyeb", "setting": "FixedShotFSCIL"})"), ".");
  CHECK(cfg.setting.fixed_shots == 5);
  CHECK(cfg.setting_name == "FixedShotFSCIL");
  CHECK(cfg.scorers == std::vector<Scorer>{Scorer::DynamicHybrid});
  CHECK(!cfg.order_seed);
  const auto grid = parse_run_config(json::parse(R"({"dataset": "x", "grids": "default"})"), ".");
  CHECK(grid.sweep.alpha_grid.size() == 6);
  CHECK(grid.sweep.beta_grid.size() == 3);
}

TEST_CASE("run config errors") {
  CHECK_THROWS_AS(parse_run_config(json::parse(R"({"setting": "FixedShotFSCIL"})"), "."), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json::parse(R"({"dataset": "x", "colour": 1})"), "."), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json::parse(R"({"dataset": "x", "alpha": "big"})"), "."), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json::parse(R"({"dataset": "x", "scorers": ["Best"]})"), "."), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json::parse(R"({"dataset": "x", "beta": -1})"), "."), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.json"), IoError);
}

TEST_CASE("synth config assigns ids in name order") {
  const auto doc = json::parse(R"({
    "dim": 4, "seed": 2,
    "domains": [
      {"name": "zeta", "n_classes": 2, "anisotropy": 4},
      {"name": "alpha", "n_classes": 3, "cov_scale": 0}
    ]
  })");
  const auto cfg = parse_synth_config(doc, std::nullopt);
  REQUIRE(cfg.domains.size() == 2);
  CHECK(cfg.domains[0].name == "alpha");
  CHECK(cfg.domains[0].domain_id == 0);
  CHECK(cfg.domains[0].cov_scale == 0.0);
  CHECK(cfg.domains[1].first_class_id == 3);
  CHECK(cfg.domains[1].spectrum.maxCoeff() / cfg.domains[1].spectrum.minCoeff() == doctest::Approx(4.0));
  CHECK(parse_synth_config(doc, 9).domains[0].seed == 9);
  const auto bench = parse_synth_config(json::parse(R"({"dim": 4, "benchmark": {"n_domains": 3}})"), 1);
  CHECK(bench.domains.size() == 3);
}
