#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hycal/harness.hpp"
#include "hycal/synthetic.hpp"

namespace hycal {

// Run/sweep configuration file. See docs/config.md for the schema.
struct RunConfig {
  std::filesystem::path dataset;
  SettingSpec setting;
  std::string setting_name;
  SessionConfig session;
  std::vector<Scorer> scorers{Scorer::DynamicHybrid};
  std::vector<std::uint64_t> seeds{0};
  std::optional<std::uint64_t> order_seed;
  SweepSpec sweep;
  std::filesystem::path output_dir{"out"};
};

// Relative paths inside the file resolve against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Synthetic dataset description for the `synth` subcommand.
struct SynthConfig {
  std::vector<SyntheticDomainSpec> domains;
};

// Domains listed by name receive ids in lexicographic name order and class
// ids in that same order; `seed` overrides any seed in the file.
SynthConfig parse_synth_config(const nlohmann::json& doc, std::optional<std::uint64_t> seed);

}  // namespace hycal
