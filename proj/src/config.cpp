#include "hycal/config.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "hycal/error.hpp"

namespace hycal {
namespace {

using nlohmann::json;

template <typename T>
std::vector<T> list_of(const json& node, const char* key) {
  if (!node.is_array() || node.empty()) {
    throw ConfigError(std::string("'") + key + "' must be a non-empty array");
  }
  return node.get<std::vector<T>>();
}

SettingSpec parse_setting(const json& node) {
  SettingSpec s;
  if (node.is_string()) {
    s.kind = parse_setting_kind(node.get<std::string>());
    return s;
  }
  s.kind = parse_setting_kind(node.at("kind").get<std::string>());
  s.fixed_shots = node.value("fixed_shots", s.fixed_shots);
  s.shot_min = node.value("shot_min", s.shot_min);
  s.shot_max = node.value("shot_max", s.shot_max);
  if (node.contains("domain_totals")) {
    for (const auto& [key, total] : node.at("domain_totals").items()) {
      const unsigned long id = std::stoul(key);
      if (id > 0xFFFF) throw ConfigError("domain id " + key + " out of range");
      s.domain_totals[static_cast<DomainId>(id)] = total.get<int>();
    }
  }
  s.validate();
  return s;
}

Eigen::VectorXd unit_direction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

}  // namespace

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  try {
    RunConfig cfg;
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      static const char* known[] = {"dataset", "setting", "setting_name", "fusion", "alpha",
                                    "beta", "lambda", "gamma", "scorers", "seeds", "order_seed",
                                    "zero_shot", "grids", "output_dir"};
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
    if (!doc.contains("dataset")) throw ConfigError("config is missing 'dataset'");
    cfg.dataset = doc.at("dataset").get<std::string>();
    if (cfg.dataset.is_relative()) cfg.dataset = base_dir / cfg.dataset;
    if (doc.contains("setting")) cfg.setting = parse_setting(doc.at("setting"));
    cfg.setting_name = doc.value("setting_name", to_string(cfg.setting.kind));
    cfg.session.fusion = parse_fusion_mode(doc.value("fusion", std::string("sum")));
    cfg.session.hybrid.alpha = doc.value("alpha", cfg.session.hybrid.alpha);
    cfg.session.hybrid.beta = doc.value("beta", cfg.session.hybrid.beta);
    cfg.session.reg.lambda = doc.value("lambda", cfg.session.reg.lambda);
    cfg.session.reg.gamma = doc.value("gamma", cfg.session.reg.gamma);
    cfg.session.hybrid.validate();
    cfg.session.reg.validate();
    if (doc.contains("zero_shot")) cfg.session.zero_shot = list_of<double>(doc.at("zero_shot"), "zero_shot");
    if (doc.contains("scorers")) {
      cfg.scorers.clear();
      for (const auto& name : list_of<std::string>(doc.at("scorers"), "scorers")) {
        cfg.scorers.push_back(parse_scorer(name));
      }
    }
    if (doc.contains("seeds")) cfg.seeds = list_of<std::uint64_t>(doc.at("seeds"), "seeds");
    if (doc.contains("order_seed") && !doc.at("order_seed").is_null()) {
      cfg.order_seed = doc.at("order_seed").get<std::uint64_t>();
    }
    cfg.sweep.alpha_grid = {cfg.session.hybrid.alpha};
    cfg.sweep.beta_grid = {cfg.session.hybrid.beta};
    cfg.sweep.lambda_grid = {cfg.session.reg.lambda};
    cfg.sweep.gamma_grid = {cfg.session.reg.gamma};
    if (doc.contains("grids")) {
      const auto& g = doc.at("grids");
      if (g.is_string()) {
        if (g.get<std::string>() != "default") throw ConfigError("'grids' must be an object or \"default\"");
        const auto defaults = SweepSpec::default_grid();
        cfg.sweep.alpha_grid = defaults.alpha_grid;
        cfg.sweep.beta_grid = defaults.beta_grid;
      } else {
        if (g.contains("alpha")) cfg.sweep.alpha_grid = list_of<double>(g.at("alpha"), "grids.alpha");
        if (g.contains("beta")) cfg.sweep.beta_grid = list_of<double>(g.at("beta"), "grids.beta");
        if (g.contains("lambda")) cfg.sweep.lambda_grid = list_of<double>(g.at("lambda"), "grids.lambda");
        if (g.contains("gamma")) cfg.sweep.gamma_grid = list_of<double>(g.at("gamma"), "grids.gamma");
      }
    }
    cfg.sweep.scorers = cfg.scorers;
    cfg.sweep.validate();
    if (doc.contains("output_dir")) {
      cfg.output_dir = doc.at("output_dir").get<std::string>();
      if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
    } else {
      cfg.output_dir = base_dir / "out";
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    file >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

SynthConfig parse_synth_config(const json& doc, std::optional<std::uint64_t> seed) {
  try {
    SynthConfig out;
    const std::uint64_t base_seed = seed ? *seed : doc.value("seed", std::uint64_t{0});
    const int dim = doc.value("dim", 16);
    if (doc.contains("benchmark")) {
      const auto& b = doc.at("benchmark");
      out.domains = benchmark_domain_specs(b.value("n_domains", 5), dim,
                                           b.value("train_per_class", 60),
                                           b.value("test_per_class", 20), base_seed);
      return out;
    }
    const auto& list = doc.at("domains");
    if (!list.is_array() || list.empty()) throw ConfigError("'domains' must be a non-empty array");

    std::vector<json> sorted(list.begin(), list.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const json& a, const json& b) {
      return a.at("name").get<std::string>() < b.at("name").get<std::string>();
    });

    std::mt19937_64 rng(base_seed ^ 0x73796e7468ULL);
    const Eigen::VectorXd shared = doc.value("shared_center_norm", 4.0) * unit_direction(dim, rng);
    const double offset = doc.value("domain_offset", 1.5);
    ClassId next = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const auto& node = sorted[i];
      SyntheticDomainSpec spec;
      spec.domain_id = static_cast<DomainId>(i);
      spec.name = node.at("name").get<std::string>();
      if (i > 0 && spec.name == out.domains.back().name) {
        throw ConfigError("domain name '" + spec.name + "' appears twice");
      }
      spec.first_class_id = next;
      spec.n_classes = node.value("n_classes", 5);
      spec.dim = dim;
      spec.center = shared + offset * unit_direction(dim, rng);
      spec.dispersion_radius = node.value("dispersion_radius", 1.5);
      spec.cov_scale = node.value("cov_scale", 0.35);
      if (node.contains("spectrum")) {
        const auto values = node.at("spectrum").get<std::vector<double>>();
        spec.spectrum = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
      } else {
        spec.spectrum = geometric_spectrum(dim, node.value("anisotropy", 1.0));
      }
      spec.train_per_class = node.value("train_per_class", 60);
      spec.test_per_class = node.value("test_per_class", 20);
      spec.text_noise = node.value("text_noise", -1.0);
      spec.seed = base_seed;
      spec.validate();
      next += static_cast<ClassId>(spec.n_classes);
      out.domains.push_back(std::move(spec));
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed synth spec: ") + e.what());
  }
}

}  // namespace hycal
