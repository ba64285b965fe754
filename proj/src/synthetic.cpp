#include "hycal/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hycal/error.hpp"

namespace hycal {
namespace {

std::mt19937_64 seeded_rng(std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  for (std::uint64_t p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

Eigen::VectorXd gaussian_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

Eigen::VectorXd unit_vector(int dim, std::mt19937_64& rng) {
  Eigen::VectorXd v = gaussian_vector(dim, rng);
  while (v.norm() == 0.0) v = gaussian_vector(dim, rng);
  return v / v.norm();
}

Eigen::MatrixXd rotation_from(int dim, std::mt19937_64& rng) {
  Eigen::MatrixXd g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = gaussian_vector(dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

void SyntheticDomainSpec::validate() const {
  if (n_classes < 1) throw ConfigError("synthetic domain needs at least one class");
  if (dim < 1) throw ConfigError("synthetic domain dimension must be >= 1");
  if (center.size() != 0 && center.size() != dim) throw DimensionError("center has wrong dimension");
  if (spectrum.size() != 0 && spectrum.size() != dim) {
    throw DimensionError("spectrum needs one eigenvalue per dimension");
  }
  if (spectrum.size() != 0 && !(spectrum.array() > 0.0).all()) {
    throw ConfigError("spectrum eigenvalues must be positive");
  }
  if (!(dispersion_radius >= 0.0)) throw ConfigError("dispersion radius must be non-negative");
  if (!(cov_scale >= 0.0)) throw ConfigError("covariance scale must be non-negative");
  if (train_per_class < 1) throw ConfigError("train_per_class must be >= 1");
  if (test_per_class < 0) throw ConfigError("test_per_class must be >= 0");
}

Eigen::MatrixXd random_rotation(int dim, std::uint64_t seed) {
  auto rng = seeded_rng({seed});
  return rotation_from(dim, rng);
}

SyntheticDomain generate_domain(const SyntheticDomainSpec& spec) {
  spec.validate();
  const int d = spec.dim;
  const Eigen::VectorXd center = spec.center.size() ? spec.center : Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd spectrum = spec.spectrum.size() ? spec.spectrum : Eigen::VectorXd::Ones(d);
  const double text_noise = spec.text_noise < 0.0 ? 0.5 * spec.cov_scale : spec.text_noise;

  std::vector<SyntheticClass> classes;
  std::vector<std::pair<ClassId, ClassEntry>> entries;
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> test;
  std::map<ClassId, int> shots;

  for (int i = 0; i < spec.n_classes; ++i) {
    const ClassId id = spec.first_class_id + static_cast<ClassId>(i);
    auto rng = seeded_rng({spec.seed, spec.domain_id, static_cast<std::uint64_t>(i)});
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const double radius = spec.dispersion_radius * std::pow(uniform(rng), 1.0 / d);
    const Eigen::VectorXd mean = center + radius * unit_vector(d, rng);
    const Eigen::MatrixXd q = rotation_from(d, rng);
    const Eigen::MatrixXd factor =
        q * (spec.cov_scale * spectrum.array().sqrt()).matrix().asDiagonal();

    Eigen::VectorXd text = mean + text_noise * gaussian_vector(d, rng);
    entries.emplace_back(id, ClassEntry{spec.domain_id, spec.name + "/class-" + std::to_string(i),
                                        EmbeddingVector(std::move(text))});
    classes.push_back({id, mean, factor * factor.transpose()});

    for (int k = 0; k < spec.train_per_class; ++k) {
      train.push_back({EmbeddingVector(mean + factor * gaussian_vector(d, rng)), id,
                       spec.domain_id, Split::Train});
    }
    for (int k = 0; k < spec.test_per_class; ++k) {
      test.push_back({EmbeddingVector(mean + factor * gaussian_vector(d, rng)), id,
                      spec.domain_id, Split::Test});
    }
    shots[id] = spec.train_per_class;
  }
  return {DomainTask(spec.domain_id, std::move(shots), std::move(train), std::move(test)),
          std::move(entries), std::move(classes)};
}

Dataset generate_dataset(const std::vector<SyntheticDomainSpec>& specs) {
  Dataset data;
  for (const auto& spec : specs) {
    auto domain = generate_domain(spec);
    for (auto& [id, entry] : domain.entries) data.registry.add(id, std::move(entry));
    for (const auto& s : domain.task.train_samples()) data.samples.push_back(s);
    for (const auto& s : domain.task.test_samples()) data.samples.push_back(s);
  }
  return data;
}

double gaussian_entropy(const Eigen::MatrixXd& covariance) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw SingularCovarianceError("entropy of a singular covariance is undefined");
  }
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double d = static_cast<double>(covariance.rows());
  return 0.5 * (d * std::log(2.0 * std::numbers::pi * std::numbers::e) + log_det);
}

double empirical_gaussian_entropy(const Eigen::MatrixXd& samples) {
  const Eigen::MatrixXd centered = samples.colwise() - samples.rowwise().mean();
  return gaussian_entropy(centered * centered.transpose() / static_cast<double>(samples.cols()));
}

Eigen::VectorXd geometric_spectrum(int dim, double anisotropy) {
  if (dim < 1 || !(anisotropy >= 1.0)) throw ConfigError("anisotropy must be >= 1");
  Eigen::VectorXd s(dim);
  for (int i = 0; i < dim; ++i) {
    const double frac = dim == 1 ? 0.0 : static_cast<double>(i) / (dim - 1);
    s(i) = std::pow(anisotropy, -frac);
  }
  return s / s.mean();
}

SyntheticStream domain_gravity_scenario(const GravityScenarioSpec& spec) {
  if (!(spec.ratio >= 1.0) || !(spec.entropy_ratio >= 1.0)) {
    throw ConfigError("gravity scenario ratios must be >= 1");
  }
  if (spec.low_shots < 1) throw ConfigError("low_shots must be >= 1");
  constexpr int kLowClasses = 11;
  constexpr int kHighClasses = 47;
  const int low_total = kLowClasses * spec.low_shots;
  const int high_total = static_cast<int>(std::lround(spec.ratio * low_total));

  auto rng = seeded_rng({spec.seed, 0x6772617669747955ULL});
  const Eigen::VectorXd shared = spec.center_norm * unit_vector(spec.dim, rng);

  SyntheticDomainSpec low;
  low.domain_id = 0;
  low.name = "low-budget";
  low.first_class_id = 0;
  low.n_classes = kLowClasses;
  low.dim = spec.dim;
  low.center = shared + spec.domain_offset * unit_vector(spec.dim, rng);
  low.dispersion_radius = spec.low_radius;
  low.cov_scale = spec.cov_scale;
  low.spectrum = geometric_spectrum(spec.dim, spec.low_anisotropy) * spec.entropy_ratio;
  low.train_per_class = spec.low_shots;
  low.test_per_class = spec.test_per_class;
  low.text_noise = spec.text_noise;
  low.seed = spec.seed;

  SyntheticDomainSpec high = low;
  high.domain_id = 1;
  high.name = "high-budget";
  high.first_class_id = kLowClasses;
  high.n_classes = kHighClasses;
  high.center = shared + spec.domain_offset * unit_vector(spec.dim, rng);
  high.dispersion_radius = spec.high_radius;
  high.spectrum = geometric_spectrum(spec.dim, spec.high_anisotropy);
  high.train_per_class = (high_total + kHighClasses - 1) / kHighClasses;

  SyntheticStream out;
  auto low_domain = generate_domain(low);
  auto high_domain = generate_domain(high);
  for (auto* dom : {&low_domain, &high_domain}) {
    for (auto& [id, entry] : dom->entries) out.registry.add(id, std::move(entry));
  }

  // Spread the high-budget total over its classes: the first
  // high_total % 47 classes get one extra shot.
  std::map<ClassId, int> high_shots;
  for (int i = 0; i < kHighClasses; ++i) {
    high_shots[high.first_class_id + i] =
        high_total / kHighClasses + (i < high_total % kHighClasses ? 1 : 0);
  }
  std::map<ClassId, int> taken;
  std::vector<LabeledSample> high_train;
  for (const auto& s : high_domain.task.train_samples()) {
    if (taken[s.class_id]++ < high_shots[s.class_id]) high_train.push_back(s);
  }
  DomainTask high_task(high.domain_id, std::move(high_shots), std::move(high_train),
                       high_domain.task.test_samples());

  std::vector<DomainTask> tasks{std::move(low_domain.task), std::move(high_task)};
  out.stream = assemble_stream(std::move(tasks), identity_order(2), out.registry);
  return out;
}

SyntheticStream domain_gravity_scenario(double ratio, double entropy_ratio, std::uint64_t seed) {
  GravityScenarioSpec spec;
  spec.ratio = ratio;
  spec.entropy_ratio = entropy_ratio;
  spec.seed = seed;
  return domain_gravity_scenario(spec);
}

std::vector<SyntheticDomainSpec> benchmark_domain_specs(int n_domains, int dim,
                                                        int train_per_class, int test_per_class,
                                                        std::uint64_t seed) {
  if (n_domains < 1) throw ConfigError("benchmark needs at least one domain");
  auto rng = seeded_rng({seed, 0x62656e6368ULL});
  std::uniform_int_distribution<int> class_count(3, 12);
  std::uniform_real_distribution<double> scale(0.2, 0.6);
  std::uniform_real_distribution<double> aniso(1.0, 20.0);
  const Eigen::VectorXd shared = 4.0 * unit_vector(dim, rng);

  std::vector<SyntheticDomainSpec> specs;
  ClassId next = 0;
  for (int i = 0; i < n_domains; ++i) {
    SyntheticDomainSpec spec;
    spec.domain_id = static_cast<DomainId>(i);
    spec.name = "domain-" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    spec.first_class_id = next;
    spec.n_classes = class_count(rng);
    spec.dim = dim;
    spec.center = shared + 1.5 * unit_vector(dim, rng);
    spec.dispersion_radius = 1.5;
    spec.cov_scale = scale(rng);
    spec.spectrum = geometric_spectrum(dim, aniso(rng));
    spec.train_per_class = train_per_class;
    spec.test_per_class = test_per_class;
    spec.seed = seed;
    next += static_cast<ClassId>(spec.n_classes);
    specs.push_back(std::move(spec));
  }
  return specs;
}

SyntheticStream synthetic_benchmark_stream(int n_domains, int dim, std::uint64_t seed) {
  SyntheticStream out;
  std::vector<DomainTask> tasks;
  for (const auto& spec : benchmark_domain_specs(n_domains, dim, 12, 15, seed)) {
    auto domain = generate_domain(spec);
    for (auto& [id, entry] : domain.entries) out.registry.add(id, std::move(entry));
    tasks.push_back(std::move(domain.task));
  }
  const auto n = tasks.size();
  out.stream = assemble_stream(std::move(tasks), identity_order(n), out.registry);
  return out;
}

}  // namespace hycal
