#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hycal/types.hpp"

namespace hycal {

// One synthetic domain of anisotropic Gaussian classes. Each class c has
// mean mu_c drawn uniformly from the ball of radius `dispersion_radius`
// around `center` and covariance cov_scale^2 * Q_c diag(spectrum) Q_c^T with
// a seeded random rotation Q_c.
struct SyntheticDomainSpec {
  DomainId domain_id = 0;
  std::string name;
  ClassId first_class_id = 0;
  int n_classes = 1;
  int dim = 8;
  Eigen::VectorXd center;  // empty means the origin
  double dispersion_radius = 1.0;
  double cov_scale = 1.0;
  Eigen::VectorXd spectrum;  // d positive eigenvalues; empty means all ones
  int train_per_class = 10;
  int test_per_class = 10;
  // Per-coordinate standard deviation of the text anchor around the true
  // mean. Negative selects 0.5 * cov_scale.
  double text_noise = -1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticClass {
  ClassId class_id = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

struct SyntheticDomain {
  DomainTask task;
  std::vector<std::pair<ClassId, ClassEntry>> entries;
  std::vector<SyntheticClass> classes;
};

SyntheticDomain generate_domain(const SyntheticDomainSpec& spec);

// Registry plus every generated sample of the given domains; training
// samples form the pool that sample_shots draws from.
Dataset generate_dataset(const std::vector<SyntheticDomainSpec>& specs);

// Haar-distributed orthogonal matrix.
Eigen::MatrixXd random_rotation(int dim, std::uint64_t seed);

// Differential entropy 0.5 * log det(2 pi e Sigma) of a Gaussian, in nats.
double gaussian_entropy(const Eigen::MatrixXd& covariance);

// Plug-in estimate: gaussian_entropy of the biased sample covariance of the
// columns of `samples`.
double empirical_gaussian_entropy(const Eigen::MatrixXd& samples);

// Two-domain stream: an 11-class low-budget domain and a 47-class
// high-budget domain whose training totals stand in `ratio` : 1.
struct GravityScenarioSpec {
  double ratio = 9.0;
  // Multiplies every covariance eigenvalue of the low-budget domain.
  double entropy_ratio = 1.0;
  int low_shots = 5;
  int dim = 8;
  int test_per_class = 30;
  // Norm of the offset shared by both domains.
  double center_norm = 4.0;
  // Norm of each domain's own offset from the shared center.
  double domain_offset = 1.0;
  double low_radius = 1.5;
  double high_radius = 1.5;
  double cov_scale = 0.35;
  // Largest-to-smallest eigenvalue ratio of the class covariances in each
  // domain.
  double low_anisotropy = 16.0;
  double high_anisotropy = 64.0;
  double text_noise = -1.0;
  std::uint64_t seed = 0;
};

struct SyntheticStream {
  ClassRegistry registry;
  TaskStream stream;
};

SyntheticStream domain_gravity_scenario(const GravityScenarioSpec& spec);
SyntheticStream domain_gravity_scenario(double ratio, double entropy_ratio, std::uint64_t seed);

// Geometric eigenvalue profile from 1 down to 1/anisotropy, normalized to
// mean one.
Eigen::VectorXd geometric_spectrum(int dim, double anisotropy);

// Mixed benchmark of `n_domains` heterogeneous domains (class counts,
// scales and anisotropy vary per domain) with the given train pool and test
// sizes per class.
std::vector<SyntheticDomainSpec> benchmark_domain_specs(int n_domains, int dim,
                                                        int train_per_class, int test_per_class,
                                                        std::uint64_t seed);

// Stream built directly from benchmark domains using every training sample.
SyntheticStream synthetic_benchmark_stream(int n_domains, int dim, std::uint64_t seed);

}  // namespace hycal
