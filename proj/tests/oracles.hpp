#pragma once

// Reference implementations written without Eigen's decompositions. Tests
// compare the library against these.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double maha_double_sum(const Eigen::VectorXd& z, const Eigen::VectorXd& mu,
                              const Eigen::MatrixXd& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    for (Eigen::Index j = 0; j < z.size(); ++j) s += (z(i) - mu(i)) * p(i, j) * (z(j) - mu(j));
  return s;
}

// Gauss-Jordan elimination with partial pivoting.
inline Eigen::MatrixXd gauss_jordan_inverse(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    a.row(c).swap(a.row(piv));
    inv.row(c).swap(inv.row(piv));
    const double d = a(c, c);
    a.row(c) /= d;
    inv.row(c) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      a.row(r) -= f * a.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

// Covariance by explicit loops, dividing by the sample count.
inline Eigen::MatrixXd loop_covariance(const Eigen::MatrixXd& x) {
  const Eigen::Index d = x.rows(), k = x.cols();
  std::vector<double> mean(d, 0.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) mean[i] += x(i, j);
    mean[i] /= static_cast<double>(k);
  }
  Eigen::MatrixXd s(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < k; ++j) acc += (x(a, j) - mean[a]) * (x(b, j) - mean[b]);
      s(a, b) = acc / static_cast<double>(k);
    }
  return s;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

// A random symmetric positive-definite matrix with eigenvalues in [0.1, 10].
inline Eigen::MatrixXd random_spd(Eigen::Index d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(d, d, rng));
  const Eigen::MatrixXd q = qr.householderQ();
  std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
  Eigen::VectorXd ev(d);
  for (Eigen::Index i = 0; i < d; ++i) ev(i) = std::exp(u(rng));
  Eigen::MatrixXd p = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (p + p.transpose());
}

}  // namespace oracle
