#pragma once

// Shared generators for the randomized checks. Everything is seeded mt19937
// so failures reproduce.

#include <random>
#include <vector>

#include "keyaudit/dist.hpp"
#include "keyaudit/quantum.hpp"

namespace testutil {

inline keyaudit::KeyDistribution random_dist(int n_bits, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp_draw(1.0);
  std::size_t n = std::size_t{1} << n_bits;
  std::vector<double> probs(n);
  double sum = 0.0;
  for (double& p : probs) {
    p = exp_draw(rng);
    sum += p;
  }
  for (double& p : probs) {
    p /= sum;
  }
  // Renormalize exactly enough for the structural tolerance.
  double total = 0.0;
  for (double p : probs) total += p;
  probs[0] += 1.0 - total;
  return keyaudit::KeyDistribution::from_dense(n_bits, probs);
}

inline keyaudit::Vector random_pure(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  keyaudit::Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    v(i) = keyaudit::Cmplx(gauss(rng), gauss(rng));
  }
  v.normalize();
  return v;
}

inline keyaudit::DensityOperator random_density(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank_draw(1, dim);
  std::exponential_distribution<double> exp_draw(1.0);
  int rank = rank_draw(rng);
  std::vector<double> w(rank);
  double sum = 0.0;
  for (double& x : w) {
    x = exp_draw(rng);
    sum += x;
  }
  keyaudit::Matrix m = keyaudit::Matrix::Zero(dim, dim);
  for (int k = 0; k < rank; ++k) {
    keyaudit::Vector psi = random_pure(dim, rng);
    m += (w[static_cast<std::size_t>(k)] / sum) * (psi * psi.adjoint());
  }
  m = 0.5 * (m + m.adjoint().eval());
  m /= m.trace().real();
  return keyaudit::DensityOperator(m);
}

inline keyaudit::Povm random_povm(int dim, int outcomes, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<keyaudit::Matrix> raw;
  keyaudit::Matrix sum = keyaudit::Matrix::Zero(dim, dim);
  for (int k = 0; k < outcomes; ++k) {
    keyaudit::Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        g(i, j) = keyaudit::Cmplx(gauss(rng), gauss(rng));
      }
    }
    keyaudit::Matrix a = g * g.adjoint();
    raw.push_back(a);
    sum += a;
  }
  // Normalize against the total: E_i = S^{-1/2} A_i S^{-1/2}.
  Eigen::SelfAdjointEigenSolver<keyaudit::Matrix> solver(sum);
  keyaudit::Matrix inv_sqrt =
      solver.eigenvectors() *
      solver.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
      solver.eigenvectors().adjoint();
  std::vector<keyaudit::Matrix> elems;
  for (auto& a : raw) {
    keyaudit::Matrix e = inv_sqrt * a * inv_sqrt;
    elems.push_back(0.5 * (e + e.adjoint().eval()));
  }
  return keyaudit::Povm(std::move(elems));
}

}  // namespace testutil
