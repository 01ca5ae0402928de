#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "keyaudit/dist.hpp"

namespace keyaudit {

inline constexpr int kMaxDim = 64;
inline constexpr double kHermTol = 1e-10;

using Cmplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class QuantumError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityOperator {
public:
  explicit DensityOperator(Matrix m);

  static DensityOperator pure(const Vector& psi);
  static DensityOperator maximally_mixed(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

private:
  Matrix m_;
};

/// Positive operator-valued measure: PSD elements summing to identity.
class Povm {
public:
  explicit Povm(std::vector<Matrix> outcomes);

  int dim() const { return static_cast<int>(outcomes_.front().rows()); }
  std::size_t size() const { return outcomes_.size(); }
  const Matrix& outcome(std::size_t i) const { return outcomes_[i]; }

private:
  std::vector<Matrix> outcomes_;
};

/// Classical-quantum ensemble {w_k, rho_E^k}.
struct CqEnsemble {
  std::vector<double> weights;
  std::vector<DensityOperator> states;

  void validate() const;
  DensityOperator average() const;  // sum_k w_k rho_E^k
};

/// Coupling of two distributions over n-bit strings.
class JointDistribution {
public:
  JointDistribution(int n_bits, Eigen::MatrixXd joint);

  int n_bits() const { return n_bits_; }
  const Eigen::MatrixXd& joint() const { return joint_; }
  KeyDistribution first_marginal() const;
  KeyDistribution second_marginal() const;
  double mismatch_probability() const;  // Pr[X != Y]

private:
  int n_bits_;
  Eigen::MatrixXd joint_;
};

double trace_norm(const Matrix& m);
double trace_distance(const DensityOperator& a, const DensityOperator& b);

/// Outcome distribution of measuring `rho` with `povm`.
std::vector<double> measure(const DensityOperator& rho, const Povm& povm);

/// Blockwise d = 1/2 sum_k || w_k rho_E^k - (1/N) rho_E ||_1.
double cq_distance(const CqEnsemble& ensemble);

JointDistribution maximal_coupling(const KeyDistribution& p,
                                   const KeyDistribution& q);
JointDistribution independent_coupling(const KeyDistribution& p,
                                       const KeyDistribution& q);

struct SubsetGapEntry {
  std::vector<int> positions;
  double epsilon;
  double p1_subset;
};

/// Contrast between the "uniform except with probability epsilon" reading of
/// a distance bound and what the extremal witness actually achieves.
struct GapReport {
  double epsilon;
  int n_bits;
  double perceived_p1_bound;  // epsilon + (1 - epsilon) 2^-n
  double actual_p1;           // 2^-n + epsilon
  double ratio_vs_uniform;    // actual_p1 / 2^-n
  std::vector<SubsetGapEntry> subset_gaps;  // singletons and pairs
};

GapReport interpretation_gap_report(double epsilon, int n_bits);
std::string gap_report_to_json(const GapReport& r);

/// Optimal unambiguous discrimination of the two real qubit states with
/// overlap s, symmetric about the z axis. Outcomes: identify-0, identify-1,
/// inconclusive. Success probability on equiprobable inputs is 1 - s.
std::pair<Povm, double> usd_povm(double overlap);

/// The two B92 signal states used throughout: psi_b = (cos t, (-1)^b sin t)
/// with cos(2t) = overlap.
std::pair<Vector, Vector> signal_pair(double overlap);

std::string density_to_json(const DensityOperator& rho);
DensityOperator density_from_json(const std::string& text);
std::string ensemble_to_json(const CqEnsemble& e);
CqEnsemble ensemble_from_json(const std::string& text);

}  // namespace keyaudit
