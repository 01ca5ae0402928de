#include "keyaudit/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include <json.hpp>

#include "keyaudit/extremal.hpp"

namespace keyaudit {

namespace {

void check_hermitian(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw QuantumError(std::string(what) + ": not square");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
    throw QuantumError(std::string(what) + ": not Hermitian");
  }
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

DensityOperator::DensityOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() > kMaxDim) {
    throw QuantumError("DensityOperator: dim out of range");
  }
  check_hermitian(m_, "DensityOperator");
  m_ = 0.5 * (m_ + m_.adjoint().eval());  // symmetrize away round-off
  if (std::abs(m_.trace().real() - 1.0) > kHermTol ||
      std::abs(m_.trace().imag()) > kHermTol) {
    throw QuantumError("DensityOperator: trace must be 1");
  }
  if (min_eigenvalue(m_) < -kHermTol) {
    throw QuantumError("DensityOperator: negative eigenvalue");
  }
}

DensityOperator DensityOperator::pure(const Vector& psi) {
  double norm = psi.norm();
  if (norm < 1e-12) {
    throw QuantumError("pure state must be non-zero");
  }
  Vector v = psi / norm;
  return DensityOperator(v * v.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw QuantumError("maximally_mixed: dim out of range");
  }
  return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

Povm::Povm(std::vector<Matrix> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) {
    throw QuantumError("Povm: no outcomes");
  }
  int d = static_cast<int>(outcomes_.front().rows());
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : outcomes_) {
    if (e.rows() != d || e.cols() != d) {
      throw QuantumError("Povm: outcome dimension mismatch");
    }
    check_hermitian(e, "Povm outcome");
    if (min_eigenvalue(e) < -kHermTol) {
      throw QuantumError("Povm: outcome not positive semidefinite");
    }
    sum += e;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kHermTol) {
    throw QuantumError("Povm: outcomes do not sum to identity");
  }
}

void CqEnsemble::validate() const {
  if (states.empty() || weights.size() != states.size()) {
    throw QuantumError("CqEnsemble: empty or mismatched weights");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) {
      throw QuantumError("CqEnsemble: negative weight");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kHermTol) {
    throw QuantumError("CqEnsemble: weights must sum to 1");
  }
  int d = states.front().dim();
  for (const auto& s : states) {
    if (s.dim() != d) {
      throw QuantumError("CqEnsemble: states must share dim");
    }
  }
}

DensityOperator CqEnsemble::average() const {
  validate();
  int d = states.front().dim();
  Matrix avg = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < states.size(); ++k) {
    avg += weights[k] * states[k].matrix();
  }
  return DensityOperator(avg);
}

double trace_norm(const Matrix& m) {
  check_hermitian(m, "trace_norm");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) {
    throw QuantumError("trace_distance: dimension mismatch");
  }
  return 0.5 * trace_norm(a.matrix() - b.matrix());
}

std::vector<double> measure(const DensityOperator& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) {
    throw QuantumError("measure: dimension mismatch");
  }
  std::vector<double> probs(povm.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < povm.size(); ++i) {
    Cmplx t = (povm.outcome(i) * rho.matrix()).trace();
    if (std::abs(t.imag()) > kHermTol) {
      throw QuantumError("measure: non-real outcome probability");
    }
    double p = t.real();
    if (p < -1e-9) {
      throw QuantumError("measure: negative outcome probability");
    }
    probs[i] = std::max(0.0, p);
    sum += probs[i];
  }
  if (sum <= 0.0) {
    throw QuantumError("measure: zero total probability");
  }
  for (double& p : probs) {
    p /= sum;
  }
  return probs;
}

double cq_distance(const CqEnsemble& ensemble) {
  ensemble.validate();
  Matrix avg = ensemble.average().matrix();
  double inv_n = 1.0 / static_cast<double>(ensemble.states.size());
  double d = 0.0;
  for (std::size_t k = 0; k < ensemble.states.size(); ++k) {
    d += trace_norm(ensemble.weights[k] * ensemble.states[k].matrix() -
                    inv_n * avg);
  }
  return 0.5 * d;
}

JointDistribution::JointDistribution(int n_bits, Eigen::MatrixXd joint)
    : n_bits_(n_bits), joint_(std::move(joint)) {
  if (n_bits < 1 || n_bits > 12) {
    throw QuantumError("JointDistribution: n_bits out of range");
  }
  auto n = Eigen::Index{1} << n_bits;
  if (joint_.rows() != n || joint_.cols() != n) {
    throw QuantumError("JointDistribution: shape mismatch");
  }
  if (joint_.minCoeff() < -kStructuralTol) {
    throw QuantumError("JointDistribution: negative entry");
  }
  if (std::abs(joint_.sum() - 1.0) > 1e-9) {
    throw QuantumError("JointDistribution: entries must sum to 1");
  }
}

KeyDistribution JointDistribution::first_marginal() const {
  Eigen::VectorXd row = joint_.rowwise().sum();
  std::vector<double> probs(row.data(), row.data() + row.size());
  return KeyDistribution::from_dense(n_bits_, probs);
}

KeyDistribution JointDistribution::second_marginal() const {
  Eigen::VectorXd col = joint_.colwise().sum();
  std::vector<double> probs(col.data(), col.data() + col.size());
  return KeyDistribution::from_dense(n_bits_, probs);
}

double JointDistribution::mismatch_probability() const {
  return 1.0 - joint_.diagonal().sum();
}

JointDistribution maximal_coupling(const KeyDistribution& p,
                                   const KeyDistribution& q) {
  if (p.n_bits() != q.n_bits()) {
    throw QuantumError("maximal_coupling: dimension mismatch");
  }
  std::vector<double> pd = p.dense();
  std::vector<double> qd = q.dense();
  auto n = static_cast<Eigen::Index>(pd.size());
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> excess_p(pd.size()), excess_q(qd.size());
  double delta = 0.0;
  for (std::size_t i = 0; i < pd.size(); ++i) {
    double m = std::min(pd[i], qd[i]);
    joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = m;
    excess_p[i] = pd[i] - m;
    excess_q[i] = qd[i] - m;
    delta += excess_p[i];
  }
  if (delta > 0.0) {
    for (std::size_t i = 0; i < pd.size(); ++i) {
      if (excess_p[i] <= 0.0) continue;
      for (std::size_t j = 0; j < qd.size(); ++j) {
        if (excess_q[j] <= 0.0) continue;
        joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            excess_p[i] * excess_q[j] / delta;
      }
    }
  }
  return JointDistribution(p.n_bits(), std::move(joint));
}

JointDistribution independent_coupling(const KeyDistribution& p,
                                       const KeyDistribution& q) {
  if (p.n_bits() != q.n_bits()) {
    throw QuantumError("independent_coupling: dimension mismatch");
  }
  std::vector<double> pd = p.dense();
  std::vector<double> qd = q.dense();
  auto n = static_cast<Eigen::Index>(pd.size());
  Eigen::MatrixXd joint(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      joint(i, j) = pd[static_cast<std::size_t>(i)] *
                    qd[static_cast<std::size_t>(j)];
    }
  }
  return JointDistribution(p.n_bits(), std::move(joint));
}

GapReport interpretation_gap_report(double epsilon, int n_bits) {
  ExtremalResult ext = max_guess_given_vd(n_bits, epsilon);
  double uniform = std::ldexp(1.0, -n_bits);
  GapReport r;
  r.epsilon = epsilon;
  r.n_bits = n_bits;
  r.perceived_p1_bound = epsilon + (1.0 - epsilon) * uniform;
  r.actual_p1 = ext.p1_star;
  r.ratio_vs_uniform = ext.p1_star / uniform;
  for (int i = 0; i < n_bits; ++i) {
    SubsetSpec s{{i}, std::nullopt};
    SubsetGap g = subset_security_gap(ext.witness, s);
    r.subset_gaps.push_back({{i}, g.epsilon, g.p1_subset});
  }
  for (int i = 0; i < n_bits; ++i) {
    for (int j = i + 1; j < n_bits; ++j) {
      SubsetSpec s{{i, j}, std::nullopt};
      SubsetGap g = subset_security_gap(ext.witness, s);
      r.subset_gaps.push_back({{i, j}, g.epsilon, g.p1_subset});
    }
  }
  return r;
}

std::string gap_report_to_json(const GapReport& r) {
  nlohmann::ordered_json j;
  j["epsilon"] = r.epsilon;
  j["n_bits"] = r.n_bits;
  j["perceived_p1_bound"] = r.perceived_p1_bound;
  j["actual_p1"] = r.actual_p1;
  j["ratio_vs_uniform"] = r.ratio_vs_uniform;
  auto& gaps = j["subset_gaps"] = nlohmann::json::array();
  for (const auto& g : r.subset_gaps) {
    gaps.push_back({{"positions", g.positions},
                    {"epsilon", g.epsilon},
                    {"p1_subset", g.p1_subset}});
  }
  return j.dump();
}

std::pair<Vector, Vector> signal_pair(double overlap) {
  if (overlap < 0.0 || overlap >= 1.0) {
    throw QuantumError("signal_pair: overlap must be in [0, 1)");
  }
  double theta = 0.5 * std::acos(overlap);
  Vector psi0(2), psi1(2);
  psi0 << std::cos(theta), std::sin(theta);
  psi1 << std::cos(theta), -std::sin(theta);
  return {psi0, psi1};
}

std::pair<Povm, double> usd_povm(double overlap) {
  if (overlap < 0.0 || overlap >= 1.0) {
    throw QuantumError("usd_povm: overlap must be in [0, 1)");
  }
  double theta = 0.5 * std::acos(overlap);
  // States orthogonal to psi_1 and psi_0 respectively.
  Vector perp1(2), perp0(2);
  perp1 << std::sin(theta), std::cos(theta);
  perp0 << std::sin(theta), -std::cos(theta);
  double c = 1.0 / (1.0 + overlap);
  Matrix e0 = c * (perp1 * perp1.adjoint());
  Matrix e1 = c * (perp0 * perp0.adjoint());
  Matrix inc = Matrix::Identity(2, 2) - e0 - e1;
  Povm povm({e0, e1, inc});
  return {std::move(povm), 1.0 - overlap};
}

namespace {

nlohmann::ordered_json matrix_to_json_parts(const Matrix& m) {
  nlohmann::ordered_json re = nlohmann::json::array();
  nlohmann::ordered_json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json rrow = nlohmann::json::array();
    nlohmann::ordered_json irow = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  nlohmann::ordered_json out;
  out["re"] = re;
  out["im"] = im;
  return out;
}

Matrix matrix_from_json_parts(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  auto d = static_cast<Eigen::Index>(re.size());
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      m(i, k) = Cmplx(re[i][k].get<double>(), im[i][k].get<double>());
    }
  }
  return m;
}

}  // namespace

std::string density_to_json(const DensityOperator& rho) {
  nlohmann::ordered_json j;
  j["dim"] = rho.dim();
  auto parts = matrix_to_json_parts(rho.matrix());
  j["re"] = parts["re"];
  j["im"] = parts["im"];
  return j.dump();
}

DensityOperator density_from_json(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    Matrix m = matrix_from_json_parts(j);
    if (j.contains("dim") && j["dim"].get<int>() != m.rows()) {
      throw QuantumError("density JSON dim does not match matrix");
    }
    return DensityOperator(std::move(m));
  } catch (const nlohmann::json::exception& ex) {
    throw QuantumError(std::string("invalid density JSON: ") + ex.what());
  }
}

std::string ensemble_to_json(const CqEnsemble& e) {
  nlohmann::ordered_json j;
  j["weights"] = e.weights;
  auto& states = j["states"] = nlohmann::json::array();
  for (const auto& s : e.states) {
    states.push_back(nlohmann::ordered_json::parse(density_to_json(s)));
  }
  return j.dump();
}

CqEnsemble ensemble_from_json(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    CqEnsemble e;
    e.weights = j.at("weights").get<std::vector<double>>();
    for (const auto& s : j.at("states")) {
      e.states.push_back(density_from_json(s.dump()));
    }
    e.validate();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw QuantumError(std::string("invalid ensemble JSON: ") + ex.what());
  }
}

}  // namespace keyaudit
