#include "qmbench/quantum_logic.hpp"

#include <Eigen/Eigenvalues>

namespace qmbench {

Projector meet(const Projector& p, const Projector& q) {
  require_same_dim(p.mat(), q.mat(), "meet");
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(p.mat() + q.mat()));
  if (es.info() != Eigen::Success) throw qm_error("meet: eigensolver failed");
  const RealVec& w = es.eigenvalues();
  const Eigen::Index n = w.size();
  Eigen::Index first = n;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w(i) > 2.0 - tol_meet) {
      first = i;
      break;
    }
  }
  if (first == n) return Projector::zero(n);
  Mat block = es.eigenvectors().middleCols(first, n - first);
  return Projector(block * block.adjoint());
}

MeetResult meet_strict(const Projector& p, const Projector& q) {
  MeetResult r;
  r.commutator = commutator_norm(p.mat(), q.mat());
  if (r.commutator <= tol_commute) r.value = Projector(symmetrize(p.mat() * q.mat()));
  return r;
}

std::optional<double> ql_sequence_probability(const QuantumState& a, const Projector& p,
                                              const Projector& q, QlMode mode) {
  if (!a.is_pure()) throw qm_error("ql_sequence_probability: vector state required");
  if (mode == QlMode::orthodox)
    return born_probability(a, PovmEffect(meet(p, q)));
  MeetResult m = meet_strict(p, q);
  if (!m.defined()) return std::nullopt;
  return born_probability(a, PovmEffect(*m.value));
}

ChainSumReport ql_chain_sum_check(const QuantumState& a,
                                  const std::vector<Projector>& basis_b,
                                  const Projector& pi_c) {
  if (basis_b.empty()) throw qm_error("ql_chain_sum_check: incomplete basis");
  const Eigen::Index n = basis_b.front().dim();
  Mat sum = Mat::Zero(n, n);
  for (const Projector& b : basis_b) {
    if (b.rank() != 1) throw qm_error("ql_chain_sum_check: basis projector not rank-1");
    sum += b.mat();
  }
  if (max_abs_norm(sum - Mat::Identity(n, n)) > 1e-8)
    throw qm_error("ql_chain_sum_check: incomplete basis");

  double lhs = 0.0;
  for (const Projector& b : basis_b)
    lhs += born_probability(a, PovmEffect(meet(b, pi_c)));
  double rhs = born_probability(a, PovmEffect(pi_c));
  return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace qmbench
