#include "qmbench/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qmbench {

namespace {

Eigen::SelfAdjointEigenSolver<Mat> solve_hermitian(const Mat& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(m));
  if (es.info() != Eigen::Success) throw qm_error(std::string(what) + ": eigensolver failed");
  return es;
}

}  // namespace

QuantumState QuantumState::pure(Vec amplitudes) {
  QuantumState s;
  double n = amplitudes.norm();
  if (std::abs(n - 1.0) > 1e-9) throw qm_error("QuantumState: vector not normalized");
  s.vector_ = std::move(amplitudes);
  return s;
}

QuantumState QuantumState::density(Mat rho) {
  if (!is_hermitian(rho, 1e-9)) throw qm_error("QuantumState: density not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(rho));
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw qm_error("QuantumState: density not positive semidefinite");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9)
    throw qm_error("QuantumState: density trace differs from 1");
  QuantumState s;
  s.density_ = symmetrize(rho);
  return s;
}

const Vec& QuantumState::vector() const {
  if (!vector_) throw qm_error("QuantumState: vector representation requested for a density state");
  return *vector_;
}

const Mat& QuantumState::rho() const {
  if (!density_) throw qm_error("QuantumState: density representation requested for a pure state");
  return *density_;
}

Mat QuantumState::density_matrix() const {
  if (vector_) return (*vector_) * vector_->adjoint();
  return *density_;
}

Eigen::Index QuantumState::dim() const {
  return vector_ ? vector_->size() : density_->rows();
}

HermitianOperator::HermitianOperator(Mat m) {
  if (m.rows() != m.cols()) throw qm_error("HermitianOperator: matrix not square");
  if (!is_hermitian(m)) throw qm_error("HermitianOperator: not Hermitian within tolerance");
  mat_ = symmetrize(std::move(m));
}

Projector::Projector(Mat m) {
  if (m.rows() != m.cols()) throw qm_error("Projector: matrix not square");
  if (!is_hermitian(m, tol_proj)) throw qm_error("Projector: not Hermitian within tolerance");
  mat_ = symmetrize(std::move(m));
  if (max_abs_norm(mat_ * mat_ - mat_) > tol_proj)
    throw qm_error("Projector: not idempotent within tolerance");
  rank_ = static_cast<Eigen::Index>(std::llround(mat_.trace().real()));
}

Projector Projector::zero(Eigen::Index n) {
  Projector p;
  p.mat_ = Mat::Zero(n, n);
  p.rank_ = 0;
  return p;
}

Projector Projector::identity(Eigen::Index n) {
  Projector p;
  p.mat_ = Mat::Identity(n, n);
  p.rank_ = n;
  return p;
}

Unitary::Unitary(Mat m) {
  if (!is_unitary_matrix(m)) throw qm_error("Unitary: U^dag U differs from identity");
  mat_ = std::move(m);
}

PovmEffect::PovmEffect(Mat m) {
  if (!is_hermitian(m, tol_herm)) throw qm_error("PovmEffect: not Hermitian");
  mat_ = symmetrize(std::move(m));
  Eigen::SelfAdjointEigenSolver<Mat> es(mat_);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (lo < -tol_psd || hi > 1.0 + tol_psd)
    throw qm_error("PovmEffect: eigenvalues outside [0, 1]");
}

QuantumState make_state(const Vec& amplitudes) {
  double n = amplitudes.norm();
  if (n == 0.0) throw qm_error("make_state: degenerate state");
  return QuantumState::pure(amplitudes / n);
}

Projector projector_from_state(const QuantumState& a) {
  if (!a.is_pure())
    throw qm_error("projector_from_state: density input; use spectral_decompose instead");
  const Vec& v = a.vector();
  return Projector(v * v.adjoint());
}

std::vector<SpectralLine> spectral_decompose(const HermitianOperator& m) {
  auto es = solve_hermitian(m.mat(), "spectral_decompose");
  const RealVec& w = es.eigenvalues();
  const Mat& v = es.eigenvectors();
  const Eigen::Index n = w.size();
  double range = w(n - 1) - w(0);
  double merge = degeneracy_merge_rel * std::max(range, 1.0e-300);

  std::vector<SpectralLine> out;
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i + 1;
    while (j < n && w(j) - w(j - 1) <= merge) ++j;
    Mat block = v.middleCols(i, j - i);
    double mean = w.segment(i, j - i).mean();
    out.push_back({mean, Projector(block * block.adjoint())});
    i = j;
  }
  return out;
}

Unitary unitary_from_hamiltonian(const HermitianOperator& h, double t) {
  auto es = solve_hermitian(h.mat(), "unitary_from_hamiltonian");
  Vec phases(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::exp(cplx(0.0, t * es.eigenvalues()(k)));
  return Unitary(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
}

HermitianOperator evolve_heisenberg(const HermitianOperator& a,
                                    const HermitianOperator& h, double t) {
  require_same_dim(a.mat(), h.mat(), "evolve_heisenberg");
  Mat u = unitary_from_hamiltonian(h, t).mat();
  return HermitianOperator(u * a.mat() * u.adjoint());
}

HermitianOperator operator_sqrt(const HermitianOperator& m) {
  auto es = solve_hermitian(m.mat(), "operator_sqrt");
  RealVec w = es.eigenvalues();
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) < -tol_psd) throw qm_error("operator_sqrt: not positive semidefinite");
    w(k) = std::sqrt(std::max(w(k), 0.0));
  }
  return HermitianOperator(es.eigenvectors() * w.cast<cplx>().asDiagonal() *
                           es.eigenvectors().adjoint());
}

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  return commutator_norm(a.mat(), b.mat());
}

double born_probability(const QuantumState& state, const PovmEffect& effect) {
  if (state.dim() != effect.dim()) throw qm_error("born_probability: dimension mismatch");
  double p;
  if (state.is_pure()) {
    p = (state.vector().adjoint() * effect.mat() * state.vector())(0).real();
  } else {
    p = (state.rho() * effect.mat()).trace().real();
  }
  return clip_probability(p, "born_probability");
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace qmbench
