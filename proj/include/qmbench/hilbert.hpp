#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qmbench/linalg.hpp"

namespace qmbench {

// Pure state (unit vector) or mixed state (density matrix), one of the two.
class QuantumState {
 public:
  static QuantumState pure(Vec amplitudes);
  static QuantumState density(Mat rho);

  bool is_pure() const { return vector_.has_value(); }
  const Vec& vector() const;
  const Mat& rho() const;
  // Density-matrix view regardless of representation.
  Mat density_matrix() const;
  Eigen::Index dim() const;

 private:
  QuantumState() = default;
  std::optional<Vec> vector_;
  std::optional<Mat> density_;
};

// Hermiticity certified (and enforced by symmetrization) at construction.
class HermitianOperator {
 public:
  explicit HermitianOperator(Mat m);
  const Mat& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Mat mat_;
};

class Projector {
 public:
  explicit Projector(Mat m);
  static Projector zero(Eigen::Index n);
  static Projector identity(Eigen::Index n);

  const Mat& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }
  Eigen::Index rank() const { return rank_; }

 private:
  Projector() = default;
  Mat mat_;
  Eigen::Index rank_ = 0;
};

class Unitary {
 public:
  explicit Unitary(Mat m);
  const Mat& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Mat mat_;
};

// Positive operator E with 0 <= E <= 1.
class PovmEffect {
 public:
  explicit PovmEffect(Mat m);
  PovmEffect(const Projector& p) : mat_(p.mat()) {}
  const Mat& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Mat mat_;
};

// Normalizes the amplitudes; rejects the zero vector.
QuantumState make_state(const Vec& amplitudes);

// Rank-1 projector |a><a| from a pure state.
Projector projector_from_state(const QuantumState& a);

struct SpectralLine {
  double eigenvalue;
  Projector eigenprojector;
};

// Ascending eigenvalues with eigenvalues closer than
// degeneracy_merge_rel * (spectral range) merged into one projector.
std::vector<SpectralLine> spectral_decompose(const HermitianOperator& m);

// U = exp(+i t H), computed spectrally.
Unitary unitary_from_hamiltonian(const HermitianOperator& h, double t);

// exp(+iHt) A exp(-iHt).
HermitianOperator evolve_heisenberg(const HermitianOperator& a,
                                    const HermitianOperator& h, double t);

// Spectral square root; eigenvalues in [-tol_psd, 0) are clipped to 0,
// anything lower is an error.
HermitianOperator operator_sqrt(const HermitianOperator& m);

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b);

// tr(rho E) for density states, <a|E|a> for vector states, clipped to [0,1].
double born_probability(const QuantumState& state, const PovmEffect& effect);

// Pauli matrices and friends.
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

}  // namespace qmbench
