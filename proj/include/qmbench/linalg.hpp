#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qmbench {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

// Tolerances shared by every module. All norm statements use the max
// absolute entry of the matrix.
inline constexpr double tol_herm = 1e-10;
inline constexpr double tol_proj = 1e-10;
inline constexpr double tol_unit = 1e-10;
inline constexpr double tol_psd = 1e-9;
inline constexpr double tol_meet = 1e-8;
inline constexpr double tol_commute = 1e-10;
inline constexpr double prob_clip_band = 1e-9;
inline constexpr double degeneracy_merge_rel = 1e-8;

struct qm_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double max_abs_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Mat& m, double tol = tol_herm) {
  return m.rows() == m.cols() && max_abs_norm(m - m.adjoint()) <= tol;
}

inline bool is_unitary_matrix(const Mat& m, double tol = tol_unit) {
  if (m.rows() != m.cols()) return false;
  return max_abs_norm(m.adjoint() * m - Mat::Identity(m.rows(), m.cols())) <= tol;
}

// (M + M†)/2; keeps long computations from drifting off the Hermitian manifold.
inline Mat symmetrize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

inline void require_same_dim(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw qm_error(std::string(what) + ": dimension mismatch");
}

// ‖AB − BA‖_max.
inline double commutator_norm(const Mat& a, const Mat& b) {
  require_same_dim(a, b, "commutator_norm");
  return max_abs_norm(a * b - b * a);
}

// Probabilities may stray into [−band, 1+band] from rounding; anything further
// out is a logic bug, not noise.
inline double clip_probability(double p, const char* what,
                               double band = prob_clip_band) {
  if (p < -band || p > 1.0 + band)
    throw qm_error(std::string(what) + ": probability out of range by more than the clip band");
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

}  // namespace qmbench
