#pragma once

#include "qmbench/hilbert.hpp"
#include "qmbench/rng.hpp"

namespace qmbench {

// Haar-ish random draws for tests and scenario instances. Quality requirement
// is genericity, not distributional exactness; determinism comes from the rng.

inline Vec random_unit_vector(SequentialRng& rng, Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(rng.normal(), rng.normal());
  double nv = v.norm();
  if (nv == 0.0) v(0) = 1.0, nv = 1.0;
  return v / nv;
}

inline HermitianOperator random_hermitian(SequentialRng& rng, Eigen::Index n) {
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
  return HermitianOperator(0.5 * (m + m.adjoint()));
}

// Rank-r projector onto the span of r orthonormalized random vectors.
inline Projector random_projector(SequentialRng& rng, Eigen::Index n, Eigen::Index r) {
  Mat g(n, r);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < r; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, r);
  return Projector(q * q.adjoint());
}

inline QuantumState random_pure_state(SequentialRng& rng, Eigen::Index n) {
  return QuantumState::pure(random_unit_vector(rng, n));
}

// Random full-rank density matrix via normalized Wishart draw.
inline QuantumState random_density(SequentialRng& rng, Eigen::Index n) {
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return QuantumState::density(rho);
}

}  // namespace qmbench
