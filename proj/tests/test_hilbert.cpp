#include <doctest.h>

#include <cmath>

#include "qmbench/hilbert.hpp"
#include "qmbench/linalg.hpp"
#include "qmbench/random.hpp"
#include "qmbench/rng.hpp"

using namespace qmbench;

namespace {
Vec basis_vec(Eigen::Index n, Eigen::Index k) {
  Vec v = Vec::Zero(n);
  v(k) = 1.0;
  return v;
}
}  // namespace

TEST_CASE("make_state normalizes and rejects the zero vector") {
  const QuantumState s = make_state((Vec(2) << 3.0, 4.0).finished());
  CHECK(s.is_pure());
  CHECK(std::abs(s.vector().norm() - 1.0) <= 1e-14);
  CHECK_THROWS_WITH_AS(make_state(Vec::Zero(2)), doctest::Contains("degenerate"), qm_error);
}

TEST_CASE("density states are validated") {
  Mat rho = Mat::Zero(2, 2);
  rho(0, 0) = 0.75;
  rho(1, 1) = 0.25;
  CHECK_NOTHROW(QuantumState::density(rho));
  rho(1, 1) = 0.35;  // trace 1.1
  CHECK_THROWS_AS(QuantumState::density(rho), qm_error);
  rho(0, 0) = 1.25;
  rho(1, 1) = -0.25;  // trace 1 but not PSD
  CHECK_THROWS_AS(QuantumState::density(rho), qm_error);
}

TEST_CASE("projector construction validates idempotency and tracks rank") {
  Mat p = Mat::Zero(3, 3);
  p(0, 0) = 1.0;
  p(2, 2) = 1.0;
  CHECK(Projector(p).rank() == 2);
  p(0, 2) = 0.5;
  CHECK_THROWS_AS(Projector{p}, qm_error);
  CHECK(Projector::zero(4).rank() == 0);
  CHECK(Projector::identity(4).rank() == 4);
}

TEST_CASE("projector_from_state handles pure states and rejects mixed ones") {
  const QuantumState pure = make_state(basis_vec(3, 1));
  const Projector p = projector_from_state(pure);
  CHECK(p.rank() == 1);
  CHECK(max_abs_norm(p.mat() - pure.density_matrix()) <= 1e-14);

  Mat rho = Mat::Zero(2, 2);
  rho(0, 0) = rho(1, 1) = 0.5;
  CHECK_THROWS_WITH_AS(projector_from_state(QuantumState::density(rho)),
                       doctest::Contains("spectral_decompose"), qm_error);
}

TEST_CASE("spectral_decompose merges near-degenerate clusters and resolves identity") {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0 + 1e-12;  // inside the merge window relative to the 2-unit range
  m(2, 2) = 3.0;
  const auto lines = spectral_decompose(HermitianOperator(m));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].eigenvalue == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lines[0].eigenprojector.rank() == 2);
  CHECK(lines[1].eigenvalue == doctest::Approx(3.0).epsilon(1e-12));
  Mat sum = Mat::Zero(3, 3);
  for (const auto& l : lines) sum += l.eigenprojector.mat();
  CHECK(max_abs_norm(sum - Mat::Identity(3, 3)) <= 1e-12);
}

TEST_CASE("unitary_from_hamiltonian uses the exp(+itH) convention") {
  const HermitianOperator h(pauli_z());
  const double t = 0.37;
  const Unitary u = unitary_from_hamiltonian(h, t);
  CHECK(std::abs(u.mat()(0, 0) - std::exp(cplx(0, t))) <= 1e-14);
  CHECK(std::abs(u.mat()(1, 1) - std::exp(cplx(0, -t))) <= 1e-14);
  const Unitary v = unitary_from_hamiltonian(h, 2.0 * t);
  CHECK(max_abs_norm(u.mat() * u.mat() - v.mat()) <= 1e-13);
  CHECK(is_unitary_matrix(u.mat()));
}

TEST_CASE("evolve_heisenberg conjugates by the forward unitary") {
  const HermitianOperator h(pauli_z());
  const HermitianOperator a(pauli_x());
  const double t = 0.81;
  const Mat u = unitary_from_hamiltonian(h, t).mat();
  const Mat expected = u * a.mat() * u.adjoint();
  CHECK(max_abs_norm(evolve_heisenberg(a, h, t).mat() - expected) <= 1e-13);
  // spectrum is preserved under conjugation
  const auto lines = spectral_decompose(evolve_heisenberg(a, h, t));
  CHECK(lines.front().eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(lines.back().eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("operator_sqrt on diagonal and projector fixed points") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const Mat r = operator_sqrt(HermitianOperator(d)).mat();
  CHECK(std::abs(r(0, 0) - cplx(2, 0)) <= 1e-12);
  CHECK(std::abs(r(1, 1) - cplx(3, 0)) <= 1e-12);

  SequentialRng rng(5);
  const Projector p = random_projector(rng, 4, 2);
  CHECK(max_abs_norm(operator_sqrt(HermitianOperator(p.mat())).mat() - p.mat()) <= 1e-10);

  d(1, 1) = -1.0;
  CHECK_THROWS_WITH_AS(operator_sqrt(HermitianOperator(d)),
                       doctest::Contains("positive semidefinite"), qm_error);
}

TEST_CASE("commutator norm of the spin components is 2 under the max-entry norm") {
  // [s_x, s_y] = 2i s_z whose largest entry has magnitude 2
  CHECK(commutator_norm(HermitianOperator(pauli_x()), HermitianOperator(pauli_y())) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(commutator_norm(HermitianOperator(pauli_z()), HermitianOperator(pauli_z())) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("born_probability agrees between pure and density forms") {
  SequentialRng rng(77);
  for (int i = 0; i < 20; ++i) {
    const QuantumState psi = random_pure_state(rng, 5);
    const Projector e = random_projector(rng, 5, 2);
    const double p_pure = born_probability(psi, PovmEffect(e));
    const double p_dens =
        born_probability(QuantumState::density(psi.density_matrix()), PovmEffect(e));
    CHECK(std::abs(p_pure - p_dens) <= 1e-12);
    CHECK(p_pure >= 0.0);
    CHECK(p_pure <= 1.0);
  }
  const QuantumState psi = random_pure_state(rng, 5);
  CHECK(born_probability(psi, PovmEffect(Projector::identity(5))) == 1.0);
}

TEST_CASE("povm effects must sit inside [0, 1]") {
  Mat e = Mat::Zero(2, 2);
  e(0, 0) = 0.5;
  e(1, 1) = 1.0;
  CHECK_NOTHROW(PovmEffect{e});
  e(1, 1) = 1.5;
  CHECK_THROWS_AS(PovmEffect{e}, qm_error);
}

TEST_CASE("pauli algebra") {
  CHECK(max_abs_norm(pauli_x() * pauli_y() - cplx(0, 1) * pauli_z()) <= 1e-15);
  CHECK(std::abs(pauli_x().trace()) <= 1e-15);
  CHECK(max_abs_norm(pauli_x() * pauli_x() - Mat::Identity(2, 2)) <= 1e-15);
}
