#include <doctest.h>

#include <cmath>

#include "qmbench/hilbert.hpp"
#include "qmbench/linalg.hpp"
#include "qmbench/quantum_logic.hpp"
#include "qmbench/random.hpp"
#include "qmbench/rng.hpp"
#include "qmbench/spin_sphere.hpp"

using namespace qmbench;

namespace {
Projector diag_mask(std::initializer_list<int> bits) {
  const auto n = static_cast<Eigen::Index>(bits.size());
  Mat m = Mat::Zero(n, n);
  Eigen::Index k = 0;
  for (int b : bits) m(k, k) = b ? 1.0 : 0.0, ++k;
  return Projector(m);
}
}  // namespace

TEST_CASE("meet of commuting masks is the product") {
  const Projector p = diag_mask({1, 1, 0, 0});
  const Projector q = diag_mask({0, 1, 1, 0});
  const Projector m = meet(p, q);
  CHECK(m.rank() == 1);
  CHECK(max_abs_norm(m.mat() - p.mat() * q.mat()) <= 1e-12);
}

TEST_CASE("meet finds a genuinely noncommuting intersection") {
  // P spans {e0, e1}; Q spans {e0, (e1+e2)/sqrt 2}: they share exactly e0.
  Mat pm = Mat::Zero(3, 3);
  pm(0, 0) = pm(1, 1) = 1.0;
  const Projector p(pm);
  Vec c = Vec::Zero(3);
  c(1) = c(2) = 1.0 / std::sqrt(2.0);
  Mat qm = Mat::Zero(3, 3);
  qm(0, 0) = 1.0;
  qm += c * c.adjoint();
  const Projector q(qm);
  CHECK(commutator_norm(HermitianOperator(p.mat()), HermitianOperator(q.mat())) > 0.1);
  const Projector m = meet(p, q);
  CHECK(m.rank() == 1);
  CHECK(std::abs(m.mat()(0, 0) - cplx(1, 0)) <= 1e-10);
  CHECK(max_abs_norm(m.mat()) <= 1.0 + 1e-12);
}

TEST_CASE("meet of distinct rank-1 projectors vanishes") {
  SequentialRng rng(31);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index dim = 2 + i % 7;
    const Projector p = random_projector(rng, dim, 1);
    const Projector q = random_projector(rng, dim, 1);
    const Projector m = meet(p, q);
    CHECK(m.rank() == 0);
    CHECK(max_abs_norm(m.mat()) <= 1e-9);
  }
}

TEST_CASE("meet is contained in both arguments") {
  SequentialRng rng(32);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index dim = 3 + i % 6;
    const Projector p = random_projector(rng, dim, 2);
    const Projector q = random_projector(rng, dim, dim - 1);
    const Projector m = meet(p, q);
    CHECK(max_abs_norm(p.mat() * m.mat() - m.mat()) <= 1e-9);
    CHECK(max_abs_norm(q.mat() * m.mat() - m.mat()) <= 1e-9);
  }
}

TEST_CASE("strict meet is undefined for noncommuting spin projectors") {
  const Projector pz = spin_projector(unit_vector(0, 0, 1));
  const Projector px = spin_projector(unit_vector(1, 0, 0));
  const MeetResult r = meet_strict(pz, px);
  CHECK_FALSE(r.defined());
  // [(1+u.s)/2, (1+v.s)/2] = (i/2)(u x v).s: unit cross product gives 1/2
  CHECK(r.commutator == doctest::Approx(0.5).epsilon(1e-14));

  const MeetResult ok = meet_strict(pz, pz);
  REQUIRE(ok.defined());
  CHECK(max_abs_norm(ok.value->mat() - pz.mat()) <= 1e-12);
  CHECK(ok.commutator <= tol_commute);
}

TEST_CASE("sequence probability: orthodox gives a number, strict may refuse") {
  const QuantumState zplus = make_state((Vec(2) << 1.0, 0.0).finished());
  const Projector pz = spin_projector(unit_vector(0, 0, 1));
  const Projector px = spin_projector(unit_vector(1, 0, 0));

  const auto orthodox = ql_sequence_probability(zplus, pz, px, QlMode::orthodox);
  REQUIRE(orthodox.has_value());
  CHECK(*orthodox == 0.0);  // distinct rank-1 spin lines meet in 0

  CHECK_FALSE(ql_sequence_probability(zplus, pz, px, QlMode::strict).has_value());

  const auto both = ql_sequence_probability(zplus, pz, pz, QlMode::strict);
  REQUIRE(both.has_value());
  CHECK(*both == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("chain sum closes when the target belongs to the basis") {
  SequentialRng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index dim = 2 + trial % 7;
    const QuantumState a = random_pure_state(rng, dim);
    Mat g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    const Mat u = Eigen::HouseholderQR<Mat>(g).householderQ() * Mat::Identity(dim, dim);
    std::vector<Projector> basis;
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Vec col = u.col(k);
      basis.emplace_back(Mat(col * col.adjoint()));
    }
    const auto j = static_cast<std::size_t>(rng.uniform_index(dim));
    const auto rep = ql_chain_sum_check(a, basis, basis[j]);
    CHECK(std::abs(rep.delta) <= 1e-9);
    CHECK(rep.rhs == doctest::Approx(rep.lhs).epsilon(1e-9));
  }
}

TEST_CASE("chain sum undershoots for a generic target") {
  SequentialRng rng(34);
  const Eigen::Index dim = 4;
  const QuantumState a = random_pure_state(rng, dim);
  std::vector<Projector> basis;
  for (Eigen::Index k = 0; k < dim; ++k) {
    Mat m = Mat::Zero(dim, dim);
    m(k, k) = 1.0;
    basis.emplace_back(m);
  }
  const Projector pc = random_projector(rng, dim, 2);
  const auto rep = ql_chain_sum_check(a, basis, pc);
  CHECK(rep.lhs == 0.0);  // every meet with a generic subspace is empty
  CHECK(rep.rhs > 0.01);
  CHECK(rep.delta == doctest::Approx(rep.rhs - rep.lhs));
}

TEST_CASE("chain sum rejects an incomplete family") {
  SequentialRng rng(35);
  std::vector<Projector> partial;
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = 1.0;
  partial.emplace_back(m);
  const QuantumState a = random_pure_state(rng, 3);
  CHECK_THROWS_WITH_AS(ql_chain_sum_check(a, partial, Projector::identity(3)),
                       doctest::Contains("incomplete"), qm_error);
}
