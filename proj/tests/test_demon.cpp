#include <doctest.h>

#include <cmath>

#include "qmbench/hilbert.hpp"
#include "qmbench/linalg.hpp"
#include "qmbench/sequence.hpp"
#include "qmbench/spin_sphere.hpp"

using namespace qmbench;

namespace {
MeasurementChain xz_chain(double h_coeff = 0.3, double t1 = 0.7, double t2 = 1.6) {
  const QuantumState psi0 = make_state((Vec(2) << 1.0, 0.0).finished());
  return MeasurementChain::from_state(
      psi0,
      {{spin_projector(unit_vector(1, 0, 0)), t1}, {spin_projector(unit_vector(0, 0, 1)), t2}},
      HermitianOperator(h_coeff * pauli_x()));
}

PointerModel model(double theta, int pointer_dim = 3) {
  PointerModel pm;
  pm.pointer_dim = pointer_dim;
  pm.coupling_strength = theta;
  pm.coupling_duration = 1.0;
  return pm;
}
}  // namespace

TEST_CASE("strong coupling reproduces the chain distribution") {
  const auto rep = demon_compare(xz_chain(), model(1.0));
  REQUIRE(rep.wigner.size() == 4);
  REQUIRE(rep.full_model.size() == 4);
  CHECK(rep.total_variation <= 1e-12);
  double w = 0.0, f = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    w += rep.wigner[s];
    f += rep.full_model[s];
  }
  CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weak coupling fails to resolve the outcomes") {
  const auto weak = demon_compare(xz_chain(), model(0.0625));
  const auto strong = demon_compare(xz_chain(), model(1.0));
  CHECK(weak.total_variation > 0.3);
  CHECK(strong.total_variation < weak.total_variation);
}

TEST_CASE("fully commuting chains are read out exactly at strong coupling") {
  const QuantumState psi0 = make_state((Vec(2) << 0.6, 0.8).finished());
  const Projector pz = spin_projector(unit_vector(0, 0, 1));
  const auto chain = MeasurementChain::from_state(psi0, {{pz, 0.7}, {pz, 1.6}},
                                                  HermitianOperator(0.3 * pauli_z()));
  CHECK(demon_compare(chain, model(1.0)).total_variation <= 1e-6);
}

TEST_CASE("weak coupling barely entangles: joint readout almost factorizes") {
  const auto rep = demon_compare(xz_chain(), model(0.125));
  // marginals of the two pointer readings
  const double p1 = rep.full_model[2] + rep.full_model[3];  // first bit set
  const double p2 = rep.full_model[1] + rep.full_model[3];  // second bit set
  const double product[4] = {(1 - p1) * (1 - p2), (1 - p1) * p2, p1 * (1 - p2), p1 * p2};
  double tv = 0.0;
  for (int s = 0; s < 4; ++s) tv += std::abs(rep.full_model[s] - product[s]);
  CHECK(0.5 * tv <= 0.01);
}

TEST_CASE("pointer dimension defaults to outcomes plus one and caps the composite") {
  PointerModel pm = model(1.0, 0);  // 0 requests the default
  CHECK_NOTHROW(demon_compare(xz_chain(), pm));

  PointerModel tiny = model(1.0);
  tiny.composite_cap = 10;  // 2 * 3 * 3 = 18 > 10
  CHECK_THROWS_WITH_AS(demon_compare(xz_chain(), tiny), doctest::Contains("cap"), qm_error);
}

TEST_CASE("readout is linear in the initial density matrix") {
  const Projector pb = spin_projector(unit_vector(1, 0, 0));
  const Projector pc = spin_projector(unit_vector(0, 0, 1));
  const HermitianOperator h(0.3 * pauli_x());
  const Vec e0 = (Vec(2) << 1.0, 0.0).finished();
  const Vec plus = (Vec(2) << 1.0, 1.0).finished() / std::sqrt(2.0);
  const Mat rho = 0.5 * (e0 * e0.adjoint()) + 0.5 * (plus * plus.adjoint());

  auto run = [&](QuantumState s) {
    return demon_compare(MeasurementChain::from_state(s, {{pb, 0.7}, {pc, 1.6}}, h),
                         model(0.5));
  };
  const auto mixed = run(QuantumState::density(rho));
  const auto a = run(make_state(e0));
  const auto b = run(make_state(plus));
  for (std::size_t s = 0; s < 4; ++s)
    CHECK(mixed.full_model[s] ==
          doctest::Approx(0.5 * a.full_model[s] + 0.5 * b.full_model[s]).epsilon(1e-10));
}
