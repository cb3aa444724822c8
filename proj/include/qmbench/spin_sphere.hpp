#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qmbench/hilbert.hpp"
#include "qmbench/rng.hpp"

namespace qmbench {

struct UnitVector3 {
  double x = 0.0, y = 0.0, z = 1.0;

  UnitVector3() = default;
  UnitVector3(double x_, double y_, double z_);

  double dot(const UnitVector3& o) const { return x * o.x + y * o.y + z * o.z; }
  UnitVector3 operator-() const;
};

// Normalizes; rejects near-zero input.
UnitVector3 unit_vector(double x, double y, double z);

struct SphereModelConfig {
  UnitVector3 conditioning_direction;
  std::uint64_t n_samples = 1;
  std::uint64_t seed = 0;
};

struct MonteCarloEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  std::uint64_t n = 0;
};

// Pi_u = (1 + sign u.sigma)/2: rank-1 eigenprojector of u.sigma.
Projector spin_projector(const UnitVector3& u, int sign = +1);

// tr(Pi_u Pi_v), computed by 2x2 matrix arithmetic and cross-checked against
// the closed form (1 + u.v)/2; disagreement is an internal-consistency error.
double quantum_spin_correlation(const UnitVector3& u, const UnitVector3& v);

// Hidden vector drawn from the cosine density rho(lambda) = max(0, u.lambda)/pi
// via z = sqrt(uniform) about u; sample i uses counters 2i, 2i+1.
UnitVector3 sphere_hidden_vector(const CounterRng& rng, std::uint64_t sample_index,
                                 const UnitVector3& u);

struct SphereSampleRecord {
  UnitVector3 lambda;
  std::vector<int> outcomes;  // sign(v.lambda) per requested direction, ties +1
};

// One record per sample; every direction is answered from the same lambda.
std::vector<SphereSampleRecord> sphere_sample(const SphereModelConfig& config,
                                              const std::vector<UnitVector3>& directions);

// Count of +1 outcomes per direction. The parallel kernel must agree bit for
// bit with the serial reference; both derive sample i from counter 2i.
std::vector<std::uint64_t> sphere_counts(const SphereModelConfig& config,
                                         const std::vector<UnitVector3>& directions);
std::vector<std::uint64_t> sphere_counts_serial(const SphereModelConfig& config,
                                                const std::vector<UnitVector3>& directions);

struct SphereVsQuantumRow {
  UnitVector3 v;
  double p_hat;
  double p_quantum;
  double std_err;
  double z_score;
};

std::vector<SphereVsQuantumRow> sphere_vs_quantum(const SphereModelConfig& config,
                                                  const std::vector<UnitVector3>& v_grid);

struct JointValueReport {
  double best_residual = 0.0;
  std::uint64_t assignments_tested = 0;
};

// Exhaustive 2^k least-squares search for a single vector J with u_i.J = s_i.
// Requires >= 4 directions with every 3x3 minor nonsingular.
JointValueReport joint_value_infeasibility(const std::vector<UnitVector3>& directions);

// Helper used by tests to show residual growth without the independence gate.
double best_assignment_residual(const std::vector<UnitVector3>& directions);

// Deterministic quasi-uniform direction grid (Fibonacci lattice).
std::vector<UnitVector3> fibonacci_sphere_grid(int count);

// Four directions with 2 u0 = u1 + u2 + u3: the infeasibility witness used by
// the default scenario; its best residual is exactly 1/7.
std::vector<UnitVector3> pyramid_frame();

}  // namespace qmbench
