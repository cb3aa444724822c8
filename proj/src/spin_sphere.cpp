#include "qmbench/spin_sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qmbench {

namespace {
constexpr double kPi = 3.141592653589793238;
}

UnitVector3::UnitVector3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
  double n2 = x * x + y * y + z * z;
  if (std::abs(n2 - 1.0) > 1e-12)
    throw qm_error("UnitVector3: not a unit vector");
}

UnitVector3 UnitVector3::operator-() const {
  UnitVector3 r;
  r.x = -x;
  r.y = -y;
  r.z = -z;
  return r;
}

UnitVector3 unit_vector(double x, double y, double z) {
  double n = std::sqrt(x * x + y * y + z * z);
  if (n < 1e-300) throw qm_error("unit_vector: zero vector");
  return UnitVector3(x / n, y / n, z / n);
}

Projector spin_projector(const UnitVector3& u, int sign) {
  if (sign != 1 && sign != -1) throw qm_error("spin_projector: sign must be +1 or -1");
  double s = static_cast<double>(sign);
  Mat m = 0.5 * (Mat::Identity(2, 2) + s * (u.x * pauli_x() + u.y * pauli_y() + u.z * pauli_z()));
  return Projector(m);
}

double quantum_spin_correlation(const UnitVector3& u, const UnitVector3& v) {
  double numeric = (spin_projector(u).mat() * spin_projector(v).mat()).trace().real();
  double closed = 0.5 * (1.0 + u.dot(v));
  if (std::abs(numeric - closed) > 1e-12)
    throw qm_error("quantum_spin_correlation: matrix value disagrees with closed form");
  return numeric;
}

UnitVector3 sphere_hidden_vector(const CounterRng& rng, std::uint64_t sample_index,
                                 const UnitVector3& u) {
  // Cosine density about u: cos(theta) = sqrt(U1), azimuth uniform.
  double z = std::sqrt(rng.uniform_at(2 * sample_index));
  double phi = 2.0 * kPi * rng.uniform_at(2 * sample_index + 1);
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  double lx = r * std::cos(phi), ly = r * std::sin(phi), lz = z;

  // Rotate the +z frame onto u.
  if (u.z > 1.0 - 1e-15) return UnitVector3(lx, ly, lz);
  if (u.z < -1.0 + 1e-15) return UnitVector3(lx, -ly, -lz);
  // Orthonormal frame (e1, e2, u).
  double inv = 1.0 / std::sqrt(u.x * u.x + u.y * u.y);
  double e1x = -u.y * inv, e1y = u.x * inv, e1z = 0.0;
  double e2x = u.y * e1z - u.z * e1y, e2y = u.z * e1x - u.x * e1z, e2z = u.x * e1y - u.y * e1x;
  return unit_vector(lx * e1x + ly * e2x + lz * u.x,
                     lx * e1y + ly * e2y + lz * u.y,
                     lx * e1z + ly * e2z + lz * u.z);
}

std::vector<SphereSampleRecord> sphere_sample(const SphereModelConfig& config,
                                              const std::vector<UnitVector3>& directions) {
  CounterRng rng(config.seed);
  std::vector<SphereSampleRecord> out;
  out.reserve(config.n_samples);
  for (std::uint64_t i = 0; i < config.n_samples; ++i) {
    SphereSampleRecord rec;
    rec.lambda = sphere_hidden_vector(rng, i, config.conditioning_direction);
    rec.outcomes.reserve(directions.size());
    for (const UnitVector3& v : directions)
      rec.outcomes.push_back(v.dot(rec.lambda) >= 0.0 ? +1 : -1);  // sign(0) = +1
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<std::uint64_t> sphere_counts_serial(const SphereModelConfig& config,
                                                const std::vector<UnitVector3>& directions) {
  CounterRng rng(config.seed);
  std::vector<std::uint64_t> counts(directions.size(), 0);
  for (std::uint64_t i = 0; i < config.n_samples; ++i) {
    UnitVector3 lam = sphere_hidden_vector(rng, i, config.conditioning_direction);
    for (std::size_t d = 0; d < directions.size(); ++d)
      if (directions[d].dot(lam) >= 0.0) ++counts[d];
  }
  return counts;
}

std::vector<std::uint64_t> sphere_counts(const SphereModelConfig& config,
                                         const std::vector<UnitVector3>& directions) {
  CounterRng rng(config.seed);
  const std::size_t nd = directions.size();
  std::vector<std::uint64_t> counts(nd, 0);
  const std::int64_t n = static_cast<std::int64_t>(config.n_samples);

#ifdef _OPENMP
  // Counts are integers and the per-sample stream depends only on the sample
  // index, so any thread partition yields the identical result.
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(nd, 0);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      UnitVector3 lam =
          sphere_hidden_vector(rng, static_cast<std::uint64_t>(i), config.conditioning_direction);
      for (std::size_t d = 0; d < nd; ++d)
        if (directions[d].dot(lam) >= 0.0) ++local[d];
    }
#pragma omp critical
    for (std::size_t d = 0; d < nd; ++d) counts[d] += local[d];
  }
#else
  for (std::int64_t i = 0; i < n; ++i) {
    UnitVector3 lam =
        sphere_hidden_vector(rng, static_cast<std::uint64_t>(i), config.conditioning_direction);
    for (std::size_t d = 0; d < nd; ++d)
      if (directions[d].dot(lam) >= 0.0) ++counts[d];
  }
#endif
  return counts;
}

std::vector<SphereVsQuantumRow> sphere_vs_quantum(const SphereModelConfig& config,
                                                  const std::vector<UnitVector3>& v_grid) {
  auto counts = sphere_counts(config, v_grid);
  std::vector<SphereVsQuantumRow> rows;
  rows.reserve(v_grid.size());
  const double n = static_cast<double>(config.n_samples);
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    SphereVsQuantumRow r;
    r.v = v_grid[i];
    r.p_hat = static_cast<double>(counts[i]) / n;
    r.p_quantum = quantum_spin_correlation(config.conditioning_direction, v_grid[i]);
    r.std_err = std::sqrt(r.p_hat * (1.0 - r.p_hat) / n);
    r.z_score = (r.p_hat == r.p_quantum) ? 0.0 : (r.p_hat - r.p_quantum) / r.std_err;
    rows.push_back(r);
  }
  return rows;
}

double best_assignment_residual(const std::vector<UnitVector3>& directions) {
  const std::size_t k = directions.size();
  Eigen::MatrixXd u(k, 3);
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Index r = static_cast<Eigen::Index>(i);
    u(r, 0) = directions[i].x;
    u(r, 1) = directions[i].y;
    u(r, 2) = directions[i].z;
  }
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd s(k);
  const std::uint64_t total = std::uint64_t(1) << k;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (std::size_t i = 0; i < k; ++i)
      s(static_cast<Eigen::Index>(i)) = (bits >> i) & 1u ? 1.0 : -1.0;
    // Least squares min_J || U J - s ||^2.
    Eigen::VectorXd j = u.colPivHouseholderQr().solve(s);
    best = std::min(best, (u * j - s).squaredNorm());
  }
  return best;
}

JointValueReport joint_value_infeasibility(const std::vector<UnitVector3>& directions) {
  const std::size_t k = directions.size();
  if (k < 4) throw qm_error("joint_value_infeasibility: need at least 4 directions");
  if (k > 20) throw qm_error("joint_value_infeasibility: too many directions");
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      for (std::size_t c = b + 1; c < k; ++c) {
        Eigen::Matrix3d m;
        m << directions[a].x, directions[a].y, directions[a].z,
             directions[b].x, directions[b].y, directions[b].z,
             directions[c].x, directions[c].y, directions[c].z;
        if (std::abs(m.determinant()) < 1e-6)
          throw qm_error("joint_value_infeasibility: directions not triplewise independent");
      }
  JointValueReport rep;
  rep.best_residual = best_assignment_residual(directions);
  rep.assignments_tested = std::uint64_t(1) << k;
  return rep;
}

std::vector<UnitVector3> fibonacci_sphere_grid(int count) {
  if (count < 1) throw qm_error("fibonacci_sphere_grid: count must be positive");
  std::vector<UnitVector3> grid;
  grid.reserve(static_cast<std::size_t>(count));
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = 2.0 * kPi * (i / golden - std::floor(i / golden));
    grid.push_back(unit_vector(r * std::cos(phi), r * std::sin(phi), z));
  }
  return grid;
}

std::vector<UnitVector3> pyramid_frame() {
  const double s = std::sqrt(5.0) / 3.0, c = 2.0 / 3.0;
  std::vector<UnitVector3> dirs;
  dirs.push_back(UnitVector3(0.0, 0.0, 1.0));
  for (int j = 0; j < 3; ++j) {
    double phi = 2.0 * kPi * j / 3.0;
    dirs.push_back(unit_vector(s * std::cos(phi), s * std::sin(phi), c));
  }
  return dirs;
}

}  // namespace qmbench
