#include "qmbench/path_lab.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qmbench/quantum_logic.hpp"

namespace qmbench {

Lattice1D::Lattice1D(int n, double spacing, double origin)
    : n_sites(n), dx(spacing), x_origin(origin) {
  if (n < 8) throw qm_error("Lattice1D: need at least 8 sites");
  if (!(spacing > 0.0)) throw qm_error("Lattice1D: spacing must be positive");
}

Lattice1D Lattice1D::centered(int n, double spacing) {
  return Lattice1D(n, spacing, -spacing * (n / 2));
}

int Lattice1D::site_of(double coord) const {
  long j = std::lround((coord - x_origin) / dx);
  long n = n_sites;
  return static_cast<int>(((j % n) + n) % n);
}

HermitianOperator build_hamiltonian(const Lattice1D& lattice,
                                    const std::vector<double>& potential, double mass) {
  const int n = lattice.n_sites;
  if (!potential.empty() && static_cast<int>(potential.size()) != n)
    throw qm_error("build_hamiltonian: potential length mismatch");
  if (!(mass > 0.0)) throw qm_error("build_hamiltonian: mass must be positive");
  const double k = 1.0 / (2.0 * mass * lattice.dx * lattice.dx);
  Mat h = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    h(j, j) = 2.0 * k + (potential.empty() ? 0.0 : potential[static_cast<std::size_t>(j)]);
    h(j, (j + 1) % n) -= k;
    h((j + 1) % n, j) -= k;
  }
  return HermitianOperator(std::move(h));
}

HermitianOperator position_operator(const Lattice1D& lattice) {
  Mat x = Mat::Zero(lattice.n_sites, lattice.n_sites);
  for (int j = 0; j < lattice.n_sites; ++j) x(j, j) = lattice.coord(j);
  return HermitianOperator(std::move(x));
}

TimeGrid::TimeGrid(double a, double b, int n) : t0(a), t_end(b), n_steps(n) {
  if (!(b > a)) throw qm_error("TimeGrid: t_end must exceed t0");
  if (n < 1) throw qm_error("TimeGrid: need at least one step");
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(static_cast<std::size_t>(n_steps));
  for (int k = 0; k < n_steps; ++k) out[static_cast<std::size_t>(k)] = t0 + k * dt();
  return out;
}

double path_distance(const PathSpec& xi1, const PathSpec& xi2, const TimeGrid& grid) {
  if (xi1.samples.size() != xi2.samples.size() ||
      static_cast<int>(xi1.samples.size()) != grid.n_steps)
    throw qm_error("path_distance: grid mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < xi1.samples.size(); ++k) {
    double d = xi1.samples[k] - xi2.samples[k];
    acc += grid.dt() * d * d;
  }
  return std::sqrt(acc);
}

LatticeSystem::LatticeSystem(Lattice1D lattice, HermitianOperator h)
    : lattice_(lattice), h_(std::move(h)) {
  if (h_.dim() != lattice_.n_sites) throw qm_error("LatticeSystem: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(h_.mat());
  if (es.info() != Eigen::Success) throw qm_error("LatticeSystem: eigensolver failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
  x_ = position_operator(lattice_).mat();
}

Mat LatticeSystem::propagator(double t) const {
  Vec phase(evals_.size());
  for (Eigen::Index k = 0; k < evals_.size(); ++k)
    phase(k) = std::exp(cplx(0.0, -t * evals_(k)));
  return evecs_ * phase.asDiagonal() * evecs_.adjoint();
}

Vec LatticeSystem::propagate(const Vec& psi, double t) const {
  Vec c = evecs_.adjoint() * psi;
  for (Eigen::Index k = 0; k < evals_.size(); ++k)
    c(k) *= std::exp(cplx(0.0, -t * evals_(k)));
  return evecs_ * c;
}

Mat LatticeSystem::heisenberg_position(double t) const {
  Mat u = propagator(-t);  // exp(iHt)
  return symmetrize(u * x_ * u.adjoint());
}

Mat LatticeSystem::conjugate(const Mat& op, double t) const {
  Mat u = propagator(-t);  // U(t) = exp(itH)
  return symmetrize(u.adjoint() * op * u);
}

std::vector<Mat> heisenberg_positions_serial(const LatticeSystem& sys, const TimeGrid& grid) {
  auto ts = grid.times();
  std::vector<Mat> out(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) out[k] = sys.heisenberg_position(ts[k]);
  return out;
}

std::vector<Mat> heisenberg_positions(const LatticeSystem& sys, const TimeGrid& grid) {
  auto ts = grid.times();
  std::vector<Mat> out(ts.size());
  const std::int64_t n = static_cast<std::int64_t>(ts.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] = sys.heisenberg_position(ts[static_cast<std::size_t>(k)]);
  return out;
}

HermitianOperator path_distance_operator(const LatticeSystem& sys, const PathSpec& xi,
                                         const TimeGrid& grid) {
  if (static_cast<int>(xi.samples.size()) != grid.n_steps)
    throw qm_error("path_distance_operator: grid mismatch");
  const Eigen::Index n = sys.hamiltonian().dim();
  auto xs = heisenberg_positions(sys, grid);
  Mat acc = Mat::Zero(n, n);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    Mat a = xs[k] - xi.samples[k] * Mat::Identity(n, n);
    acc += grid.dt() * (a * a);
  }
  return operator_sqrt(HermitianOperator(symmetrize(acc)));
}

Projector path_band_projector(const HermitianOperator& delta_op, double eps) {
  if (eps < 0.0) throw qm_error("path_band_projector: eps must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Mat> es(delta_op.mat());
  if (es.info() != Eigen::Success) throw qm_error("path_band_projector: eigensolver failed");
  const RealVec& w = es.eigenvalues();
  Eigen::Index count = 0;
  while (count < w.size() && w(count) <= eps) ++count;
  if (count == 0) return Projector::zero(w.size());
  Mat block = es.eigenvectors().leftCols(count);
  return Projector(block * block.adjoint());
}

double path_probability(const QuantumState& state, const LatticeSystem& sys,
                        const PathSpec& xi, const TimeGrid& grid, double eps) {
  Projector band = path_band_projector(path_distance_operator(sys, xi, grid), eps);
  return born_probability(state, PovmEffect(band));
}

std::vector<std::pair<double, double>> distance_distribution(
    const QuantumState& state, const LatticeSystem& sys, const PathSpec& xi,
    const TimeGrid& grid, const std::vector<double>& eps_grid) {
  if (!std::is_sorted(eps_grid.begin(), eps_grid.end()))
    throw qm_error("distance_distribution: eps_grid must be ascending");
  HermitianOperator delta = path_distance_operator(sys, xi, grid);
  Eigen::SelfAdjointEigenSolver<Mat> es(delta.mat());
  if (es.info() != Eigen::Success) throw qm_error("distance_distribution: eigensolver failed");
  // Spectral weights of the state in the delta eigenbasis; the CDF is their
  // running sum, so monotonicity is structural.
  Mat rho = state.density_matrix();
  RealVec weights(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    Vec v = es.eigenvectors().col(k);
    weights(k) = std::max(0.0, (v.adjoint() * rho * v)(0).real());
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < weights.size(); ++k)
      if (es.eigenvalues()(k) <= eps) acc += weights(k);
    out.emplace_back(eps, clip_probability(acc, "distance_distribution"));
  }
  return out;
}

PathSpec expected_path(const QuantumState& state, const LatticeSystem& sys,
                       const TimeGrid& grid) {
  auto xs = heisenberg_positions(sys, grid);
  Mat rho = state.density_matrix();
  PathSpec xi;
  xi.samples.reserve(xs.size());
  for (const Mat& x : xs) xi.samples.push_back((rho * x).trace().real());
  return xi;
}

JointRegionResult joint_region_projector(const LatticeSystem& sys,
                                         const std::vector<std::vector<int>>& masks,
                                         const TimeGrid& grid) {
  if (static_cast<int>(masks.size()) != grid.n_steps)
    throw qm_error("joint_region_projector: one mask per grid time required");
  const Eigen::Index n = sys.hamiltonian().dim();
  auto ts = grid.times();
  std::optional<Projector> acc;
  for (std::size_t k = 0; k < masks.size(); ++k) {
    if (masks[k].empty()) throw qm_error("joint_region_projector: empty mask");
    Mat chi = Mat::Zero(n, n);
    for (int site : masks[k]) {
      if (site < 0 || site >= n) throw qm_error("joint_region_projector: site out of range");
      chi(site, site) = 1.0;
    }
    Projector conj(sys.conjugate(chi, ts[k]));
    acc = acc ? meet(*acc, conj) : conj;
  }
  return {*acc, acc->rank()};
}

QuantumState gaussian_packet_state(const Lattice1D& lattice, const GaussianPacket& packet) {
  Vec psi(lattice.n_sites);
  for (int j = 0; j < lattice.n_sites; ++j) {
    double x = lattice.coord(j);
    double arg = (x - packet.x0) / (2.0 * packet.sigma);
    psi(j) = std::exp(cplx(-arg * arg, packet.k0 * x));
  }
  return make_state(psi);
}

SlitSetup::SlitSetup(Lattice1D lat, double a, double b, GaussianPacket src, double t_screen)
    : lattice(lat), slit_a(a), slit_b(b), source(src), time_to_screen(t_screen) {
  if (slit_a == slit_b) throw qm_error("SlitSetup: slits must be distinct");
  if (lattice.site_of(slit_a) == lattice.site_of(slit_b))
    throw qm_error("SlitSetup: slits must be distinct sites");
  if (!(t_screen > 0.0)) throw qm_error("SlitSetup: propagation time must be positive");
}

namespace {

RealVec transmission_profile(const SlitSetup& setup, SlitMode mode) {
  const Lattice1D& lat = setup.lattice;
  RealVec mask = RealVec::Zero(lat.n_sites);
  auto add_slit = [&](double pos) {
    if (setup.slit_profile_sigma > 0.0) {
      for (int j = 0; j < lat.n_sites; ++j) {
        double arg = (lat.coord(j) - pos) / (2.0 * setup.slit_profile_sigma);
        mask(j) += std::exp(-arg * arg);
      }
    } else {
      mask(lat.site_of(pos)) = 1.0;
    }
  };
  if (mode != SlitMode::only_b) add_slit(setup.slit_a);
  if (mode != SlitMode::only_a) add_slit(setup.slit_b);
  return mask.cwiseMin(1.0);
}

LatticeSystem slit_system(const SlitSetup& setup) {
  return LatticeSystem(setup.lattice, build_hamiltonian(setup.lattice, {}, setup.mass));
}

}  // namespace

QuantumState post_slit_state(const SlitSetup& setup, SlitMode mode) {
  Vec src = gaussian_packet_state(setup.lattice, setup.source).vector();
  Vec masked = transmission_profile(setup, mode).cast<cplx>().asDiagonal() * src;
  if (masked.norm() < 1e-12) throw qm_error("post_slit_state: mask absorbs the packet");
  return make_state(masked);
}

std::vector<double> screen_marginal(const SlitSetup& setup, SlitMode mode) {
  LatticeSystem sys = slit_system(setup);
  Vec psi = sys.propagate(post_slit_state(setup, mode).vector(), setup.time_to_screen);
  const int bin = std::max(1, setup.screen_bin);
  const int n = setup.lattice.n_sites;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>((n + bin - 1) / bin));
  for (int j = 0; j < n; j += bin) {
    double acc = 0.0;
    for (int l = j; l < std::min(n, j + bin); ++l) acc += std::norm(psi(l));
    out.push_back(acc);
  }
  return out;
}

SlitInference double_slit_inference(const SlitSetup& setup, int detection_site) {
  const Lattice1D& lat = setup.lattice;
  if (detection_site < 0 || detection_site >= lat.n_sites)
    throw qm_error("double_slit_inference: detection site outside the lattice");
  LatticeSystem sys = slit_system(setup);
  TimeGrid grid(0.0, setup.time_to_screen, setup.n_steps);
  const double xd = lat.coord(detection_site);

  auto line = [&](double from) {
    PathSpec xi;
    for (double t : grid.times())
      xi.samples.push_back(from + (xd - from) * t / setup.time_to_screen);
    return xi;
  };
  PathSpec xi_a = line(setup.slit_a), xi_b = line(setup.slit_b);

  SlitInference inf;
  inf.eps_used =
      setup.eps > 0.0 ? setup.eps : 0.45 * path_distance(xi_a, xi_b, grid);
  QuantumState post = post_slit_state(setup, SlitMode::both);
  inf.p_a = path_probability(post, sys, xi_a, grid, inf.eps_used);
  inf.p_b = path_probability(post, sys, xi_b, grid, inf.eps_used);

  constexpr double floor = 1e-15, cap = 1e12;
  if (inf.p_a < floor && inf.p_b < floor) {
    inf.conclusive = false;
    inf.likelihood_ratio = 1.0;
  } else {
    inf.likelihood_ratio = std::min(cap, inf.p_a / std::max(inf.p_b, floor));
  }
  return inf;
}

std::vector<double> oscillator_spectrum(double a_param, const Lattice1D& lattice) {
  if (!(a_param > 0.0)) throw qm_error("oscillator_spectrum: parameter must be positive");
  std::vector<double> pot(static_cast<std::size_t>(lattice.n_sites));
  for (int j = 0; j < lattice.n_sites; ++j) {
    double x = lattice.coord(j);
    pot[static_cast<std::size_t>(j)] = a_param * a_param * x * x;
  }
  // mass 1/2 makes the kinetic term a pure p^2.
  HermitianOperator h = build_hamiltonian(lattice, pot, 0.5);
  Eigen::SelfAdjointEigenSolver<Mat> es(h.mat());
  if (es.info() != Eigen::Success) throw qm_error("oscillator_spectrum: eigensolver failed");

  // Tail-mass check on the lowest states: the outer 10% of sites must be
  // essentially empty or the box is distorting the spectrum.
  const int n = lattice.n_sites;
  const int edge = std::max(1, n / 10);
  const Eigen::Index low = std::min<Eigen::Index>(5, n);
  for (Eigen::Index k = 0; k < low; ++k) {
    double tail = 0.0;
    for (int j = 0; j < edge; ++j)
      tail += std::norm(es.eigenvectors()(j, k)) + std::norm(es.eigenvectors()(n - 1 - j, k));
    if (tail > 1e-6) throw qm_error("oscillator_spectrum: lattice too small");
  }

  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
  return out;
}

}  // namespace qmbench
