#pragma once

#include <utility>
#include <vector>

#include "qmbench/hilbert.hpp"

namespace qmbench {

// Periodic 1-D configuration space; site j sits at x_origin + j*dx.
struct Lattice1D {
  int n_sites;
  double dx;
  double x_origin;

  Lattice1D(int n, double spacing, double origin);
  // Origin chosen so sites span [-n/2, n/2) * dx.
  static Lattice1D centered(int n, double spacing);

  double coord(int site) const { return x_origin + site * dx; }
  // Nearest site to a coordinate, wrapped periodically.
  int site_of(double coord) const;
};

// Kinetic term is the periodic central-difference p^2/(2m); free dispersion is
// (1 - cos(k dx)) / (m dx^2) on the discrete k-grid. Pass mass = 1/2 for a
// pure p^2 kinetic term.
HermitianOperator build_hamiltonian(const Lattice1D& lattice,
                                    const std::vector<double>& potential, double mass);

HermitianOperator position_operator(const Lattice1D& lattice);

// Uniform time grid over [t0, t_end); samples are the n_steps left endpoints.
struct TimeGrid {
  double t0;
  double t_end;
  int n_steps;

  TimeGrid(double a, double b, int n);
  double dt() const { return (t_end - t0) / n_steps; }
  std::vector<double> times() const;
};

struct PathSpec {
  std::vector<double> samples;
};

// sqrt( sum_k dt (xi1_k - xi2_k)^2 ).
double path_distance(const PathSpec& xi1, const PathSpec& xi2, const TimeGrid& grid);

// Lattice plus Hamiltonian with a cached spectral decomposition; every
// propagation and Heisenberg conjugation is computed from the same
// eigensystem, making repeated time queries cheap and deterministic.
class LatticeSystem {
 public:
  LatticeSystem(Lattice1D lattice, HermitianOperator h);

  const Lattice1D& lattice() const { return lattice_; }
  const HermitianOperator& hamiltonian() const { return h_; }
  const RealVec& eigenvalues() const { return evals_; }

  // exp(-iHt): forward Schroedinger propagator.
  Mat propagator(double t) const;
  Vec propagate(const Vec& psi, double t) const;
  // x(t) = exp(iHt) x exp(-iHt).
  Mat heisenberg_position(double t) const;
  // Pi(t) = U(t)^dag Pi U(t) with U(t) = exp(itH) (chain convention).
  Mat conjugate(const Mat& op, double t) const;

 private:
  Lattice1D lattice_;
  HermitianOperator h_;
  RealVec evals_;
  Mat evecs_;
  Mat x_;
};

// x(t_k) for all grid times. The parallel kernel and the serial reference
// must agree bit for bit; both read the shared decomposition only.
std::vector<Mat> heisenberg_positions(const LatticeSystem& sys, const TimeGrid& grid);
std::vector<Mat> heisenberg_positions_serial(const LatticeSystem& sys, const TimeGrid& grid);

// Delta_xi = sqrt( sum_k dt (x(t_k) - xi_k)^2 ), positive semidefinite.
HermitianOperator path_distance_operator(const LatticeSystem& sys, const PathSpec& xi,
                                         const TimeGrid& grid);

// Spectral projector of delta_op onto [0, eps].
Projector path_band_projector(const HermitianOperator& delta_op, double eps);

// <a| Pi_{xi,eps} |a>.
double path_probability(const QuantumState& state, const LatticeSystem& sys,
                        const PathSpec& xi, const TimeGrid& grid, double eps);

// Full distance CDF at the requested band widths (must be ascending).
std::vector<std::pair<double, double>> distance_distribution(const QuantumState& state,
                                                             const LatticeSystem& sys,
                                                             const PathSpec& xi,
                                                             const TimeGrid& grid,
                                                             const std::vector<double>& eps_grid);

// xi(t_k) = <x(t_k)> in the given state.
PathSpec expected_path(const QuantumState& state, const LatticeSystem& sys,
                       const TimeGrid& grid);

struct JointRegionResult {
  Projector projector;
  Eigen::Index dim;
};

// Meet-fold of the conjugated region indicators chi(t_k); masks[k] lists the
// sites of the region at grid time k.
JointRegionResult joint_region_projector(const LatticeSystem& sys,
                                         const std::vector<std::vector<int>>& masks,
                                         const TimeGrid& grid);

struct GaussianPacket {
  double x0 = 0.0;
  double sigma = 1.0;
  double k0 = 0.0;
};

QuantumState gaussian_packet_state(const Lattice1D& lattice, const GaussianPacket& packet);

struct SlitSetup {
  Lattice1D lattice;
  double mass = 1.0;
  double slit_a;
  double slit_b;
  GaussianPacket source;
  double time_to_screen;
  int screen_bin = 1;
  // Band width for inference; <= 0 selects 0.45 * d(xi_A, xi_B).
  double eps = 0.0;
  // Transmission profile: 0 is a single-site hard mask, > 0 a Gaussian
  // amplitude profile of that width (in lattice coordinates).
  double slit_profile_sigma = 0.0;
  int n_steps = 16;

  SlitSetup(Lattice1D lat, double a, double b, GaussianPacket src, double t_screen);
};

enum class SlitMode { both, only_a, only_b };

// Source packet restricted by the transmission mask and renormalized.
QuantumState post_slit_state(const SlitSetup& setup, SlitMode mode);

// |psi(T)|^2 per screen cell (cells of screen_bin sites).
std::vector<double> screen_marginal(const SlitSetup& setup, SlitMode mode);

struct SlitInference {
  double p_a = 0.0;
  double p_b = 0.0;
  double likelihood_ratio = 0.0;
  bool conclusive = true;
  double eps_used = 0.0;
};

// Band probabilities along the straight-line paths from each slit to the
// detection site; ratio capped at 1e12, both-below-1e-15 is inconclusive.
SlitInference double_slit_inference(const SlitSetup& setup, int detection_site);

// Ascending spectrum of p^2 + a^2 q^2 on the lattice; errors out when the
// low eigenstates do not fit ("lattice too small").
std::vector<double> oscillator_spectrum(double a_param, const Lattice1D& lattice);

}  // namespace qmbench
