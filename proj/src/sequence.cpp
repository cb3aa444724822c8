#include "qmbench/sequence.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qmbench {

namespace {

void check_chain_times(const std::vector<ChainStep>& steps, bool have_h) {
  if (!have_h) return;
  for (std::size_t i = 1; i < steps.size(); ++i)
    if (!(steps[i].time > steps[i - 1].time))
      throw qm_error("MeasurementChain: times must be strictly increasing under evolution");
}

// Complete rank-1 orthonormal family check: all rank 1, sum = identity.
void check_family(const std::vector<Projector>& fam, const char* what) {
  if (fam.empty()) throw qm_error(std::string(what) + ": incomplete family");
  const Eigen::Index n = fam.front().dim();
  Mat sum = Mat::Zero(n, n);
  for (const Projector& p : fam) {
    if (p.rank() != 1) throw qm_error(std::string(what) + ": family member not rank-1");
    sum += p.mat();
  }
  if (max_abs_norm(sum - Mat::Identity(n, n)) > 1e-8)
    throw qm_error(std::string(what) + ": incomplete family");
}

// Pi(t) = U(t)^dag Pi U(t), U(t) = exp(itH).
Mat conjugate_to_time(const Mat& pi, const std::optional<HermitianOperator>& h, double t) {
  if (!h || t == 0.0) return pi;
  Mat u = unitary_from_hamiltonian(*h, t).mat();
  return symmetrize(u.adjoint() * pi * u);
}

std::vector<std::string> index_labels(Eigen::Index n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

MeasurementChain::MeasurementChain(QuantumState initial, std::vector<ChainStep> steps,
                                   std::optional<HermitianOperator> hamiltonian)
    : initial_(std::move(initial)),
      steps_(std::move(steps)),
      hamiltonian_(std::move(hamiltonian)) {
  for (const ChainStep& s : steps_)
    if (s.projector.dim() != initial_.dim())
      throw qm_error("MeasurementChain: dimension mismatch");
  if (hamiltonian_ && hamiltonian_->dim() != initial_.dim())
    throw qm_error("MeasurementChain: dimension mismatch");
  check_chain_times(steps_, hamiltonian_.has_value());
}

MeasurementChain MeasurementChain::from_state(QuantumState initial,
                                              std::vector<ChainStep> steps,
                                              std::optional<HermitianOperator> hamiltonian) {
  return MeasurementChain(std::move(initial), std::move(steps), std::move(hamiltonian));
}

MeasurementChain MeasurementChain::from_projector(const Projector& pi_a,
                                                  std::vector<ChainStep> steps,
                                                  std::optional<HermitianOperator> hamiltonian) {
  double tr = pi_a.mat().trace().real();
  if (tr < 0.5) throw qm_error("wigner_chain: degenerate conditioning");
  return MeasurementChain(QuantumState::density(pi_a.mat() / tr), std::move(steps),
                          std::move(hamiltonian));
}

double wigner_chain(const MeasurementChain& chain) {
  if (chain.steps().empty()) throw qm_error("wigner_chain: empty chain");
  const auto& h = chain.hamiltonian();
  if (chain.initial().is_pure()) {
    Vec v = chain.initial().vector();
    for (const ChainStep& s : chain.steps())
      v = conjugate_to_time(s.projector.mat(), h, s.time) * v;
    return clip_probability(v.squaredNorm(), "wigner_chain");
  }
  Mat m = chain.initial().rho();
  for (const ChainStep& s : chain.steps()) {
    Mat pi = conjugate_to_time(s.projector.mat(), h, s.time);
    m = pi * m * pi;
  }
  return clip_probability(m.trace().real(), "wigner_chain");
}

TransitionTable markov_composition(const TransitionTable& ab, const TransitionTable& bc) {
  if (ab.p.cols() != bc.p.rows())
    throw qm_error("markov_composition: shape mismatch");
  return {ab.row_labels, bc.col_labels, ab.p * bc.p};
}

AmplitudeTable amplitude_composition(const AmplitudeTable& ab, const AmplitudeTable& bc) {
  if (ab.amp.cols() != bc.amp.rows())
    throw qm_error("amplitude_composition: shape mismatch");
  return {ab.row_labels, bc.col_labels, ab.amp * bc.amp};
}

DiscrepancyReport feynman_discrepancy(const std::vector<Projector>& a_basis,
                                      const std::vector<Projector>& b_basis,
                                      const std::vector<Projector>& c_basis,
                                      const QuantumState& state,
                                      const std::optional<HermitianOperator>& hamiltonian,
                                      double t1, double t2, double t3) {
  check_family(a_basis, "feynman_discrepancy (a)");
  check_family(b_basis, "feynman_discrepancy (b)");
  check_family(c_basis, "feynman_discrepancy (c)");

  const std::size_t na = a_basis.size(), nb = b_basis.size(), nc = c_basis.size();
  std::vector<Mat> at(na), bt(nb), ct(nc);
  for (std::size_t i = 0; i < na; ++i)
    at[i] = conjugate_to_time(a_basis[i].mat(), hamiltonian, t1);
  for (std::size_t j = 0; j < nb; ++j)
    bt[j] = conjugate_to_time(b_basis[j].mat(), hamiltonian, t2);
  for (std::size_t k = 0; k < nc; ++k)
    ct[k] = conjugate_to_time(c_basis[k].mat(), hamiltonian, t3);

  // Conditional hop between rank-1 projectors: tr(P Q).
  auto hop = [](const Mat& p, const Mat& q) {
    return clip_probability((p * q).trace().real(), "feynman_discrepancy");
  };

  Eigen::MatrixXd direct(na, nc), pab(na, nb), pbc(nb, nc);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k < nc; ++k) direct(i, k) = hop(at[i], ct[k]);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) pab(i, j) = hop(at[i], bt[j]);
  for (std::size_t j = 0; j < nb; ++j)
    for (std::size_t k = 0; k < nc; ++k) pbc(j, k) = hop(bt[j], ct[k]);

  DiscrepancyReport rep;
  rep.p_direct = {index_labels(na), index_labels(nc), direct};
  rep.p_markov = {index_labels(na), index_labels(nc), pab * pbc};
  rep.a_marginal.resize(na);
  for (std::size_t i = 0; i < na; ++i)
    rep.a_marginal[i] = born_probability(state, PovmEffect(Projector(at[i])));
  rep.max_abs_gap = (rep.p_direct.p - rep.p_markov.p).cwiseAbs().maxCoeff();
  return rep;
}

MemoryReport markov_violation_report(const HermitianOperator& observable,
                                     const HermitianOperator& hamiltonian,
                                     const QuantumState& state, double t1, double t2,
                                     double t3) {
  if (!(t1 < t2 && t2 < t3))
    throw qm_error("markov_violation_report: need t1 < t2 < t3");
  auto lines = spectral_decompose(observable);
  std::vector<Projector> basis;
  for (auto& l : lines) {
    if (l.eigenprojector.rank() != 1)
      throw qm_error("markov_violation_report: degenerate spectrum; refine the outcome basis");
    basis.push_back(l.eigenprojector);
  }
  MemoryReport rep;
  rep.increasing =
      feynman_discrepancy(basis, basis, basis, state, hamiltonian, t1, t2, t3);
  rep.decreasing =
      feynman_discrepancy(basis, basis, basis, state, hamiltonian, t3, t2, t1);
  rep.max_defect = std::max(rep.increasing.max_abs_gap, rep.decreasing.max_abs_gap);
  return rep;
}

namespace {

// Composite index layout: system index fastest, then pointer 1, pointer 2, ...
struct DemonSpace {
  Eigen::Index d;  // system dimension
  Eigen::Index p;  // pointer dimension
  int k;           // number of steps / pointers

  Eigen::Index total() const {
    Eigen::Index t = d;
    for (int i = 0; i < k; ++i) t *= p;
    return t;
  }
};

// Apply a d x d matrix to the system factor.
void apply_system(const DemonSpace& sp, const Mat& m, Vec& psi) {
  const Eigen::Index blocks = psi.size() / sp.d;
  for (Eigen::Index b = 0; b < blocks; ++b)
    psi.segment(b * sp.d, sp.d) = m * psi.segment(b * sp.d, sp.d);
}

// Apply exp(-i theta A (x) G) on (system, pointer j). G is diagonalized once;
// in its eigenbasis the action on the system is exp(-i theta gamma_m A).
void apply_coupling(const DemonSpace& sp, int j, double theta, const Mat& a_sys,
                    const Mat& g_vecs, const RealVec& g_vals, Vec& psi) {
  const Eigen::Index stride = [&] {
    Eigen::Index s = sp.d;
    for (int i = 0; i < j; ++i) s *= sp.p;
    return s;
  }();
  const Eigen::Index total = psi.size();
  const Eigen::Index outer = total / (stride * sp.p);

  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a_sys));
  if (es.info() != Eigen::Success) throw qm_error("demon_compare: eigensolver failed");

  Vec scratch(sp.p);
  // Transform pointer j to the G eigenbasis, apply the per-eigenvalue system
  // phase operator, transform back.
  for (Eigen::Index o = 0; o < outer; ++o) {
    const Eigen::Index base = o * stride * sp.p;
    for (Eigen::Index inner = 0; inner < stride; ++inner) {
      for (Eigen::Index r = 0; r < sp.p; ++r) scratch(r) = psi(base + r * stride + inner);
      scratch = g_vecs.adjoint() * scratch;
      for (Eigen::Index r = 0; r < sp.p; ++r) psi(base + r * stride + inner) = scratch(r);
    }
  }
  for (Eigen::Index m = 0; m < sp.p; ++m) {
    Vec phase(sp.d);
    for (Eigen::Index s = 0; s < sp.d; ++s)
      phase(s) = std::exp(cplx(0.0, -theta * g_vals(m) * es.eigenvalues()(s)));
    Mat op = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    for (Eigen::Index o = 0; o < outer; ++o) {
      const Eigen::Index base = o * stride * sp.p + m * stride;
      const Eigen::Index sysBlocks = stride / sp.d;
      for (Eigen::Index b = 0; b < sysBlocks; ++b)
        psi.segment(base + b * sp.d, sp.d) = op * psi.segment(base + b * sp.d, sp.d);
    }
  }
  for (Eigen::Index o = 0; o < outer; ++o) {
    const Eigen::Index base = o * stride * sp.p;
    for (Eigen::Index inner = 0; inner < stride; ++inner) {
      for (Eigen::Index r = 0; r < sp.p; ++r) scratch(r) = psi(base + r * stride + inner);
      scratch = g_vecs * scratch;
      for (Eigen::Index r = 0; r < sp.p; ++r) psi(base + r * stride + inner) = scratch(r);
    }
  }
}

// Joint readout: pointer levels -> outcome index min(level, 1), accumulated in
// lexicographic step-major order over outcome sequences.
void accumulate_readout(const DemonSpace& sp, const Vec& psi, double weight,
                        std::vector<double>& out) {
  const Eigen::Index total = psi.size();
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    double w = std::norm(psi(idx));
    if (w == 0.0) continue;
    Eigen::Index rest = idx / sp.d;
    std::size_t seq = 0;
    // Pointer 1 varies fastest in `rest`; step-major order makes step 1 the
    // most significant digit of the sequence index.
    for (int j = 0; j < sp.k; ++j) {
      Eigen::Index level = rest % sp.p;
      rest /= sp.p;
      std::size_t outcome = level >= 1 ? 1 : 0;
      seq = seq | (outcome << (sp.k - 1 - j));
    }
    out[seq] += weight * w;
  }
}

std::vector<double> demon_full_model(const MeasurementChain& chain, const DemonSpace& sp,
                                     double theta) {
  // Cyclic-shift generator: eigenvectors are discrete Fourier modes,
  // eigenvalues 2 pi m / p, so exp(-iG) advances the pointer one level.
  Mat fmodes(sp.p, sp.p);
  RealVec gvals(sp.p);
  const double twopi = 6.283185307179586477;
  for (Eigen::Index r = 0; r < sp.p; ++r)
    for (Eigen::Index m = 0; m < sp.p; ++m)
      fmodes(r, m) = std::exp(cplx(0.0, twopi * double(m) * double(r) / double(sp.p))) /
                     std::sqrt(double(sp.p));
  for (Eigen::Index m = 0; m < sp.p; ++m) gvals(m) = twopi * double(m) / double(sp.p);

  const auto& h = chain.hamiltonian();
  auto run_pure = [&](const Vec& sys0) {
    Vec psi = Vec::Zero(sp.total());
    psi.segment(0, sp.d) = sys0;  // all pointers in level 0
    double prev_t = 0.0;
    bool first = true;
    for (int j = 0; j < sp.k; ++j) {
      const ChainStep& s = chain.steps()[static_cast<std::size_t>(j)];
      if (h) {
        double dt = first ? s.time : s.time - prev_t;
        if (dt != 0.0)
          apply_system(sp, unitary_from_hamiltonian(*h, dt).mat(), psi);
      }
      first = false;
      prev_t = s.time;
      apply_coupling(sp, j, theta, s.projector.mat(), fmodes, gvals, psi);
    }
    return psi;
  };

  std::vector<double> dist(std::size_t(1) << sp.k, 0.0);
  if (chain.initial().is_pure()) {
    accumulate_readout(sp, run_pure(chain.initial().vector()), 1.0, dist);
  } else {
    // Density initial state: spectral mixture of pure runs.
    auto lines = spectral_decompose(HermitianOperator(chain.initial().rho()));
    for (const auto& l : lines) {
      if (l.eigenvalue <= 1e-14) continue;
      Eigen::SelfAdjointEigenSolver<Mat> es(l.eigenprojector.mat());
      for (Eigen::Index c = 0; c < es.eigenvalues().size(); ++c) {
        if (es.eigenvalues()(c) < 0.5) continue;
        accumulate_readout(sp, run_pure(es.eigenvectors().col(c)), l.eigenvalue, dist);
      }
    }
  }
  return dist;
}

}  // namespace

DemonReport demon_compare(const MeasurementChain& system_chain, const PointerModel& pointer) {
  const int k = static_cast<int>(system_chain.steps().size());
  if (k == 0) throw qm_error("demon_compare: empty chain");
  if (k > 20) throw qm_error("demon_compare: too many steps");

  DemonSpace sp;
  sp.d = system_chain.initial().dim();
  sp.p = pointer.pointer_dim > 0 ? pointer.pointer_dim : 3;  // outcomes(2) + 1
  sp.k = k;
  if (sp.total() > pointer.composite_cap)
    throw qm_error("demon_compare: composite dimension " + std::to_string(sp.total()) +
                   " exceeds cap " + std::to_string(pointer.composite_cap));

  DemonReport rep;
  const std::size_t nseq = std::size_t(1) << k;
  rep.wigner.assign(nseq, 0.0);

  // Bare-system chain value per outcome sequence; bit 0 selects 1-Pi.
  for (std::size_t seq = 0; seq < nseq; ++seq) {
    std::vector<ChainStep> steps;
    steps.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      const ChainStep& s = system_chain.steps()[static_cast<std::size_t>(j)];
      bool yes = (seq >> (k - 1 - j)) & 1u;
      Mat pi = yes ? s.projector.mat()
                   : Mat(Mat::Identity(sp.d, sp.d) - s.projector.mat());
      steps.push_back({Projector(pi), s.time});
    }
    rep.wigner[seq] = wigner_chain(MeasurementChain::from_state(
        system_chain.initial(), std::move(steps), system_chain.hamiltonian()));
  }

  const double theta = pointer.coupling_strength * pointer.coupling_duration;
  rep.full_model = demon_full_model(system_chain, sp, theta);

  double tv = 0.0;
  for (std::size_t s = 0; s < nseq; ++s) tv += std::abs(rep.wigner[s] - rep.full_model[s]);
  rep.total_variation = 0.5 * tv;
  return rep;
}

}  // namespace qmbench
