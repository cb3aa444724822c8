#include "qmbench/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "qmbench/hilbert.hpp"
#include "qmbench/linalg.hpp"
#include "qmbench/path_lab.hpp"
#include "qmbench/quantum_logic.hpp"
#include "qmbench/random.hpp"
#include "qmbench/rng.hpp"
#include "qmbench/sequence.hpp"
#include "qmbench/spin_sphere.hpp"

namespace qmbench {
namespace {

using nlohmann::json;

void emit(RunOutput& out, const Table& table) {
  out.files[table.name + ".csv"] = render_table_csv(table);
}

std::string param_line(const json& params) {
  std::string line = "params:";
  for (auto it = params.begin(); it != params.end(); ++it) {
    line += ' ';
    line += it.key();
    line += '=';
    line += it.value().dump();
  }
  return line;
}

std::vector<Projector> pauli_eigenbasis(const Mat& axis_matrix) {
  std::vector<Projector> family;
  for (const auto& line : spectral_decompose(HermitianOperator(axis_matrix)))
    family.push_back(line.eigenprojector);
  return family;  // ascending eigenvalue: index 0 is the -1 outcome
}

Mat random_unitary(SequentialRng& rng, Eigen::Index n) {
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Mat> qr(g);
  return qr.householderQ() * Mat::Identity(n, n);
}

std::vector<int> random_half_mask(SequentialRng& rng, int n) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n / 2);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// ---------------------------------------------------------------- feynman-gap

void run_feynman_gap(const json& p, RunOutput& out) {
  const double t1 = p["t1"], t2 = p["t2"], t3 = p["t3"];
  const double h_coeff = p["h_coeff"];
  std::optional<HermitianOperator> h;
  if (h_coeff != 0.0) h = HermitianOperator(h_coeff * pauli_x());

  const auto z_basis = pauli_eigenbasis(pauli_z());
  const auto x_basis = pauli_eigenbasis(pauli_x());
  const QuantumState state = make_state((Vec(2) << 1.0, 0.0).finished());

  auto table_for = [&](const char* name, const std::vector<Projector>& mid,
                       const char* note) {
    const auto rep = feynman_discrepancy(z_basis, mid, z_basis, state, h, t1, t2, t3);
    Table t;
    t.name = name;
    t.comments = {"two-time composition gap on a spin-1/2 chain", note, param_line(p),
                  "max_abs_gap = " + format_double(rep.max_abs_gap)};
    t.columns = {"a_index", "c_index", "p_direct", "p_markov", "abs_gap"};
    for (Eigen::Index i = 0; i < rep.p_direct.p.rows(); ++i)
      for (Eigen::Index j = 0; j < rep.p_direct.p.cols(); ++j)
        t.rows.push_back({double(i), double(j), rep.p_direct.p(i, j), rep.p_markov.p(i, j),
                          std::abs(rep.p_direct.p(i, j) - rep.p_markov.p(i, j))});
    emit(out, t);
    return rep.max_abs_gap;
  };

  table_for("gap", x_basis,
            "intermediate family: x eigenbasis (does not commute with the endpoints)");
  table_for("gap_control", z_basis,
            "intermediate family: z eigenbasis (commutes with the endpoints; gap vanishes)");
}

// -------------------------------------------------------------------- ql-meet

void run_ql_meet(const json& p, RunOutput& out) {
  const std::uint64_t seed = p["seed"];
  const int dim_min = p["dim_min"], dim_max = p["dim_max"];
  const int n_pairs = p["n_pairs"], n_chain = p["n_chain"];
  const int n_dims = dim_max - dim_min + 1;
  SequentialRng rng(seed);

  Table pairs;
  pairs.name = "meet_random";
  pairs.comments = {"meet of random projector pairs: containment and idempotency residuals",
                    param_line(p)};
  pairs.columns = {"pair", "dim", "rank_p", "rank_q", "rank_meet", "idem_residual",
                   "contain_p", "contain_q"};
  double worst = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    const Eigen::Index dim = dim_min + i % n_dims;
    const auto rp = static_cast<Eigen::Index>(rng.uniform_index(dim - 1) + 1);
    const auto rq = static_cast<Eigen::Index>(rng.uniform_index(dim - 1) + 1);
    const Projector P = random_projector(rng, dim, rp);
    const Projector Q = random_projector(rng, dim, rq);
    const Projector M = meet(P, Q);
    const double idem = max_abs_norm(M.mat() * M.mat() - M.mat());
    const double cp = max_abs_norm(P.mat() * M.mat() - M.mat());
    const double cq = max_abs_norm(Q.mat() * M.mat() - M.mat());
    worst = std::max({worst, idem, cp, cq});
    pairs.rows.push_back({double(i), double(dim), double(P.rank()), double(Q.rank()),
                          double(M.rank()), idem, cp, cq});
  }
  pairs.comments.push_back("worst residual = " + format_double(worst));
  emit(out, pairs);

  Table comm;
  comm.name = "meet_commuting";
  comm.comments = {"commuting pairs: the meet coincides with the operator product",
                   param_line(p)};
  comm.columns = {"pair", "dim", "diff_from_product"};
  double worst_comm = 0.0;
  for (int i = 0; i < std::max(1, n_pairs / 5); ++i) {
    const Eigen::Index dim = dim_min + i % n_dims;
    const Mat u = random_unitary(rng, dim);
    Mat d1 = Mat::Zero(dim, dim), d2 = Mat::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (rng.uniform() < 0.5) d1(k, k) = 1.0;
      if (rng.uniform() < 0.5) d2(k, k) = 1.0;
    }
    const Projector P(u * d1 * u.adjoint());
    const Projector Q(u * d2 * u.adjoint());
    const Projector M = meet(P, Q);
    const double diff = max_abs_norm(M.mat() - symmetrize(P.mat() * Q.mat()));
    worst_comm = std::max(worst_comm, diff);
    comm.rows.push_back({double(i), double(dim), diff});
  }
  comm.comments.push_back("worst difference = " + format_double(worst_comm));
  emit(out, comm);

  Table chain;
  chain.name = "chain_sum";
  chain.comments = {
      "sum over a complete rank-1 family of <a| meet(b, c) |a> against <a|c|a>",
      "commuting = 1: the family diagonalizes the target and the sum closes",
      param_line(p)};
  chain.columns = {"trial", "dim", "commuting", "lhs", "rhs", "delta"};
  for (int i = 0; i < n_chain; ++i) {
    const Eigen::Index dim = dim_min + i % n_dims;
    const QuantumState a = random_pure_state(rng, dim);
    const Mat u = random_unitary(rng, dim);
    std::vector<Projector> basis;
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Vec col = u.col(k);
      basis.emplace_back(Mat(col * col.adjoint()));
    }
    Mat d = Mat::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
      if (rng.uniform() < 0.5) d(k, k) = 1.0;
    const Projector pc_comm(u * d * u.adjoint());
    const auto rep_comm = ql_chain_sum_check(a, basis, pc_comm);
    chain.rows.push_back({double(i), double(dim), 1.0, rep_comm.lhs, rep_comm.rhs,
                          rep_comm.delta});
    const auto rc = static_cast<Eigen::Index>(rng.uniform_index(dim - 1) + 1);
    const Projector pc_generic = random_projector(rng, dim, rc);
    const auto rep_gen = ql_chain_sum_check(a, basis, pc_generic);
    chain.rows.push_back({double(i), double(dim), 0.0, rep_gen.lhs, rep_gen.rhs,
                          rep_gen.delta});
  }
  emit(out, chain);
}

// ----------------------------------------------------------- wigner-two-step

void run_wigner_two_step(const json& p, RunOutput& out) {
  const std::uint64_t seed = p["seed"];
  const Eigen::Index dim = p["dim"];
  const int n_triples = p["n_triples"];
  SequentialRng rng(seed);

  Table t;
  t.name = "two_step";
  t.comments = {"two-step chain probability against the collapsed effect Pi_b Pi_c Pi_b",
                param_line(p)};
  t.columns = {"trial", "pure", "chain_p", "effect_p", "abs_diff"};
  double worst = 0.0;
  for (int i = 0; i < n_triples; ++i) {
    const bool pure = (i % 2 == 0);
    const QuantumState state =
        pure ? random_pure_state(rng, dim) : random_density(rng, dim);
    const auto rb = static_cast<Eigen::Index>(rng.uniform_index(dim - 1) + 1);
    const auto rc = static_cast<Eigen::Index>(rng.uniform_index(dim - 1) + 1);
    const Projector pb = random_projector(rng, dim, rb);
    const Projector pc = random_projector(rng, dim, rc);
    const double chain_p = wigner_chain(
        MeasurementChain::from_state(state, {{pb, 0.0}, {pc, 0.0}}, {}));
    const PovmEffect effect(symmetrize(pb.mat() * pc.mat() * pb.mat()));
    const double effect_p = born_probability(state, effect);
    const double diff = std::abs(chain_p - effect_p);
    worst = std::max(worst, diff);
    t.rows.push_back({double(i), pure ? 1.0 : 0.0, chain_p, effect_p, diff});
  }
  t.comments.push_back("max_abs_diff = " + format_double(worst));
  emit(out, t);
}

// ---------------------------------------------------------------- demon-sweep

void run_demon_sweep(const json& p, RunOutput& out) {
  const double h_coeff = p["h_coeff"];
  const double t1 = p["t1"], t2 = p["t2"];
  const int pointer_dim = p["pointer_dim"];
  const int composite_cap = p["composite_cap"];
  const std::vector<double> couplings = p["couplings"];

  const QuantumState psi0 = make_state((Vec(2) << 1.0, 0.0).finished());
  const auto chain = MeasurementChain::from_state(
      psi0,
      {{spin_projector(unit_vector(1, 0, 0)), t1}, {spin_projector(unit_vector(0, 0, 1)), t2}},
      HermitianOperator(h_coeff * pauli_x()));

  Table sweep;
  sweep.name = "demon_sweep";
  sweep.comments = {
      "pointer-model readout against the chain formula, swept over coupling strength",
      "strong coupling reproduces the chain; weak coupling degrades gracefully",
      param_line(p)};
  sweep.columns = {"coupling", "total_variation"};
  DemonReport last;
  for (double theta : couplings) {
    PointerModel pm;
    pm.pointer_dim = pointer_dim;
    pm.coupling_strength = theta;
    pm.coupling_duration = 1.0;
    pm.composite_cap = composite_cap;
    last = demon_compare(chain, pm);
    sweep.rows.push_back({theta, last.total_variation});
  }
  emit(out, sweep);

  Table joint;
  joint.name = "demon_joint";
  joint.comments = {"per-sequence probabilities at the strongest coupling",
                    "bit 1 means the step projector fired; step 1 is the high bit"};
  joint.columns = {"sequence", "bit_1", "bit_2", "chain_p", "model_p", "abs_diff"};
  for (std::size_t s = 0; s < last.wigner.size(); ++s)
    joint.rows.push_back({double(s), double((s >> 1) & 1), double(s & 1), last.wigner[s],
                          last.full_model[s],
                          std::abs(last.wigner[s] - last.full_model[s])});
  emit(out, joint);

  const auto commuting_chain = MeasurementChain::from_state(
      psi0,
      {{spin_projector(unit_vector(0, 0, 1)), t1}, {spin_projector(unit_vector(0, 0, 1)), t2}},
      HermitianOperator(h_coeff * pauli_z()));
  PointerModel pm;
  pm.pointer_dim = pointer_dim;
  pm.coupling_strength = couplings.empty() ? 1.0 : couplings.back();
  pm.coupling_duration = 1.0;
  pm.composite_cap = composite_cap;
  const auto rep = demon_compare(commuting_chain, pm);
  Table comm;
  comm.name = "demon_commuting";
  comm.comments = {"fully commuting control chain: the pointer model is exact"};
  comm.columns = {"coupling", "total_variation"};
  comm.rows.push_back({pm.coupling_strength, rep.total_variation});
  emit(out, comm);
}

// -------------------------------------------------------------- markov-memory

void run_markov_memory(const json& p, RunOutput& out) {
  const double h_coeff = p["h_coeff"];
  const double t1 = p["t1"], t2 = p["t2"], t3 = p["t3"];
  const HermitianOperator h(h_coeff * pauli_x());
  const QuantumState state = make_state((Vec(2) << 1.0, 0.0).finished());

  auto table_for = [&](const char* name, const Mat& observable, const char* note) {
    const auto rep =
        markov_violation_report(HermitianOperator(observable), h, state, t1, t2, t3);
    Table t;
    t.name = name;
    t.comments = {"Chapman-Kolmogorov defect of repeated observation, both time orders",
                  note, param_line(p),
                  "max_defect = " + format_double(rep.max_defect)};
    t.columns = {"ordering", "a_index", "c_index", "p_direct", "p_markov", "abs_gap"};
    for (int ord = 0; ord < 2; ++ord) {
      const auto& d = ord == 0 ? rep.increasing : rep.decreasing;
      for (Eigen::Index i = 0; i < d.p_direct.p.rows(); ++i)
        for (Eigen::Index j = 0; j < d.p_direct.p.cols(); ++j)
          t.rows.push_back({double(ord), double(i), double(j), d.p_direct.p(i, j),
                            d.p_markov.p(i, j),
                            std::abs(d.p_direct.p(i, j) - d.p_markov.p(i, j))});
    }
    emit(out, t);
    return rep.max_defect;
  };

  const double defect = table_for(
      "memory_defect", pauli_z(),
      "observable: z component; generator: x component (non-commuting, defect > 0)");
  table_for("memory_commuting", pauli_x(),
            "observable commutes with the generator; defect vanishes");

  const double closed =
      0.5 * std::abs(std::sin(2 * h_coeff * (t2 - t1)) * std::sin(2 * h_coeff * (t3 - t2)));
  Table summary;
  summary.name = "memory_summary";
  summary.comments = {"closed form for this geometry: |sin(2w dt12) sin(2w dt23)| / 2"};
  summary.columns = {"max_defect", "closed_form", "abs_diff"};
  summary.rows.push_back({defect, closed, std::abs(defect - closed)});
  emit(out, summary);
}

// ---------------------------------------------------------------- spin-sphere

void run_spin_sphere(const json& p, RunOutput& out) {
  SphereModelConfig cfg;
  cfg.conditioning_direction = unit_vector(p["ux"], p["uy"], p["uz"]);
  cfg.n_samples = p["n_samples"];
  cfg.seed = p["seed"];
  const int grid_count = p["grid_count"];

  std::vector<UnitVector3> dirs;
  dirs.push_back(cfg.conditioning_direction);
  dirs.push_back(-cfg.conditioning_direction);
  for (const auto& v : fibonacci_sphere_grid(grid_count)) dirs.push_back(v);

  const auto rows = sphere_vs_quantum(cfg, dirs);
  Table t;
  t.name = "sphere_vs_quantum";
  t.comments = {"hidden-vector hemisphere model against the closed form (1 + u.v)/2",
                "rows 0 and 1 are the conditioning direction and its antipode",
                param_line(p)};
  t.columns = {"vx", "vy", "vz", "p_hat", "p_quantum", "std_err", "z_score"};
  double worst_z = 0.0;
  for (const auto& r : rows) {
    worst_z = std::max(worst_z, std::abs(r.z_score));
    t.rows.push_back({r.v.x, r.v.y, r.v.z, r.p_hat, r.p_quantum, r.std_err, r.z_score});
  }
  t.comments.push_back("max_abs_z = " + format_double(worst_z));
  emit(out, t);
}

// ---------------------------------------------------------------- joint-value

void run_joint_value(const json& p, RunOutput& out) {
  std::vector<std::vector<UnitVector3>> sets;
  sets.push_back({unit_vector(1, 0, 0), unit_vector(0, 1, 0), unit_vector(0, 0, 1)});
  sets.push_back(pyramid_frame());
  if (p["extend"].get<int>() != 0) {
    auto ext = pyramid_frame();
    ext.push_back(unit_vector(1, 2, 3));
    sets.push_back(ext);
  }

  Table dirs;
  dirs.name = "joint_directions";
  dirs.columns = {"set_index", "dir_index", "x", "y", "z"};
  Table t;
  t.name = "joint_value";
  t.comments = {
      "least-squares residual of the best single sign assignment over all pair correlations",
      "a residual above 0.1 rules out one shared hidden outcome list for the set",
      param_line(p)};
  t.columns = {"set_index", "k", "best_residual", "assignments_tested"};
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const auto& set = sets[s];
    for (std::size_t d = 0; d < set.size(); ++d)
      dirs.rows.push_back({double(s), double(d), set[d].x, set[d].y, set[d].z});
    if (set.size() >= 4) {
      const auto rep = joint_value_infeasibility(set);
      t.rows.push_back({double(s), double(set.size()), rep.best_residual,
                        double(rep.assignments_tested)});
    } else {
      t.rows.push_back({double(s), double(set.size()), best_assignment_residual(set),
                        double(1ull << set.size())});
    }
  }
  emit(out, t);
  emit(out, dirs);
}

// ------------------------------------------------------------------- path-cdf

void run_path_cdf(const json& p, RunOutput& out) {
  const int n = p["n"];
  const double dx = p["dx"];
  const Lattice1D lat = Lattice1D::centered(n, dx);
  const double mass = p["mass"];
  const LatticeSystem sys(lat, build_hamiltonian(lat, {}, mass));

  GaussianPacket packet;
  packet.x0 = p["x0"];
  packet.sigma = p["sigma"];
  packet.k0 = p["k0"];
  const QuantumState state = gaussian_packet_state(lat, packet);

  const TimeGrid grid(0.0, p["t_end"], p["n_steps"]);
  PathSpec line;
  for (double tk : grid.times()) line.samples.push_back(packet.x0 + packet.k0 / mass * tk);

  const auto delta_op = path_distance_operator(sys, line, grid);
  double ev_max = 0.0;
  for (const auto& l : spectral_decompose(delta_op)) ev_max = std::max(ev_max, l.eigenvalue);

  const int eps_count = p["eps_count"];
  std::vector<double> eps_grid;
  for (int i = 0; i < eps_count; ++i) eps_grid.push_back(ev_max * i / (eps_count - 1));
  const auto cdf = distance_distribution(state, sys, line, grid, eps_grid);

  Table ct;
  ct.name = "path_cdf";
  ct.comments = {"probability of staying within a band of the straight ballistic path",
                 "band width is the root-time-summed squared deviation", param_line(p)};
  ct.columns = {"eps", "probability"};
  for (const auto& [eps, prob] : cdf) ct.rows.push_back({eps, prob});
  emit(out, ct);

  const PathSpec xbar = expected_path(state, sys, grid);
  Table et;
  et.name = "expected_path";
  et.comments = {"Heisenberg position expectation against the ballistic reference line"};
  et.columns = {"t", "x_expected", "x_reference", "abs_err"};
  const auto times = grid.times();
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double err = std::abs(xbar.samples[k] - line.samples[k]);
    worst = std::max(worst, err);
    et.rows.push_back({times[k], xbar.samples[k], line.samples[k], err});
  }
  et.comments.push_back("max_abs_err = " + format_double(worst));
  emit(out, et);
}

// ---------------------------------------------------------------- double-slit

void run_double_slit(const json& p, RunOutput& out) {
  const int n = p["n"];
  const double dx = p["dx"];
  const Lattice1D lat = Lattice1D::centered(n, dx);
  GaussianPacket src;
  src.x0 = p["source_x0"];
  src.sigma = p["source_sigma"];
  src.k0 = p["source_k0"];

  SlitSetup hard(lat, p["slit_a"], p["slit_b"], src, p["t_screen"]);
  hard.mass = p["mass"];
  hard.n_steps = p["n_steps"];

  const auto both = screen_marginal(hard, SlitMode::both);
  const auto only_a = screen_marginal(hard, SlitMode::only_a);
  const auto only_b = screen_marginal(hard, SlitMode::only_b);
  Table screen;
  screen.name = "screen";
  screen.comments = {
      "screen marginal with both slits open against each slit alone (hard masks)",
      "each column is normalized on its own transmitted packet", param_line(p)};
  screen.columns = {"x", "p_both", "p_only_a", "p_only_b"};
  for (int j = 0; j < n; ++j)
    screen.rows.push_back({lat.coord(j), both[j], only_a[j], only_b[j]});
  emit(out, screen);

  SlitSetup soft = hard;
  soft.slit_profile_sigma = p["profile_sigma"];
  soft.eps = p["eps"];

  Table inf;
  inf.name = "inference";
  inf.comments = {
      "which-slit inference from path bands around the two straight slit-to-detector lines",
      "ratio > 1 favors slit A; conclusive = 0 means the bands cannot distinguish"};
  inf.columns = {"x_detector", "p_a", "p_b", "likelihood_ratio", "conclusive", "eps_used"};
  const double det_x = p["det_x"];
  bool primary_conclusive = true;
  for (double det : {det_x, src.x0}) {
    const auto r = double_slit_inference(soft, lat.site_of(det));
    if (det == det_x) primary_conclusive = r.conclusive;
    inf.rows.push_back({det, r.p_a, r.p_b, r.likelihood_ratio, r.conclusive ? 1.0 : 0.0,
                        r.eps_used});
  }
  emit(out, inf);

  if (!primary_conclusive) {
    out.status = "inconclusive";
    out.exit_code = 2;
  }
}

// ----------------------------------------------------------------- oscillator

void run_oscillator(const json& p, RunOutput& out) {
  const int n = p["n"];
  const double extent = p["extent"];
  const double a = p["a"];
  const int n_levels = p["n_levels"];
  const Lattice1D lat = Lattice1D::centered(n, extent / n);
  const auto spectrum = oscillator_spectrum(a, lat);

  Table t;
  t.name = "oscillator_spectrum";
  t.comments = {"low spectrum of p^2 + a^2 q^2 against the odd-multiple ladder (2k+1) a",
                param_line(p)};
  t.columns = {"k", "eigenvalue", "reference", "rel_err"};
  double worst5 = 0.0;
  for (int k = 0; k < n_levels && k < static_cast<int>(spectrum.size()); ++k) {
    const double ref = (2.0 * k + 1.0) * a;
    const double rel = std::abs(spectrum[k] - ref) / ref;
    if (k < 5) worst5 = std::max(worst5, rel);
    t.rows.push_back({double(k), spectrum[k], ref, rel});
  }
  t.comments.push_back("max_rel_err_lowest5 = " + format_double(worst5));
  emit(out, t);
}

// ---------------------------------------------------------- region-degeneracy

void run_region_degeneracy(const json& p, RunOutput& out) {
  const int n = p["n"];
  const double dx = p["dx"];
  const double t1 = p["t1"], t2 = p["t2"];
  const int trials = p["trials"];
  const Lattice1D lat = Lattice1D::centered(n, dx);
  const LatticeSystem sys(lat, build_hamiltonian(lat, {}, p["mass"]));
  const TimeGrid grid(t1, t1 + 2.0 * (t2 - t1), 2);  // visits exactly t1 and t2

  SequentialRng rng(p["seed"].get<std::uint64_t>());
  Table t;
  t.name = "region_rank";
  t.comments = {
      "rank of the joint half-region projector at two widely separated times",
      "free spreading makes generic joint position claims empty", param_line(p)};
  t.columns = {"trial", "rank"};
  int zero_trials = 0;
  for (int i = 0; i < trials; ++i) {
    const auto mask_a = random_half_mask(rng, n);
    const auto mask_b = random_half_mask(rng, n);
    const auto res = joint_region_projector(sys, {mask_a, mask_b}, grid);
    if (res.dim == 0) ++zero_trials;
    t.rows.push_back({double(i), double(res.dim)});
  }
  t.comments.push_back("zero_fraction = " +
                       format_double(double(zero_trials) / double(trials)));
  emit(out, t);
}

// ------------------------------------------------------------------- registry

struct ScenarioEntry {
  ScenarioInfo info;
  std::function<void(const json&, RunOutput&)> run;
};

const std::vector<ScenarioEntry>& entries() {
  static const std::vector<ScenarioEntry> table = [] {
    std::vector<ScenarioEntry> v;
    v.push_back({{"feynman-gap", "sequence-engine",
                  "Two-time composition gap: direct conditionals vs chained hops",
                  "probability composition gap (Markov vs amplitude chaining)",
                  json{{"t1", 0.0}, {"t2", 0.5}, {"t3", 1.0}, {"h_coeff", 0.0}}},
                 run_feynman_gap});
    v.push_back({{"ql-meet", "quantum-logic",
                  "Random projector meets: containment, commuting product, chain sums",
                  "lattice meet as the eigenvalue-2 subspace of P + Q",
                  json{{"seed", 20240816}, {"dim_min", 2}, {"dim_max", 8},
                       {"n_pairs", 1000}, {"n_chain", 50}}},
                 run_ql_meet});
    v.push_back({{"wigner-two-step", "sequence-engine",
                  "Two-step chain probability equals the collapsed-effect expectation",
                  "Wigner chain formula, two-step reduction",
                  json{{"seed", 7}, {"dim", 4}, {"n_triples", 500}}},
                 run_wigner_two_step});
    v.push_back({{"demon-sweep", "sequence-engine",
                  "Pointer-model readout vs the chain formula over coupling strength",
                  "von Neumann pointer coupling reproducing sequential outcomes",
                  json{{"h_coeff", 0.3}, {"t1", 0.7}, {"t2", 1.6}, {"pointer_dim", 3},
                       {"couplings", json::array({0.0625, 0.125, 0.25, 0.375, 0.5, 0.625,
                                                  0.75, 0.875, 1.0})},
                       {"composite_cap", 4096}}},
                 run_demon_sweep});
    v.push_back({{"markov-memory", "sequence-engine",
                  "Chapman-Kolmogorov defect of repeated observation, both time orders",
                  "memory in repeated quantum observation",
                  json{{"h_coeff", 1.0}, {"t1", 0.0}, {"t2", 0.4}, {"t3", 1.1}}},
                 run_markov_memory});
    v.push_back({{"spin-sphere", "spin-sphere",
                  "Hemisphere hidden-vector model vs the closed-form spin correlation",
                  "cosine-weighted hidden directions reproducing (1 + u.v)/2",
                  json{{"seed", 20240816}, {"n_samples", 1000000}, {"grid_count", 32},
                       {"ux", 0.0}, {"uy", 0.0}, {"uz", 1.0}}},
                 run_spin_sphere});
    v.push_back({{"joint-value", "spin-sphere",
                  "Best single sign assignment cannot match all pair correlations",
                  "joint-value infeasibility for spin directions",
                  json{{"extend", 1}}},
                 run_joint_value});
    v.push_back({{"path-cdf", "path-lab",
                  "Distance-to-path distribution and expected path of a drifting packet",
                  "path-distance operator and its band projectors",
                  json{{"n", 128}, {"dx", 1.0}, {"x0", -20.0}, {"sigma", 6.0}, {"k0", 0.3},
                       {"t_end", 60.0}, {"n_steps", 16}, {"mass", 1.0}, {"eps_count", 25}}},
                 run_path_cdf});
    v.push_back({{"double-slit", "path-lab",
                  "Screen fringes with both slits open; which-slit path-band inference",
                  "interference vs path attribution in a two-slit lattice model",
                  json{{"n", 128}, {"dx", 1.0}, {"slit_a", -12.0}, {"slit_b", 12.0},
                       {"source_x0", 0.0}, {"source_sigma", 30.0}, {"source_k0", 0.0},
                       {"t_screen", 40.0}, {"mass", 1.0}, {"profile_sigma", 2.5},
                       {"eps", 0.0}, {"det_x", -24.0}, {"n_steps", 16}}},
                 run_double_slit});
    v.push_back({{"oscillator", "path-lab",
                  "Discrete p^2 + a^2 q^2 spectrum against the odd-multiple ladder",
                  "oscillator spectrum as a lattice convergence check",
                  json{{"n", 256}, {"extent", 24.0}, {"a", 1.0}, {"n_levels", 8}}},
                 run_oscillator});
    v.push_back({{"region-degeneracy", "path-lab",
                  "Joint two-time half-region projectors collapse to rank zero",
                  "degeneracy of conjoined region claims at separated times",
                  json{{"seed", 20240816}, {"n", 64}, {"dx", 1.0}, {"t1", 37.0},
                       {"t2", 151.0}, {"trials", 100}, {"mass", 1.0}}},
                 run_region_degeneracy});
    return v;
  }();
  return table;
}

const ScenarioEntry& find_entry(const std::string& name) {
  for (const auto& e : entries())
    if (e.info.name == name) return e;
  throw qm_error("unknown scenario '" + name + "'; run the list verb for the registry");
}

void check_param(std::vector<Diagnostic>& out, const json& params, const char* key,
                 double lo, double hi, const char* what) {
  if (!params.contains(key)) return;
  const double v = params[key];
  if (v < lo || v > hi)
    out.push_back({"error", std::string(key) + " = " + format_double(v) + ": " + what});
}

std::vector<Diagnostic> scenario_checks(const ScenarioInfo& info, const json& params) {
  std::vector<Diagnostic> d;
  check_param(d, params, "n_samples", 1, 1e12, "sample count must be positive");
  check_param(d, params, "n_pairs", 1, 1e7, "pair count must be positive");
  check_param(d, params, "n_triples", 1, 1e7, "triple count must be positive");
  check_param(d, params, "trials", 1, 1e6, "trial count must be positive");
  check_param(d, params, "n", 8, 4096, "lattice size must be between 8 and 4096 sites");
  check_param(d, params, "dim", 2, 64, "Hilbert dimension must be between 2 and 64");
  check_param(d, params, "dx", 1e-6, 1e6, "lattice spacing must be positive");
  check_param(d, params, "mass", 1e-9, 1e9, "mass must be positive");
  check_param(d, params, "eps_count", 2, 100000, "band grid needs at least two points");
  check_param(d, params, "n_levels", 1, 4096, "level count must be positive");
  check_param(d, params, "n_steps", 1, 100000, "time grid needs at least one step");
  if (info.name == "demon-sweep") {
    const int pdim = params["pointer_dim"];
    if (pdim < 2) d.push_back({"error", "pointer_dim must be at least 2"});
    const int cap = params["composite_cap"];
    const long composite = 2L * pdim * pdim;
    if (composite > cap)
      d.push_back({"error", "composite dimension " + std::to_string(composite) +
                                " exceeds cap " + std::to_string(cap)});
    for (double theta : params["couplings"].get<std::vector<double>>())
      if (theta <= 0.0) d.push_back({"error", "couplings must be positive"});
  }
  if (info.name == "spin-sphere") {
    const double ns = params["n_samples"];
    if (ns > 0 && ns < 10000)
      d.push_back({"warning",
                   "n_samples below 10000: statistical error will dominate the comparison"});
    const double r = std::hypot(params["ux"].get<double>(),
                                std::hypot(params["uy"].get<double>(),
                                           params["uz"].get<double>()));
    if (r == 0.0) d.push_back({"error", "conditioning direction must be nonzero"});
  }
  if (info.name == "ql-meet" || info.name == "wigner-two-step") {
    if (params.contains("dim_min") &&
        params["dim_min"].get<int>() > params["dim_max"].get<int>())
      d.push_back({"error", "dim_min exceeds dim_max"});
    if (params.contains("dim_min") && params["dim_min"].get<int>() < 2)
      d.push_back({"error", "dimensions below 2 have no nontrivial projectors"});
  }
  if (info.name == "double-slit" && params["slit_a"] == params["slit_b"])
    d.push_back({"error", "slits must sit at distinct positions"});
  if (info.name == "region-degeneracy") {
    const double span = std::abs(params["t2"].get<double>() - params["t1"].get<double>());
    const double need = params["n"].get<double>() * params["dx"].get<double>();
    if (span < 0.5 * need)
      d.push_back({"warning",
                   "time separation below half the lattice extent: the propagator stays "
                   "quasi-local and spurious intersections are likely"});
  }
  if (info.name == "oscillator") {
    const double extent = params["extent"];
    const double a = params["a"];
    if (extent * std::sqrt(a) < 12.0)
      d.push_back({"warning",
                   "extent too small for well-confined low modes; expect tail-mass errors"});
  }
  return d;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const ScenarioInfo& find_scenario(const std::string& name) { return find_entry(name).info; }

nlohmann::json resolve_params(const ScenarioInfo& info, const nlohmann::json& overrides) {
  json params = info.defaults;
  if (overrides.is_null()) return params;
  if (!overrides.is_object())
    throw qm_error("scenario config must be a JSON object of parameter overrides");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (!params.contains(it.key()))
      throw qm_error("unknown parameter '" + it.key() + "' for scenario '" + info.name +
                     "'");
    const json& def = params[it.key()];
    const json& val = it.value();
    if (def.is_number() && !val.is_number())
      throw qm_error("parameter '" + it.key() + "' expects a number");
    if (def.is_array() && !val.is_array())
      throw qm_error("parameter '" + it.key() + "' expects an array");
    params[it.key()] = val;
  }
  return params;
}

std::vector<Diagnostic> validate_config(const std::string& name,
                                        const nlohmann::json& overrides) {
  std::vector<Diagnostic> out;
  const ScenarioEntry* entry = nullptr;
  try {
    entry = &find_entry(name);
  } catch (const qm_error& e) {
    out.push_back({"error", e.what()});
    return out;
  }
  json params;
  try {
    params = resolve_params(entry->info, overrides);
  } catch (const qm_error& e) {
    out.push_back({"error", e.what()});
    return out;
  }
  auto checks = scenario_checks(entry->info, params);
  out.insert(out.end(), checks.begin(), checks.end());
  out.push_back({"note", "resolved " + param_line(params)});
  return out;
}

RunOutput run_scenario(const std::string& name, const nlohmann::json& overrides) {
  const auto& entry = find_entry(name);
  const json params = resolve_params(entry.info, overrides);
  for (const auto& diag : scenario_checks(entry.info, params))
    if (diag.severity == "error") throw qm_error(name + ": " + diag.message);

  RunOutput out;
  out.scenario = name;
  out.status = "ok";
  out.exit_code = 0;
  entry.run(params, out);

  json files = json::array();
  for (const auto& [fname, bytes] : out.files)
    files.push_back(json{{"name", fname},
                         {"bytes", bytes.size()},
                         {"fnv1a64", hex64(fnv1a64(bytes))}});
  out.manifest = json{{"artifact_version", kArtifactVersion},
                      {"scenario", name},
                      {"module", entry.info.module_name},
                      {"anchor", entry.info.anchor},
                      {"params", params},
                      {"status", out.status},
                      {"files", files}};
  return out;
}

std::string write_run(const RunOutput& run, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(out_dir) / run.scenario;
  fs::create_directories(dir);
  auto write_file = [&](const fs::path& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw qm_error("cannot open " + path.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  };
  for (const auto& [fname, bytes] : run.files) write_file(dir / fname, bytes);
  write_file(dir / "manifest.json", run.manifest.dump(2) + "\n");
  return dir.string();
}

}  // namespace qmbench
