#pragma once

#include <string>
#include <vector>

#include "qmbench/hilbert.hpp"

namespace qmbench {

struct ChainStep {
  Projector projector;
  double time = 0.0;
};

// Ordered sequence of projective measurements on one system, optionally
// interleaved with Hamiltonian evolution. Times must be strictly increasing
// when a Hamiltonian is present.
class MeasurementChain {
 public:
  static MeasurementChain from_state(QuantumState initial, std::vector<ChainStep> steps,
                                     std::optional<HermitianOperator> hamiltonian = {});
  // Initial state Pi_a / tr(Pi_a); rejects the zero projector.
  static MeasurementChain from_projector(const Projector& pi_a, std::vector<ChainStep> steps,
                                         std::optional<HermitianOperator> hamiltonian = {});

  const QuantumState& initial() const { return initial_; }
  const std::vector<ChainStep>& steps() const { return steps_; }
  const std::optional<HermitianOperator>& hamiltonian() const { return hamiltonian_; }

 private:
  MeasurementChain(QuantumState initial, std::vector<ChainStep> steps,
                   std::optional<HermitianOperator> hamiltonian);
  QuantumState initial_;
  std::vector<ChainStep> steps_;
  std::optional<HermitianOperator> hamiltonian_;
};

// Nested two-sided product probability of the full chain. Projectors at time t
// are first conjugated to Pi(t) = U(t)^dag Pi U(t) with U(t) = exp(itH).
double wigner_chain(const MeasurementChain& chain);

struct TransitionTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Eigen::MatrixXd p;
};

struct AmplitudeTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Mat amp;
};

// Matrix product of probability tables: (ab * bc)(a,c) = sum_b ab(a,b) bc(b,c).
TransitionTable markov_composition(const TransitionTable& ab, const TransitionTable& bc);

// Complex matrix product of amplitude tables.
AmplitudeTable amplitude_composition(const AmplitudeTable& ab, const AmplitudeTable& bc);

struct DiscrepancyReport {
  TransitionTable p_direct;   // conditional c-given-a, no intermediate step
  TransitionTable p_markov;   // sum_b of the two conditional hops
  std::vector<double> a_marginal;
  double max_abs_gap = 0.0;
};

// Conditional two-hop composition versus the direct two-time conditional for
// three complete rank-1 families at times t1 < t2 < t3.
DiscrepancyReport feynman_discrepancy(const std::vector<Projector>& a_basis,
                                      const std::vector<Projector>& b_basis,
                                      const std::vector<Projector>& c_basis,
                                      const QuantumState& state,
                                      const std::optional<HermitianOperator>& hamiltonian,
                                      double t1, double t2, double t3);

struct MemoryReport {
  DiscrepancyReport increasing;   // visit order t1, t2, t3
  DiscrepancyReport decreasing;   // visit order t3, t2, t1
  double max_defect = 0.0;
};

// Conditional-independence defect of repeated observations of one observable,
// for both time orderings. The observable's eigenbasis defines the outcomes
// and must be nondegenerate.
MemoryReport markov_violation_report(const HermitianOperator& observable,
                                     const HermitianOperator& hamiltonian,
                                     const QuantumState& state, double t1, double t2,
                                     double t3);

struct PointerModel {
  int pointer_dim = 0;          // 0: outcomes + 1
  double coupling_strength = 1.0;
  double coupling_duration = 1.0;
  int composite_cap = 4096;
};

struct DemonReport {
  // Probabilities per outcome sequence, lexicographic in step-major order.
  std::vector<double> wigner;
  std::vector<double> full_model;
  double total_variation = 0.0;
};

// Exact system-plus-pointer simulation of the chain: one fresh pointer per
// step, von Neumann coupling exp(-i g tau A (x) G) with A = sum_k lambda_k Pi_k
// over the step family {1-Pi, Pi} and G the cyclic-shift generator; all
// pointers are read jointly at the end.
DemonReport demon_compare(const MeasurementChain& system_chain, const PointerModel& pointer);

}  // namespace qmbench
