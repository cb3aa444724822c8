#pragma once

#include <optional>

#include "qmbench/hilbert.hpp"

namespace qmbench {

// Projector onto Range(P) ∩ Range(Q): the eigenvalue-2 eigenspace of P + Q,
// taken with threshold tol_meet.
Projector meet(const Projector& p, const Projector& q);

// Defined(PQ) only when the commutator norm is below tol_commute; otherwise
// Undefined, carrying the norm that triggered it.
struct MeetResult {
  std::optional<Projector> value;
  double commutator = 0.0;
  bool defined() const { return value.has_value(); }
};

MeetResult meet_strict(const Projector& p, const Projector& q);

enum class QlMode { orthodox, strict };

// <a| P&Q |a> under the chosen conjunction semantics; nullopt when the strict
// conjunction is undefined.
std::optional<double> ql_sequence_probability(const QuantumState& a, const Projector& p,
                                              const Projector& q, QlMode mode);

struct ChainSumReport {
  double lhs;
  double rhs;
  double delta;
};

// lhs = sum_b <a| meet(Pi_b, Pi_c) |a> over a complete rank-1 basis,
// rhs = <a|Pi_c|a>; delta reported, never asserted.
ChainSumReport ql_chain_sum_check(const QuantumState& a,
                                  const std::vector<Projector>& basis_b,
                                  const Projector& pi_c);

}  // namespace qmbench
