#pragma once

#include <vector>

#include "qtask/circuit.hpp"
#include "qtask/types.hpp"

namespace qtask::oracle {

/// Dense state vector of 2^n amplitudes; the brute-force reference path.
using DenseState = std::vector<Complex>;

DenseState initial_state(int num_qubits);

/// Applies one gate in place by stride-indexed traversal (no explicit
/// 2^n x 2^n matrix). Single-threaded by design.
void apply_gate_dense(DenseState& state, const Gate& gate, int num_qubits);

/// Applies nets in order; gates within a net act on disjoint qubits, so
/// their order is irrelevant.
DenseState simulate_dense(const Circuit& circuit);

}  // namespace qtask::oracle
