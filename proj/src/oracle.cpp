#include "qtask/oracle.hpp"

#include <utility>

#include "qtask/gate.hpp"

namespace qtask::oracle {

DenseState initial_state(int num_qubits) {
  DenseState state(std::uint64_t{1} << num_qubits, Complex{0.0, 0.0});
  state[0] = Complex{1.0, 0.0};
  return state;
}

void apply_gate_dense(DenseState& state, const Gate& gate, int num_qubits) {
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  const GateMatrix m = gate_matrix(gate.kind, gate.theta);

  if (gate.kind == GateKind::Cnot) {
    const std::uint64_t cbit = std::uint64_t{1} << gate.control;
    const std::uint64_t tbit = std::uint64_t{1} << gate.target;
    for (std::uint64_t i = 0; i < dim; ++i) {
      if ((i & cbit) && !(i & tbit)) {
        std::swap(state[i], state[i | tbit]);
      }
    }
    return;
  }
  if (gate.kind == GateKind::Swap) {
    const std::uint64_t abit = std::uint64_t{1} << gate.target;
    const std::uint64_t bbit = std::uint64_t{1} << gate.control;
    for (std::uint64_t i = 0; i < dim; ++i) {
      if ((i & abit) && !(i & bbit)) {
        std::swap(state[i], state[(i ^ abit) | bbit]);
      }
    }
    return;
  }

  const std::uint64_t tbit = std::uint64_t{1} << gate.target;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & tbit) {
      continue;
    }
    const Complex a = state[i];
    const Complex b = state[i | tbit];
    state[i] = m.at(0, 0) * a + m.at(0, 1) * b;
    state[i | tbit] = m.at(1, 0) * a + m.at(1, 1) * b;
  }
}

DenseState simulate_dense(const Circuit& circuit) {
  DenseState state = initial_state(circuit.num_qubits());
  for (NetId net : circuit.net_order()) {
    for (GateId g : circuit.net(net).gates) {
      apply_gate_dense(state, circuit.gate(g), circuit.num_qubits());
    }
  }
  return state;
}

}  // namespace qtask::oracle
