#include "qtask/circuit.hpp"

#include <algorithm>
#include <cmath>

namespace qtask {

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 30) {
    throw BadQubitError("qubit count must be in [1, 30]");
  }
}

NetId Circuit::insert_net_front() {
  const NetId id = next_net_++;
  nets_.emplace(id, Net{id, {}});
  order_.insert(order_.begin(), id);
  return id;
}

NetId Circuit::insert_net_back() {
  const NetId id = next_net_++;
  nets_.emplace(id, Net{id, {}});
  order_.push_back(id);
  return id;
}

NetId Circuit::insert_net_after(NetId after) {
  auto it = std::find(order_.begin(), order_.end(), after);
  if (it == order_.end()) {
    throw InvalidPositionError("insert_net: unknown anchor net");
  }
  const NetId id = next_net_++;
  nets_.emplace(id, Net{id, {}});
  order_.insert(it + 1, id);
  return id;
}

void Circuit::remove_net(NetId net) {
  auto it = nets_.find(net);
  if (it == nets_.end()) {
    throw UnknownNetError("remove_net: unknown net");
  }
  for (GateId g : it->second.gates) {
    gates_.erase(g);
  }
  nets_.erase(it);
  order_.erase(std::find(order_.begin(), order_.end(), net));
}

void Circuit::check_qubits(GateKind kind, int target, int control) const {
  if (target < 0 || target >= num_qubits_) {
    throw BadQubitError("target qubit out of range");
  }
  if (is_two_qubit(kind)) {
    if (control < 0 || control >= num_qubits_) {
      throw BadQubitError("second qubit out of range");
    }
    if (control == target) {
      throw BadQubitError("two-qubit gate needs distinct qubits");
    }
  } else if (control != -1) {
    throw BadQubitError("single-qubit gate takes no control");
  }
}

GateId Circuit::insert_gate(GateKind kind, double theta, NetId net, int target,
                            int control) {
  auto it = nets_.find(net);
  if (it == nets_.end()) {
    throw UnknownNetError("insert_gate: unknown net");
  }
  check_qubits(kind, target, control);
  if (!std::isfinite(theta)) {
    throw Error("rotation angle must be finite");
  }
  if (check_net_conflict(*this, net, target,
                         control >= 0 ? std::optional<int>(control)
                                      : std::nullopt)) {
    throw NetConflictError("gate would depend on another gate in the net");
  }
  const GateId id = next_gate_++;
  gates_.emplace(id, Gate{id, kind, theta, net, target, control});
  it->second.gates.push_back(id);
  return id;
}

void Circuit::remove_gate(GateId gate) {
  auto it = gates_.find(gate);
  if (it == gates_.end()) {
    throw UnknownGateError("remove_gate: unknown gate");
  }
  Net& n = nets_.at(it->second.net);
  n.gates.erase(std::find(n.gates.begin(), n.gates.end(), gate));
  gates_.erase(it);
}

const Net& Circuit::net(NetId id) const {
  auto it = nets_.find(id);
  if (it == nets_.end()) {
    throw UnknownNetError("unknown net");
  }
  return it->second;
}

const Gate& Circuit::gate(GateId id) const {
  auto it = gates_.find(id);
  if (it == gates_.end()) {
    throw UnknownGateError("unknown gate");
  }
  return it->second;
}

std::size_t Circuit::net_position(NetId id) const {
  auto it = std::find(order_.begin(), order_.end(), id);
  if (it == order_.end()) {
    throw UnknownNetError("unknown net");
  }
  return static_cast<std::size_t>(it - order_.begin());
}

bool check_net_conflict(const Circuit& circuit, NetId net, int target,
                        std::optional<int> control) {
  for (GateId g : circuit.net(net).gates) {
    const Gate& gate = circuit.gate(g);
    const bool hits = gate.target == target ||
                      (control && gate.target == *control) ||
                      gate.control == target ||
                      (control && gate.control >= 0 && gate.control == *control);
    if (hits) {
      return true;
    }
  }
  return false;
}

}  // namespace qtask
