#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "qtask/gate.hpp"
#include "qtask/types.hpp"

namespace qtask {

/// Single gate instance. `control` is -1 unless the gate is two-qubit; for a
/// Cnot it is the control qubit, for a Swap it is the second swapped qubit.
struct Gate {
  GateId id = kNoGate;
  GateKind kind = GateKind::X;
  double theta = 0.0;
  NetId net = kNoNet;
  int target = 0;
  int control = -1;
};

/// Group of structurally parallel gates; no two gates of a net may share a
/// qubit. Gates are kept in insertion order.
struct Net {
  NetId id = kNoNet;
  std::vector<GateId> gates;
};

/// Plain in-memory circuit model: an ordered list of nets plus a gate
/// registry. Net order is the simulation order.
class Circuit {
 public:
  explicit Circuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }

  NetId insert_net_front();
  NetId insert_net_back();
  NetId insert_net_after(NetId after);
  /// Removes an (already emptied) net. Throws UnknownNetError.
  void remove_net(NetId net);

  GateId insert_gate(GateKind kind, double theta, NetId net, int target,
                     int control = -1);
  void remove_gate(GateId gate);

  bool has_net(NetId net) const { return nets_.count(net) != 0; }
  bool has_gate(GateId gate) const { return gates_.count(gate) != 0; }
  const Net& net(NetId id) const;
  const Gate& gate(GateId id) const;
  const std::vector<NetId>& net_order() const { return order_; }
  /// Position of a net in simulation order. Throws UnknownNetError.
  std::size_t net_position(NetId id) const;
  std::size_t num_gates() const { return gates_.size(); }

 private:
  void check_qubits(GateKind kind, int target, int control) const;

  int num_qubits_;
  std::vector<NetId> order_;
  std::unordered_map<NetId, Net> nets_;
  std::unordered_map<GateId, Gate> gates_;
  NetId next_net_ = 1;
  GateId next_gate_ = 1;
};

/// True iff a candidate gate on (target[, control]) would share a qubit with
/// a gate already in the net.
bool check_net_conflict(const Circuit& circuit, NetId net, int target,
                        std::optional<int> control = std::nullopt);

}  // namespace qtask
