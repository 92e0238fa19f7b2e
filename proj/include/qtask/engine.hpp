#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "qtask/circuit.hpp"
#include "qtask/graph.hpp"
#include "qtask/plan.hpp"
#include "qtask/types.hpp"

namespace qtask {

/// Per-stage block storage. A null entry is a copy-on-write reference: the
/// block's amplitudes live in the nearest earlier stage that materialized the
/// same block index (ultimately the implicit |0...0> initial state). A block
/// is materialized only when a task of the owning stage writes its range.
struct BlockStore {
  std::uint64_t block_size = 0;
  std::vector<std::shared_ptr<std::vector<Complex>>> blocks;

  bool materialized(std::uint64_t b) const {
    return static_cast<bool>(blocks[b]);
  }
};

/// Result of the most recent update_state call.
struct UpdateStats {
  bool full = false;
  std::size_t executed_partitions = 0;
  std::size_t materialized_blocks = 0;
  /// Block indices rewritten by any executed partition, sorted.
  std::vector<std::uint64_t> rewritten_blocks;
  std::uint64_t rewritten_amplitudes = 0;
};

/// Incremental state-vector simulator. Circuit modifiers (insert_net,
/// remove_net, insert_gate, remove_gate) restructure the partition graph and
/// record frontier partitions; update_state re-simulates only partitions
/// reachable from the frontiers. Modifiers and update_state are
/// single-writer; amplitude queries are valid while no modifiers are pending.
class Simulator {
 public:
  explicit Simulator(int num_qubits, Config cfg = Config{});

  int num_qubits() const { return circuit_.num_qubits(); }
  const Config& config() const { return cfg_; }
  std::uint64_t block_size() const { return bs_; }
  std::uint64_t total_blocks() const { return nblocks_; }
  const Circuit& circuit() const { return circuit_; }

  // -- circuit modifiers -----------------------------------------------
  NetId insert_net_front();
  NetId insert_net_back();
  NetId insert_net_after(NetId after);
  void remove_net(NetId net);
  GateId insert_gate(GateKind kind, NetId net, int target);
  GateId insert_gate(GateKind kind, double theta, NetId net, int target);
  GateId insert_gate(GateKind kind, NetId net, int target, int control);
  void remove_gate(GateId gate);

  // -- state update ------------------------------------------------------
  /// First call simulates the whole graph; later calls re-execute only the
  /// partitions affected by modifiers since the previous update. Throws
  /// NumericError if a task produces a non-finite amplitude (frontiers are
  /// kept so a later update can retry).
  void update_state();

  // -- queries -----------------------------------------------------------
  /// Amplitude reads resolve through the COW chains of the final stage
  /// without materializing blocks. Throws StaleStateError while modifiers
  /// are pending.
  Complex amplitude(std::uint64_t index) const;
  std::vector<Complex> amplitudes(std::uint64_t first,
                                  std::uint64_t last) const;
  double norm_squared() const;
  void dump_graph(std::ostream& os) const;

  const UpdateStats& last_update() const { return last_; }
  bool pending_modifiers() const { return pending_; }

  // -- introspection (tests, replay reporting) ----------------------------
  struct StageView {
    StageId id = 0;
    NetId net = kNoNet;
    GateId gate = kNoGate;
    StageKind kind = StageKind::PermuteScale;
    const std::vector<PartitionSpec>* partitions = nullptr;
    const std::vector<NodeId>* nodes = nullptr;
    const BlockStore* store = nullptr;  // null for Sync stages
  };
  /// Stages in execution order.
  std::vector<StageView> stage_views() const;
  const PartitionGraph& graph() const { return graph_; }
  std::string node_name(NodeId id) const;
  const std::set<NodeId>& frontier_nodes() const { return frontiers_; }

 private:
  struct StageRt {
    StageId id = 0;
    NetId net = kNoNet;
    StageKind kind = StageKind::PermuteScale;
    GateId gate = kNoGate;
    KronFactors factors;
    std::vector<PartitionSpec> parts;
    std::vector<NodeId> nodes;
    std::uint64_t block_count = 0;
    bool has_store = false;
    BlockStore store;
  };

  struct RunStats;

  std::size_t global_index(NetId net, std::size_t local) const;
  StageId make_stage(StageRt&& proto, NetId net, std::size_t local);
  void drop_stage(StageId sid, bool frontier_succs);
  void add_permute_stage(NetId net, GateId gate);
  void rebuild_mxv(NetId net);
  unsigned worker_count() const;

  const std::vector<Complex>* resolve_block(std::size_t exec_index,
                                            std::uint64_t block) const;
  std::vector<Complex> input_block_copy(std::size_t exec_index,
                                        std::uint64_t block) const;
  void run_permute_tasks(const StageRt& stage, const PartitionSpec& part,
                         std::vector<std::shared_ptr<std::vector<Complex>>>&
                             fresh,
                         std::size_t first_task, std::size_t last_task) const;
  void run_mxv_partition(const StageRt& stage, const PartitionSpec& part,
                         std::size_t exec_index,
                         std::vector<Complex>& out) const;

  Circuit circuit_;
  Config cfg_;
  std::uint64_t bs_ = 0;
  std::uint64_t nblocks_ = 0;
  PartitionGraph graph_;
  std::map<StageId, StageRt> stages_;
  std::vector<StageId> exec_order_;
  std::map<NetId, std::vector<StageId>> net_stages_;
  std::map<GateId, StageId> gate_stage_;
  std::set<NodeId> frontiers_;
  StageId next_stage_ = 1;
  bool pending_ = false;
  bool ran_full_ = false;
  UpdateStats last_;
};

}  // namespace qtask
