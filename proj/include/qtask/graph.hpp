#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "qtask/plan.hpp"
#include "qtask/types.hpp"

namespace qtask {

/// Inclusive range of block indices covered by a partition.
struct BlockRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;

  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

inline bool intersects(const BlockRange& a, const BlockRange& b) {
  return std::max(a.first, b.first) <= std::min(a.last, b.last);
}

using NodeId = std::uint64_t;
inline constexpr NodeId kOutputNode = 0;

/// Dependency graph over the partitions of all stages plus a permanent
/// `output` sink. Stages are kept in execution order; edges always point from
/// an earlier stage to a later one (or to output). Edge discovery walks the
/// stage sequence with range intersection, masking blocks already covered by
/// nearer stages, so the edge set depends only on the stage sequence and not
/// on the order in which stages were connected.
class PartitionGraph {
 public:
  struct PartDesc {
    BlockRange read;
    BlockRange write;
    bool has_write = true;
  };
  struct StageDesc {
    StageId stage = 0;
    StageKind kind = StageKind::PermuteScale;
    std::vector<PartDesc> parts;
  };

  struct Node {
    NodeId id = 0;
    StageId stage = 0;
    std::uint32_t index = 0;  // partition index within the stage
    StageKind kind = StageKind::PermuteScale;
    BlockRange read;
    BlockRange write;
    bool has_write = false;
    bool is_output = false;
    std::set<NodeId> preds;
    std::set<NodeId> succs;
  };

  explicit PartitionGraph(std::uint64_t total_blocks);

  /// Inserts a stage at the given execution position and discovers its
  /// partitions' predecessor and successor edges. Direct edges between the
  /// discovered predecessors and successors that the new stage makes
  /// redundant are removed. Returns the new node ids in partition order.
  std::vector<NodeId> connect_stage(const StageDesc& desc,
                                    std::size_t exec_index);

  struct Removal {
    std::vector<NodeId> removed;
    // Successor node ids of each removed partition at removal time,
    // restricted to nodes that survive the removal.
    std::vector<std::vector<NodeId>> successors;
  };

  /// Removes a stage's partitions and incident edges; preceding partitions
  /// are reconnected to successor partitions wherever their block ranges
  /// intersect.
  Removal disconnect_stage(StageId stage);

  bool contains(NodeId id) const { return nodes_.count(id) != 0; }
  const Node& node(NodeId id) const;
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_stages() const { return order_.size(); }
  const std::vector<NodeId>& stage_nodes(StageId stage) const;
  std::size_t stage_position(StageId stage) const;

  /// Frontier partitions plus every node reachable from them.
  std::set<NodeId> affected_from(const std::set<NodeId>& frontiers) const;

  /// All nodes including output, in a valid topological order.
  std::vector<NodeId> topo_order() const;
  bool is_acyclic() const;

  /// Directed edges as (source, destination) pairs, sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  /// Deterministic DOT text. Node names come from `namer`; edges are emitted
  /// in sorted (source, destination) name order.
  void dump_dot(std::ostream& os,
                const std::function<std::string(NodeId)>& namer) const;

 private:
  struct StageEntry {
    StageId stage;
    std::vector<NodeId> parts;
  };

  void add_edge(NodeId from, NodeId to);
  void remove_edge(NodeId from, NodeId to);
  // True iff some block flows directly from `from` to `to`, i.e. a block in
  // write(from) ∩ read(to) that no stage strictly between them writes.
  bool edge_justified(const Node& from, const Node& to) const;

  std::uint64_t total_blocks_;
  std::map<NodeId, Node> nodes_;
  std::vector<StageEntry> order_;
  std::map<StageId, std::size_t> stage_pos_;  // rebuilt on edits
  NodeId next_node_ = 1;

  void reindex();
};

/// Builds the graph of a whole stage sequence from scratch; equivalent to
/// connecting each stage in execution order.
PartitionGraph build_full(std::uint64_t total_blocks,
                          const std::vector<PartitionGraph::StageDesc>& stages);

}  // namespace qtask
