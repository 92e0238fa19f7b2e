#include "qtask/graph.hpp"

#include <algorithm>
#include <cassert>

namespace qtask {

namespace {

// Sorted list of disjoint inclusive block intervals.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(BlockRange r) { iv_.push_back({r.first, r.last}); }

  bool empty() const { return iv_.empty(); }

  bool intersects(BlockRange r) const {
    for (const auto& [lo, hi] : iv_) {
      if (std::max(lo, r.first) <= std::min(hi, r.last)) {
        return true;
      }
    }
    return false;
  }

  void subtract(BlockRange r) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (const auto& [lo, hi] : iv_) {
      if (r.last < lo || hi < r.first) {
        out.emplace_back(lo, hi);
        continue;
      }
      if (lo < r.first) {
        out.emplace_back(lo, r.first - 1);
      }
      if (r.last < hi) {
        out.emplace_back(r.last + 1, hi);
      }
    }
    iv_ = std::move(out);
  }

 private:
  std::vector<std::pair<std::uint64_t, std::uint64_t>> iv_;
};

}  // namespace

PartitionGraph::PartitionGraph(std::uint64_t total_blocks)
    : total_blocks_(total_blocks) {
  Node out;
  out.id = kOutputNode;
  out.is_output = true;
  out.read = BlockRange{0, total_blocks_ - 1};
  out.has_write = false;
  nodes_.emplace(kOutputNode, std::move(out));
}

void PartitionGraph::add_edge(NodeId from, NodeId to) {
  nodes_.at(from).succs.insert(to);
  nodes_.at(to).preds.insert(from);
}

void PartitionGraph::remove_edge(NodeId from, NodeId to) {
  nodes_.at(from).succs.erase(to);
  nodes_.at(to).preds.erase(from);
}

void PartitionGraph::reindex() {
  stage_pos_.clear();
  for (std::size_t i = 0; i < order_.size(); ++i) {
    stage_pos_[order_[i].stage] = i;
  }
}

const PartitionGraph::Node& PartitionGraph::node(NodeId id) const {
  return nodes_.at(id);
}

const std::vector<NodeId>& PartitionGraph::stage_nodes(StageId stage) const {
  return order_[stage_position(stage)].parts;
}

std::size_t PartitionGraph::stage_position(StageId stage) const {
  auto it = stage_pos_.find(stage);
  if (it == stage_pos_.end()) {
    throw Error("stage not present in partition graph");
  }
  return it->second;
}

bool PartitionGraph::edge_justified(const Node& from, const Node& to) const {
  if (!from.has_write) {
    return false;
  }
  BlockRange common{std::max(from.write.first, to.read.first),
                    std::min(from.write.last, to.read.last)};
  if (common.first > common.last) {
    return false;
  }
  IntervalSet uncovered(common);
  const std::size_t lo = stage_position(from.stage);
  const std::size_t hi = to.is_output ? order_.size() : stage_position(to.stage);
  for (std::size_t s = lo + 1; s < hi && !uncovered.empty(); ++s) {
    for (NodeId q : order_[s].parts) {
      const Node& qn = nodes_.at(q);
      if (qn.has_write) {
        uncovered.subtract(qn.write);
      }
    }
  }
  return !uncovered.empty();
}

std::vector<NodeId> PartitionGraph::connect_stage(const StageDesc& desc,
                                                  std::size_t exec_index) {
  if (exec_index > order_.size()) {
    throw Error("connect_stage: execution index out of range");
  }
  StageEntry entry{desc.stage, {}};
  for (std::size_t k = 0; k < desc.parts.size(); ++k) {
    Node n;
    n.id = next_node_++;
    n.stage = desc.stage;
    n.index = static_cast<std::uint32_t>(k);
    n.kind = desc.kind;
    n.read = desc.parts[k].read;
    n.write = desc.parts[k].write;
    n.has_write = desc.parts[k].has_write;
    entry.parts.push_back(n.id);
    nodes_.emplace(n.id, std::move(n));
  }
  order_.insert(order_.begin() + exec_index, entry);
  reindex();

  std::set<NodeId> stage_preds;
  std::set<NodeId> stage_succs;
  for (NodeId pid : entry.parts) {
    const Node& p = nodes_.at(pid);

    // Backward: nearest writers of every block this partition reads.
    IntervalSet uncovered(p.read);
    for (std::size_t s = exec_index; s-- > 0 && !uncovered.empty();) {
      for (NodeId q : order_[s].parts) {
        const Node& qn = nodes_.at(q);
        if (qn.has_write && uncovered.intersects(qn.write)) {
          add_edge(q, pid);
          stage_preds.insert(q);
          uncovered.subtract(qn.write);
        }
      }
    }

    // Forward: nearest readers of every block this partition writes.
    if (p.has_write) {
      IntervalSet remaining(p.write);
      for (std::size_t s = exec_index + 1;
           s < order_.size() && !remaining.empty(); ++s) {
        for (NodeId q : order_[s].parts) {
          const Node& qn = nodes_.at(q);
          if (remaining.intersects(qn.read)) {
            add_edge(pid, q);
            stage_succs.insert(q);
            if (qn.has_write) {
              remaining.subtract(qn.write);
            }
          }
        }
      }
      if (!remaining.empty()) {
        add_edge(pid, kOutputNode);
        stage_succs.insert(kOutputNode);
      }
    }
  }

  // Dependencies are transitive: direct predecessor->successor edges that the
  // new stage now fully masks are redundant and get dropped.
  for (NodeId a : stage_preds) {
    for (NodeId b : stage_succs) {
      if (nodes_.at(a).succs.count(b) &&
          !edge_justified(nodes_.at(a), nodes_.at(b))) {
        remove_edge(a, b);
      }
    }
  }
  return entry.parts;
}

PartitionGraph::Removal PartitionGraph::disconnect_stage(StageId stage) {
  const std::size_t pos = stage_position(stage);
  Removal result;
  const std::vector<NodeId> parts = order_[pos].parts;

  for (NodeId pid : parts) {
    Node& p = nodes_.at(pid);
    result.removed.push_back(pid);
    std::vector<NodeId> survivors(p.succs.begin(), p.succs.end());
    result.successors.push_back(survivors);

    for (NodeId a : p.preds) {
      for (NodeId b : p.succs) {
        const Node& an = nodes_.at(a);
        const Node& bn = nodes_.at(b);
        if (an.has_write && intersects(an.write, bn.read) &&
            !an.succs.count(b)) {
          add_edge(a, b);
        }
      }
    }
    for (NodeId a : std::set<NodeId>(p.preds)) {
      remove_edge(a, pid);
    }
    for (NodeId b : std::set<NodeId>(p.succs)) {
      remove_edge(pid, b);
    }
  }
  for (NodeId pid : parts) {
    nodes_.erase(pid);
  }
  order_.erase(order_.begin() + pos);
  reindex();

  // Successors recorded above may include siblings removed in the same call.
  for (auto& list : result.successors) {
    list.erase(std::remove_if(list.begin(), list.end(),
                              [&](NodeId id) { return !contains(id); }),
               list.end());
  }
  return result;
}

std::set<NodeId> PartitionGraph::affected_from(
    const std::set<NodeId>& frontiers) const {
  std::set<NodeId> affected;
  std::vector<NodeId> stack(frontiers.begin(), frontiers.end());
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (!affected.insert(id).second) {
      continue;
    }
    for (NodeId s : nodes_.at(id).succs) {
      if (!affected.count(s)) {
        stack.push_back(s);
      }
    }
  }
  return affected;
}

std::vector<NodeId> PartitionGraph::topo_order() const {
  std::map<NodeId, std::size_t> pending;
  std::vector<NodeId> ready;
  for (const auto& [id, n] : nodes_) {
    pending[id] = n.preds.size();
    if (n.preds.empty()) {
      ready.push_back(id);
    }
  }
  std::vector<NodeId> out;
  while (!ready.empty()) {
    const NodeId id = ready.back();
    ready.pop_back();
    out.push_back(id);
    for (NodeId s : nodes_.at(id).succs) {
      if (--pending[s] == 0) {
        ready.push_back(s);
      }
    }
  }
  return out;
}

bool PartitionGraph::is_acyclic() const {
  return topo_order().size() == nodes_.size();
}

std::vector<std::pair<NodeId, NodeId>> PartitionGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& [id, n] : nodes_) {
    for (NodeId s : n.succs) {
      out.emplace_back(id, s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PartitionGraph build_full(
    std::uint64_t total_blocks,
    const std::vector<PartitionGraph::StageDesc>& stages) {
  PartitionGraph g(total_blocks);
  std::size_t index = 0;
  for (const auto& desc : stages) {
    g.connect_stage(desc, index++);
  }
  return g;
}

void PartitionGraph::dump_dot(
    std::ostream& os, const std::function<std::string(NodeId)>& namer) const {
  if (order_.empty()) {
    os << "digraph qtask { output; }\n";
    return;
  }
  os << "digraph qtask {\n";
  for (const StageEntry& entry : order_) {
    for (NodeId id : entry.parts) {
      const Node& n = nodes_.at(id);
      os << "  " << namer(id) << " [label=\"" << namer(id) << " ["
         << n.read.first << ".." << n.read.last << "]\"];\n";
    }
  }
  os << "  output;\n";

  std::vector<std::pair<std::string, std::string>> named;
  for (const auto& [from, to] : edges()) {
    named.emplace_back(namer(from), namer(to));
  }
  std::sort(named.begin(), named.end());
  for (const auto& [from, to] : named) {
    os << "  " << from << " -> " << to << ";\n";
  }
  os << "}\n";
}

}  // namespace qtask
