#include "qtask/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <mutex>
#include <thread>

#include "qtask/element_ops.hpp"
#include "qtask/executor.hpp"

namespace qtask {

namespace {

int log2_u64(std::uint64_t x) {
  int n = 0;
  while ((std::uint64_t{1} << n) < x) {
    ++n;
  }
  return n;
}

bool finite(Complex c) {
  return std::isfinite(c.real()) && std::isfinite(c.imag());
}

}  // namespace

namespace {

Config validated(Config cfg) {
  validate_config(cfg);
  return cfg;
}

}  // namespace

Simulator::Simulator(int num_qubits, Config cfg)
    : circuit_(num_qubits),
      cfg_(validated(cfg)),
      bs_(effective_block_size(num_qubits, cfg.block_size)),
      nblocks_(num_blocks(num_qubits, cfg.block_size)),
      graph_(num_blocks(num_qubits, cfg.block_size)) {}

unsigned Simulator::worker_count() const {
  if (cfg_.threads > 0) {
    return cfg_.threads;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// ---------------------------------------------------------------------------
// Modifiers
// ---------------------------------------------------------------------------

NetId Simulator::insert_net_front() {
  const NetId id = circuit_.insert_net_front();
  net_stages_[id] = {};
  pending_ = true;
  return id;
}

NetId Simulator::insert_net_back() {
  const NetId id = circuit_.insert_net_back();
  net_stages_[id] = {};
  pending_ = true;
  return id;
}

NetId Simulator::insert_net_after(NetId after) {
  const NetId id = circuit_.insert_net_after(after);
  net_stages_[id] = {};
  pending_ = true;
  return id;
}

void Simulator::remove_net(NetId net) {
  const std::vector<GateId> gates = circuit_.net(net).gates;
  for (GateId g : gates) {
    remove_gate(g);
  }
  circuit_.remove_net(net);
  net_stages_.erase(net);
  pending_ = true;
}

GateId Simulator::insert_gate(GateKind kind, NetId net, int target) {
  return insert_gate(kind, 0.0, net, target);
}

GateId Simulator::insert_gate(GateKind kind, double theta, NetId net,
                              int target) {
  const GateId g = circuit_.insert_gate(kind, theta, net, target, -1);
  if (classify_gate(kind, theta) == GateClass::Superposition) {
    rebuild_mxv(net);
  } else {
    add_permute_stage(net, g);
  }
  pending_ = true;
  return g;
}

GateId Simulator::insert_gate(GateKind kind, NetId net, int target,
                              int control) {
  const GateId g = circuit_.insert_gate(kind, 0.0, net, target, control);
  add_permute_stage(net, g);  // Cnot and Swap never form superposition
  pending_ = true;
  return g;
}

void Simulator::remove_gate(GateId gate) {
  const Gate g = circuit_.gate(gate);  // copy; throws UnknownGateError
  if (classify_gate(g.kind, g.theta) == GateClass::Superposition) {
    circuit_.remove_gate(gate);
    rebuild_mxv(g.net);
  } else {
    drop_stage(gate_stage_.at(gate), /*frontier_succs=*/true);
    gate_stage_.erase(gate);
    circuit_.remove_gate(gate);
  }
  pending_ = true;
}

std::size_t Simulator::global_index(NetId net, std::size_t local) const {
  std::size_t idx = 0;
  for (NetId m : circuit_.net_order()) {
    if (m == net) {
      return idx + local;
    }
    auto it = net_stages_.find(m);
    if (it != net_stages_.end()) {
      idx += it->second.size();
    }
  }
  throw UnknownNetError("unknown net");
}

StageId Simulator::make_stage(StageRt&& proto, NetId net, std::size_t local) {
  proto.id = next_stage_++;
  proto.net = net;
  proto.block_count = 0;
  for (const PartitionSpec& p : proto.parts) {
    proto.block_count += p.last_block - p.first_block + 1;
  }
  proto.has_store = proto.kind != StageKind::Sync;
  if (proto.has_store) {
    proto.store.block_size = bs_;
    proto.store.blocks.assign(nblocks_, nullptr);
  }

  PartitionGraph::StageDesc desc;
  desc.stage = proto.id;
  desc.kind = proto.kind;
  const BlockRange full{0, nblocks_ - 1};
  for (std::size_t k = 0; k < proto.parts.size(); ++k) {
    const PartitionSpec& p = proto.parts[k];
    PartitionGraph::PartDesc pd;
    switch (proto.kind) {
      case StageKind::Sync:
        pd.read = pd.write = full;
        break;
      case StageKind::MatrixVector:
        pd.read = full;
        pd.write = BlockRange{p.first_block, p.last_block};
        break;
      case StageKind::PermuteScale:
        pd.read = pd.write = BlockRange{p.first_block, p.last_block};
        break;
    }
    desc.parts.push_back(pd);
  }

  const std::size_t exec = global_index(net, local);
  proto.nodes = graph_.connect_stage(desc, exec);
  exec_order_.insert(exec_order_.begin() + exec, proto.id);
  auto& list = net_stages_[net];
  list.insert(list.begin() + local, proto.id);
  const StageId id = proto.id;
  stages_.emplace(id, std::move(proto));
  assert(exec_order_.size() == graph_.num_stages());
  return id;
}

void Simulator::drop_stage(StageId sid, bool frontier_succs) {
  const StageRt& stage = stages_.at(sid);
  PartitionGraph::Removal rm = graph_.disconnect_stage(sid);
  for (NodeId n : rm.removed) {
    frontiers_.erase(n);
  }
  if (frontier_succs) {
    for (const auto& list : rm.successors) {
      frontiers_.insert(list.begin(), list.end());
    }
  }
  exec_order_.erase(
      std::find(exec_order_.begin(), exec_order_.end(), sid));
  auto& list = net_stages_.at(stage.net);
  list.erase(std::find(list.begin(), list.end(), sid));
  stages_.erase(sid);
}

void Simulator::add_permute_stage(NetId net, GateId gate) {
  StageRt proto;
  proto.kind = StageKind::PermuteScale;
  proto.gate = gate;
  ElementOpSeq seq(circuit_.gate(gate), circuit_.num_qubits());
  if (!seq.empty()) {
    proto.parts = form_partitions(chunk_tasks(seq, cfg_.block_size), bs_);
  }
  std::uint64_t blocks = 0;
  for (const PartitionSpec& p : proto.parts) {
    blocks += p.last_block - p.first_block + 1;
  }

  // Permute stages of a net run in ascending order of total block count;
  // ties keep gate insertion order.
  const auto& list = net_stages_.at(net);
  std::size_t local = 0;
  while (local < list.size() &&
         stages_.at(list[local]).kind != StageKind::PermuteScale) {
    ++local;
  }
  while (local < list.size()) {
    const StageRt& s = stages_.at(list[local]);
    if (s.block_count < blocks ||
        (s.block_count == blocks && s.gate < gate)) {
      ++local;
    } else {
      break;
    }
  }

  const StageId id = make_stage(std::move(proto), net, local);
  const StageRt& made = stages_.at(id);
  frontiers_.insert(made.nodes.begin(), made.nodes.end());
  gate_stage_[gate] = id;
}

void Simulator::rebuild_mxv(NetId net) {
  auto& list = net_stages_.at(net);
  const bool have =
      !list.empty() && stages_.at(list.front()).kind == StageKind::Sync;

  std::vector<GateId> superposition;
  for (GateId g : circuit_.net(net).gates) {
    const Gate& gate = circuit_.gate(g);
    if (classify_gate(gate.kind, gate.theta) == GateClass::Superposition) {
      superposition.push_back(g);
    }
  }

  if (superposition.empty()) {
    if (have) {
      drop_stage(list[1], /*frontier_succs=*/true);  // MatrixVector
      drop_stage(list[0], /*frontier_succs=*/true);  // Sync
    }
    return;
  }

  if (have) {
    drop_stage(list[1], /*frontier_succs=*/true);
  } else {
    StageRt sync;
    sync.kind = StageKind::Sync;
    sync.parts.push_back(PartitionSpec{0, nblocks_ - 1, {}});
    const StageId sid = make_stage(std::move(sync), net, 0);
    const StageRt& made = stages_.at(sid);
    frontiers_.insert(made.nodes.begin(), made.nodes.end());
  }

  StageRt mxv;
  mxv.kind = StageKind::MatrixVector;
  mxv.factors.num_qubits = circuit_.num_qubits();
  mxv.factors.factor.assign(circuit_.num_qubits(), std::nullopt);
  for (GateId g : superposition) {
    const Gate& gate = circuit_.gate(g);
    mxv.factors.factor[gate.target] = gate_matrix(gate.kind, gate.theta);
  }
  mxv.parts = mxv_partitions(circuit_.num_qubits(), bs_);
  const StageId id = make_stage(std::move(mxv), net, 1);
  const StageRt& made = stages_.at(id);
  frontiers_.insert(made.nodes.begin(), made.nodes.end());
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

const std::vector<Complex>* Simulator::resolve_block(std::size_t exec_index,
                                                     std::uint64_t block)
    const {
  for (std::size_t s = exec_index; s-- > 0;) {
    const StageRt& st = stages_.at(exec_order_[s]);
    if (st.has_store && st.store.blocks[block]) {
      return st.store.blocks[block].get();
    }
  }
  return nullptr;  // implicit |0...0> initial state
}

std::vector<Complex> Simulator::input_block_copy(std::size_t exec_index,
                                                 std::uint64_t block) const {
  if (const std::vector<Complex>* src = resolve_block(exec_index, block)) {
    return *src;
  }
  std::vector<Complex> v(bs_, Complex{0.0, 0.0});
  if (block == 0) {
    v[0] = Complex{1.0, 0.0};
  }
  return v;
}

void Simulator::run_permute_tasks(
    const StageRt& stage, const PartitionSpec& part,
    std::vector<std::shared_ptr<std::vector<Complex>>>& fresh,
    std::size_t first_task, std::size_t last_task) const {
  const ElementOpSeq seq(circuit_.gate(stage.gate), circuit_.num_qubits());
  const int shift = log2_u64(bs_);
  const std::uint64_t mask = bs_ - 1;
  const std::uint64_t base = part.first_block;

  auto cell = [&](std::uint64_t index) -> Complex& {
    return (*fresh[(index >> shift) - base])[index & mask];
  };

  for (std::size_t t = first_task; t <= last_task; ++t) {
    const TaskSpec& task = part.tasks[t];
    for (std::uint64_t k = task.first_op; k <= task.last_op; ++k) {
      const ElementOp op = seq.op(k);
      if (op.mode == ElementOp::Mode::SwapScale) {
        Complex& a = cell(op.i);
        Complex& b = cell(op.j);
        const Complex tmp = a;
        a = op.scale_i * b;
        b = op.scale_j * tmp;
        if (!finite(a) || !finite(b)) {
          throw NumericError("non-finite amplitude");
        }
      } else {
        Complex& a = cell(op.i);
        a *= op.scale_i;
        if (!finite(a)) {
          throw NumericError("non-finite amplitude");
        }
      }
    }
  }
}

void Simulator::run_mxv_partition(const StageRt& stage,
                                  const PartitionSpec& part,
                                  std::size_t exec_index,
                                  std::vector<Complex>& out) const {
  const int shift = log2_u64(bs_);
  const std::uint64_t mask = bs_ - 1;
  // Per-block resolution cache for the whole input vector.
  std::vector<const std::vector<Complex>*> cache(nblocks_, nullptr);
  std::vector<bool> cached(nblocks_, false);
  auto value = [&](std::uint64_t index) -> Complex {
    const std::uint64_t b = index >> shift;
    if (!cached[b]) {
      cache[b] = resolve_block(exec_index, b);
      cached[b] = true;
    }
    if (cache[b]) {
      return (*cache[b])[index & mask];
    }
    return index == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  };

  const std::uint64_t row0 = part.first_block * bs_;
  for (std::uint64_t r = 0; r < bs_; ++r) {
    Complex acc{0.0, 0.0};
    kron_row_visit(stage.factors, row0 + r,
                   [&](std::uint64_t col, Complex w) { acc += w * value(col); });
    if (!finite(acc)) {
      throw NumericError("non-finite amplitude");
    }
    out[r] = acc;
  }
}

struct Simulator::RunStats {
  std::mutex mutex;
  std::size_t executed = 0;
  std::size_t materialized = 0;
  std::set<std::uint64_t> blocks;
};

void Simulator::update_state() {
  std::set<NodeId> affected;
  if (!ran_full_) {
    for (const auto& [sid, stage] : stages_) {
      affected.insert(stage.nodes.begin(), stage.nodes.end());
    }
    affected.insert(kOutputNode);
  } else {
    affected = graph_.affected_from(frontiers_);
  }

  RunStats stats;
  TaskPool pool(worker_count());
  std::map<NodeId, TaskPool::JobId> entry;
  std::map<NodeId, TaskPool::JobId> exit;

  for (NodeId id : affected) {
    const PartitionGraph::Node& node = graph_.node(id);
    if (node.is_output || node.kind == StageKind::Sync) {
      const auto job = pool.add(nullptr);
      entry[id] = exit[id] = job;
      continue;
    }
    StageRt& stage = stages_.at(node.stage);
    const PartitionSpec& part = stage.parts[node.index];
    const std::size_t exec = graph_.stage_position(node.stage);

    auto commit = [this, &stats, &stage, &part](
                      std::vector<std::shared_ptr<std::vector<Complex>>>
                          blocks) {
      for (std::uint64_t b = part.first_block; b <= part.last_block; ++b) {
        stage.store.blocks[b] = std::move(blocks[b - part.first_block]);
      }
      std::lock_guard<std::mutex> guard(stats.mutex);
      stats.executed += 1;
      stats.materialized += part.last_block - part.first_block + 1;
      for (std::uint64_t b = part.first_block; b <= part.last_block; ++b) {
        stats.blocks.insert(b);
      }
    };

    if (node.kind == StageKind::MatrixVector) {
      const auto job = pool.add([this, &stage, &part, exec, commit] {
        auto block = std::make_shared<std::vector<Complex>>(bs_);
        run_mxv_partition(stage, part, exec, *block);
        std::vector<std::shared_ptr<std::vector<Complex>>> fresh{block};
        commit(std::move(fresh));
      });
      entry[id] = exit[id] = job;
      continue;
    }

    // PermuteScale: copy the block hull from the resolved input, then apply
    // the partition's tasks. Tasks of one partition have disjoint write sets
    // and may run in parallel.
    const std::size_t ntasks = part.tasks.size();
    if (ntasks <= 1) {
      const auto job = pool.add([this, &stage, &part, exec, commit] {
        std::vector<std::shared_ptr<std::vector<Complex>>> fresh;
        for (std::uint64_t b = part.first_block; b <= part.last_block; ++b) {
          fresh.push_back(std::make_shared<std::vector<Complex>>(
              input_block_copy(exec, b)));
        }
        if (!part.tasks.empty()) {
          run_permute_tasks(stage, part, fresh, 0, 0);
        }
        commit(std::move(fresh));
      });
      entry[id] = exit[id] = job;
    } else {
      auto fresh = std::make_shared<
          std::vector<std::shared_ptr<std::vector<Complex>>>>();
      const auto setup = pool.add([this, &part, exec, fresh] {
        for (std::uint64_t b = part.first_block; b <= part.last_block; ++b) {
          fresh->push_back(std::make_shared<std::vector<Complex>>(
              input_block_copy(exec, b)));
        }
      });
      const auto join = pool.add([fresh, commit] {
        commit(std::move(*fresh));
      });
      for (std::size_t t = 0; t < ntasks; ++t) {
        const auto task = pool.add([this, &stage, &part, fresh, t] {
          run_permute_tasks(stage, part, *fresh, t, t);
        });
        pool.add_edge(setup, task);
        pool.add_edge(task, join);
      }
      entry[id] = setup;
      exit[id] = join;
    }
  }

  for (NodeId id : affected) {
    for (NodeId s : graph_.node(id).succs) {
      if (affected.count(s)) {
        pool.add_edge(exit.at(id), entry.at(s));
      }
    }
  }

  pool.run();  // rethrows NumericError; frontiers stay for a retry

  last_ = UpdateStats{};
  last_.full = !ran_full_;
  last_.executed_partitions = stats.executed;
  last_.materialized_blocks = stats.materialized;
  last_.rewritten_blocks.assign(stats.blocks.begin(), stats.blocks.end());
  last_.rewritten_amplitudes = stats.blocks.size() * bs_;
  frontiers_.clear();
  pending_ = false;
  ran_full_ = true;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

Complex Simulator::amplitude(std::uint64_t index) const {
  if (pending_) {
    throw StaleStateError("modifiers pending; call update_state first");
  }
  if (index >= (std::uint64_t{1} << circuit_.num_qubits())) {
    throw Error("amplitude index out of range");
  }
  if (const std::vector<Complex>* b =
          resolve_block(exec_order_.size(), index / bs_)) {
    return (*b)[index % bs_];
  }
  return index == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
}

std::vector<Complex> Simulator::amplitudes(std::uint64_t first,
                                           std::uint64_t last) const {
  if (pending_) {
    throw StaleStateError("modifiers pending; call update_state first");
  }
  if (first > last || last >= (std::uint64_t{1} << circuit_.num_qubits())) {
    throw Error("amplitude range out of bounds");
  }
  std::vector<Complex> out;
  out.reserve(last - first + 1);
  const std::vector<Complex>* block = nullptr;
  std::uint64_t cached = ~std::uint64_t{0};
  for (std::uint64_t i = first; i <= last; ++i) {
    const std::uint64_t b = i / bs_;
    if (b != cached) {
      block = resolve_block(exec_order_.size(), b);
      cached = b;
    }
    if (block) {
      out.push_back((*block)[i % bs_]);
    } else {
      out.push_back(i == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0});
    }
  }
  return out;
}

double Simulator::norm_squared() const {
  double acc = 0.0;
  for (std::uint64_t b = 0; b < nblocks_; ++b) {
    if (const std::vector<Complex>* blk =
            resolve_block(exec_order_.size(), b)) {
      for (const Complex& c : *blk) {
        acc += std::norm(c);
      }
    } else if (b == 0) {
      acc += 1.0;  // unresolved blocks hold the initial state
    }
  }
  return acc;
}

void Simulator::dump_graph(std::ostream& os) const {
  graph_.dump_dot(os, [this](NodeId id) { return node_name(id); });
}

std::string Simulator::node_name(NodeId id) const {
  if (id == kOutputNode) {
    return "output";
  }
  const PartitionGraph::Node& n = graph_.node(id);
  const StageRt& s = stages_.at(n.stage);
  const std::size_t pos = circuit_.net_position(s.net) + 1;
  switch (s.kind) {
    case StageKind::Sync:
      return "sync_" + std::to_string(pos);
    case StageKind::MatrixVector:
      return "MxV" + std::to_string(pos) + "_" + std::to_string(n.index);
    case StageKind::PermuteScale:
      return "g" + std::to_string(s.gate) + "_p" + std::to_string(n.index);
  }
  return "?";
}

std::vector<Simulator::StageView> Simulator::stage_views() const {
  std::vector<StageView> views;
  for (StageId sid : exec_order_) {
    const StageRt& s = stages_.at(sid);
    StageView v;
    v.id = s.id;
    v.net = s.net;
    v.gate = s.gate;
    v.kind = s.kind;
    v.partitions = &s.parts;
    v.nodes = &s.nodes;
    v.store = s.has_store ? &s.store : nullptr;
    views.push_back(v);
  }
  return views;
}

}  // namespace qtask
