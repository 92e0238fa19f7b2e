#include "qtask/plan.hpp"

#include <algorithm>

namespace qtask {

void validate_config(const Config& cfg) {
  const bool pow2 = cfg.block_size >= 2 &&
                    (cfg.block_size & (cfg.block_size - 1)) == 0;
  if (!pow2) {
    throw Error("block size must be a power of two >= 2");
  }
}

namespace {

TaskSpec make_task(std::uint64_t first, std::uint64_t last,
                   const ElementOp& first_op, const ElementOp& last_op) {
  // Ops are enumerated with nondecreasing i and j, so the chunk hull is
  // [first.i, last.j].
  return TaskSpec{first, last, first_op.i, last_op.j};
}

}  // namespace

std::vector<TaskSpec> chunk_tasks(const ElementOpSeq& ops,
                                  std::uint64_t block_size) {
  std::vector<TaskSpec> tasks;
  const std::uint64_t n = ops.size();
  for (std::uint64_t first = 0; first < n; first += block_size) {
    const std::uint64_t last = std::min(first + block_size, n) - 1;
    tasks.push_back(make_task(first, last, ops.op(first), ops.op(last)));
  }
  return tasks;
}

std::vector<TaskSpec> chunk_tasks(const std::vector<ElementOp>& ops,
                                  std::uint64_t block_size) {
  std::vector<TaskSpec> tasks;
  const std::uint64_t n = ops.size();
  for (std::uint64_t first = 0; first < n; first += block_size) {
    const std::uint64_t last = std::min(first + block_size, n) - 1;
    TaskSpec t{first, last, ops[first].i, ops[first].j};
    for (std::uint64_t k = first; k <= last; ++k) {
      t.region_lo = std::min(t.region_lo, ops[k].i);
      t.region_hi = std::max(t.region_hi, ops[k].j);
    }
    tasks.push_back(t);
  }
  return tasks;
}

std::vector<PartitionSpec> form_partitions(const std::vector<TaskSpec>& tasks,
                                           std::uint64_t block_size) {
  std::vector<PartitionSpec> parts;
  std::uint64_t hull_lo = 0;
  std::uint64_t hull_hi = 0;
  for (const TaskSpec& t : tasks) {
    const bool overlaps = !parts.empty() && t.region_lo <= hull_hi &&
                          hull_lo <= t.region_hi;
    if (overlaps) {
      parts.back().tasks.push_back(t);
      hull_lo = std::min(hull_lo, t.region_lo);
      hull_hi = std::max(hull_hi, t.region_hi);
    } else {
      parts.push_back(PartitionSpec{0, 0, {t}});
      hull_lo = t.region_lo;
      hull_hi = t.region_hi;
    }
    parts.back().first_block = hull_lo / block_size;
    parts.back().last_block = hull_hi / block_size;
  }
  return parts;
}

std::vector<PartitionSpec> mxv_partitions(int num_qubits,
                                          std::uint64_t block_size) {
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  const std::uint64_t bs = effective_block_size(num_qubits, block_size);
  std::vector<PartitionSpec> parts;
  for (std::uint64_t k = 0; k < dim / bs; ++k) {
    PartitionSpec p;
    p.first_block = p.last_block = k;
    p.tasks.push_back(TaskSpec{k * bs, (k + 1) * bs - 1, k * bs,
                               (k + 1) * bs - 1});
    parts.push_back(std::move(p));
  }
  return parts;
}

std::vector<std::pair<std::uint64_t, Complex>> kron_row(
    const KronFactors& factors, std::uint64_t row) {
  std::vector<std::pair<std::uint64_t, Complex>> entries;
  kron_row_visit(factors, row, [&](std::uint64_t col, Complex w) {
    entries.emplace_back(col, w);
  });
  return entries;
}

std::vector<StagePlan> build_stages(const Circuit& circuit, NetId net,
                                    const Config& cfg) {
  const int n = circuit.num_qubits();
  const std::uint64_t bs = effective_block_size(n, cfg.block_size);

  std::vector<GateId> superposition;
  std::vector<GateId> permute;
  for (GateId g : circuit.net(net).gates) {
    const Gate& gate = circuit.gate(g);
    if (classify_gate(gate.kind, gate.theta) == GateClass::Superposition) {
      superposition.push_back(g);
    } else {
      permute.push_back(g);
    }
  }

  std::vector<StagePlan> stages;
  if (!superposition.empty()) {
    StagePlan sync;
    sync.kind = StageKind::Sync;
    // Coverage-only pseudo partition spanning every block.
    sync.partitions.push_back(PartitionSpec{0, num_blocks(n, bs) - 1, {}});
    stages.push_back(std::move(sync));

    StagePlan mxv;
    mxv.kind = StageKind::MatrixVector;
    mxv.factors.num_qubits = n;
    mxv.factors.factor.assign(n, std::nullopt);
    for (GateId g : superposition) {
      const Gate& gate = circuit.gate(g);
      mxv.factors.factor[gate.target] = gate_matrix(gate.kind, gate.theta);
    }
    mxv.partitions = mxv_partitions(n, bs);
    stages.push_back(std::move(mxv));
  }

  struct Ranked {
    StagePlan plan;
    std::uint64_t blocks;
    GateId gate;
  };
  std::vector<Ranked> ranked;
  for (GateId g : permute) {
    StagePlan p;
    p.kind = StageKind::PermuteScale;
    p.gate = g;
    ElementOpSeq seq(circuit.gate(g), n);
    if (!seq.empty()) {
      p.partitions = form_partitions(chunk_tasks(seq, cfg.block_size), bs);
    }
    std::uint64_t blocks = 0;
    for (const PartitionSpec& part : p.partitions) {
      blocks += part.last_block - part.first_block + 1;
    }
    ranked.push_back(Ranked{std::move(p), blocks, g});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return a.blocks != b.blocks ? a.blocks < b.blocks : a.gate < b.gate;
  });
  for (Ranked& r : ranked) {
    stages.push_back(std::move(r.plan));
  }
  return stages;
}

}  // namespace qtask
