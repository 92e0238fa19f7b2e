#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qtask/circuit.hpp"
#include "qtask/element_ops.hpp"
#include "qtask/gate.hpp"

namespace qtask {

/// Engine configuration. block_size is the number of amplitudes per data
/// block and the number of element ops (or matrix rows) per task; it must be
/// a power of two >= 2. threads == 0 selects hardware concurrency.
struct Config {
  std::uint64_t block_size = 256;
  unsigned threads = 0;
};

void validate_config(const Config& cfg);

/// Effective block size of an n-qubit state: blocks never exceed the state
/// vector itself.
inline std::uint64_t effective_block_size(int num_qubits,
                                          std::uint64_t block_size) {
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  return block_size < dim ? block_size : dim;
}

inline std::uint64_t num_blocks(int num_qubits, std::uint64_t block_size) {
  return (std::uint64_t{1} << num_qubits) /
         effective_block_size(num_qubits, block_size);
}

/// A run of consecutive element ops (or matrix rows) executed atomically by
/// one worker. region is the inclusive hull of all touched state indices.
struct TaskSpec {
  std::uint64_t first_op = 0;
  std::uint64_t last_op = 0;  // inclusive
  std::uint64_t region_lo = 0;
  std::uint64_t region_hi = 0;  // inclusive
};

/// Maximal run of chain-overlapping tasks of one stage; node of the
/// dependency graph. Block range is the inclusive hull of the task regions.
struct PartitionSpec {
  std::uint64_t first_block = 0;
  std::uint64_t last_block = 0;  // inclusive
  std::vector<TaskSpec> tasks;
};

enum class StageKind { Sync, MatrixVector, PermuteScale };

/// Per-qubit factor assignment of a fused superposition group; nullopt means
/// identity on that qubit.
struct KronFactors {
  int num_qubits = 0;
  std::vector<std::optional<GateMatrix>> factor;
};

/// One executable unit owning an output state vector: either the fused
/// superposition group of a net (MatrixVector, preceded by a Sync barrier) or
/// a single non-superposition gate (PermuteScale).
struct StagePlan {
  StageKind kind = StageKind::PermuteScale;
  GateId gate = kNoGate;  // PermuteScale only
  KronFactors factors;    // MatrixVector only
  std::vector<PartitionSpec> partitions;
};

/// Splits an op sequence into tasks of exactly block_size consecutive ops
/// (the last task may be shorter), each with its touched-index hull.
std::vector<TaskSpec> chunk_tasks(const ElementOpSeq& ops,
                                  std::uint64_t block_size);
std::vector<TaskSpec> chunk_tasks(const std::vector<ElementOp>& ops,
                                  std::uint64_t block_size);

/// Greedily merges consecutive tasks whose regions overlap the running hull;
/// a task whose region is disjoint from the hull starts a new partition.
std::vector<PartitionSpec> form_partitions(const std::vector<TaskSpec>& tasks,
                                           std::uint64_t block_size);

/// Row-wise split of a matrix-vector stage: one single-block partition per
/// data block (a single partition when the state fits in one block).
std::vector<PartitionSpec> mxv_partitions(int num_qubits,
                                          std::uint64_t block_size);

/// Nonzero entries of row `row` of the Kronecker product of the per-qubit
/// factors (qubit n-1 outermost). Identity factors pass through without
/// expansion; zero branches are pruned.
std::vector<std::pair<std::uint64_t, Complex>> kron_row(
    const KronFactors& factors, std::uint64_t row);

/// Streaming variant of kron_row: calls visit(column, weight) for every
/// nonzero entry, in the same deterministic order.
template <typename Visitor>
void kron_row_visit(const KronFactors& factors, std::uint64_t row,
                    Visitor&& visit) {
  struct Rec {
    const KronFactors& f;
    std::uint64_t row;
    Visitor& visit;
    void descend(int qubit, std::uint64_t col, Complex weight) {
      if (qubit < 0) {
        visit(col, weight);
        return;
      }
      const std::uint64_t rbit = (row >> qubit) & 1;
      const auto& m = f.factor[qubit];
      if (!m) {
        descend(qubit - 1, col | (rbit << qubit), weight);
        return;
      }
      for (std::uint64_t cbit = 0; cbit < 2; ++cbit) {
        const Complex entry = m->at(static_cast<int>(rbit),
                                    static_cast<int>(cbit));
        if (entry != Complex{0.0, 0.0}) {
          descend(qubit - 1, col | (cbit << qubit), weight * entry);
        }
      }
    }
  };
  Rec rec{factors, row, visit};
  rec.descend(factors.num_qubits - 1, 0, Complex{1.0, 0.0});
}

/// Decomposes a net into stages in execution order: a Sync barrier plus one
/// MatrixVector stage when the net holds superposition gates, then one
/// PermuteScale stage per non-superposition gate ordered by ascending total
/// partition block count (ties by gate insertion order).
std::vector<StagePlan> build_stages(const Circuit& circuit, NetId net,
                                    const Config& cfg);

}  // namespace qtask
