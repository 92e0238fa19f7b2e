#pragma once

#include <cstdint>
#include <vector>

#include "qtask/circuit.hpp"
#include "qtask/gate.hpp"
#include "qtask/types.hpp"

namespace qtask {

/// One independent element operation of a non-superposition gate: either a
/// swap of two amplitudes with per-side scale factors, or a scale of a single
/// amplitude (then j == i).
struct ElementOp {
  enum class Mode { SwapScale, Scale };
  Mode mode = Mode::Scale;
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  Complex scale_i{1.0, 0.0};
  Complex scale_j{1.0, 0.0};
};

/// Random-access view of a gate's element operations in increasing order of
/// smallest touched index. Nothing is materialized: op(k) is computed from k
/// by bit insertion, so chunking and execution can stream arbitrarily large
/// gates. Construction throws SuperpositionGateError for superposition gates.
class ElementOpSeq {
 public:
  ElementOpSeq(const Gate& gate, int num_qubits);

  std::uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  ElementOp op(std::uint64_t k) const;

 private:
  enum class Form {
    Empty,      // identity-like gate, no work
    PairBit,    // swap (i, i + 2^t) over indices with bit t clear
    PairCnot,   // swap (i, i + 2^t) over indices with control set, t clear
    PairSwap,   // swap between bit patterns (lo=1,hi=0) and (lo=0,hi=1)
    ScaleSet,   // scale indices with bit t set
    ScaleClear, // scale indices with bit t clear
    ScaleAll,   // scale every index, factor picked by bit t
  };

  Form form_ = Form::Empty;
  int bit_lo_ = 0;
  int bit_hi_ = 0;
  std::uint64_t count_ = 0;
  Complex scale_i_{1.0, 0.0};
  Complex scale_j_{1.0, 0.0};
};

/// Materialized list of a gate's element operations (convenience for small
/// qubit counts; the engine itself streams through ElementOpSeq).
std::vector<ElementOp> element_ops(const Gate& gate, int num_qubits);

}  // namespace qtask
