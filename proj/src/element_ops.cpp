#include "qtask/element_ops.hpp"

#include <cmath>

namespace qtask {

namespace {

// Spreads x by one bit: inserts `bit` at position `pos`, shifting the upper
// part left.
inline std::uint64_t insert_bit(std::uint64_t x, int pos, std::uint64_t bit) {
  const std::uint64_t low = x & ((std::uint64_t{1} << pos) - 1);
  return ((x >> pos) << (pos + 1)) | (bit << pos) | low;
}

inline bool near_zero(Complex c) { return std::abs(c) <= kZeroThreshold; }

inline bool near_one(Complex c) {
  return std::abs(c - Complex{1.0, 0.0}) <= kZeroThreshold;
}

}  // namespace

ElementOpSeq::ElementOpSeq(const Gate& gate, int num_qubits) {
  if (classify_gate(gate.kind, gate.theta) != GateClass::NonSuperposition) {
    throw SuperpositionGateError("element ops are defined only for "
                                 "non-superposition gates");
  }
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  const GateMatrix m = gate_matrix(gate.kind, gate.theta);

  if (gate.kind == GateKind::Cnot) {
    form_ = Form::PairCnot;
    bit_lo_ = gate.target;
    bit_hi_ = gate.control;
    scale_i_ = m.at(2, 3);
    scale_j_ = m.at(3, 2);
    count_ = dim >> 2;
    return;
  }
  if (gate.kind == GateKind::Swap) {
    form_ = Form::PairSwap;
    bit_lo_ = std::min(gate.target, gate.control);
    bit_hi_ = std::max(gate.target, gate.control);
    scale_i_ = m.at(1, 2);
    scale_j_ = m.at(2, 1);
    count_ = dim >> 2;
    return;
  }

  const bool diagonal = near_zero(m.at(0, 1)) && near_zero(m.at(1, 0));
  if (diagonal) {
    const bool keep0 = !near_one(m.at(0, 0));
    const bool keep1 = !near_one(m.at(1, 1));
    bit_lo_ = gate.target;
    scale_i_ = m.at(0, 0);
    scale_j_ = m.at(1, 1);
    if (keep0 && keep1) {
      form_ = Form::ScaleAll;
      count_ = dim;
    } else if (keep1) {
      form_ = Form::ScaleSet;
      count_ = dim >> 1;
    } else if (keep0) {
      form_ = Form::ScaleClear;
      count_ = dim >> 1;
    } else {
      form_ = Form::Empty;
      count_ = 0;
    }
    return;
  }

  // Anti-diagonal: a scaled bit flip on the target qubit.
  form_ = Form::PairBit;
  bit_lo_ = gate.target;
  scale_i_ = m.at(0, 1);
  scale_j_ = m.at(1, 0);
  count_ = dim >> 1;
}

ElementOp ElementOpSeq::op(std::uint64_t k) const {
  ElementOp e;
  e.scale_i = scale_i_;
  e.scale_j = scale_j_;
  switch (form_) {
    case Form::Empty:
      throw Error("op() on empty sequence");
    case Form::PairBit:
      e.mode = ElementOp::Mode::SwapScale;
      e.i = insert_bit(k, bit_lo_, 0);
      e.j = e.i | (std::uint64_t{1} << bit_lo_);
      return e;
    case Form::PairCnot: {
      e.mode = ElementOp::Mode::SwapScale;
      const int p0 = std::min(bit_lo_, bit_hi_);
      const int p1 = std::max(bit_lo_, bit_hi_);
      std::uint64_t idx = insert_bit(k, p0, p0 == bit_hi_ ? 1 : 0);
      idx = insert_bit(idx, p1, p1 == bit_hi_ ? 1 : 0);
      e.i = idx;
      e.j = idx | (std::uint64_t{1} << bit_lo_);
      return e;
    }
    case Form::PairSwap: {
      e.mode = ElementOp::Mode::SwapScale;
      std::uint64_t idx = insert_bit(k, bit_lo_, 1);
      idx = insert_bit(idx, bit_hi_, 0);
      e.i = idx;
      e.j = idx + (std::uint64_t{1} << bit_hi_) - (std::uint64_t{1} << bit_lo_);
      return e;
    }
    case Form::ScaleSet:
      e.mode = ElementOp::Mode::Scale;
      e.i = e.j = insert_bit(k, bit_lo_, 1);
      e.scale_i = e.scale_j = scale_j_;
      return e;
    case Form::ScaleClear:
      e.mode = ElementOp::Mode::Scale;
      e.i = e.j = insert_bit(k, bit_lo_, 0);
      e.scale_i = e.scale_j = scale_i_;
      return e;
    case Form::ScaleAll:
      e.mode = ElementOp::Mode::Scale;
      e.i = e.j = k;
      if ((k >> bit_lo_) & 1) {
        e.scale_i = e.scale_j = scale_j_;
      } else {
        e.scale_i = e.scale_j = scale_i_;
      }
      return e;
  }
  throw Error("unreachable");
}

std::vector<ElementOp> element_ops(const Gate& gate, int num_qubits) {
  ElementOpSeq seq(gate, num_qubits);
  std::vector<ElementOp> ops;
  ops.reserve(seq.size());
  for (std::uint64_t k = 0; k < seq.size(); ++k) {
    ops.push_back(seq.op(k));
  }
  return ops;
}

}  // namespace qtask
