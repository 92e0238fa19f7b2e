#pragma once

#include <array>
#include <string>

#include "qtask/types.hpp"

namespace qtask {

/// Supported standard gates. Rotation kinds (Rx/Ry/Rz) carry an angle in
/// radians alongside the kind; Swap is accepted as a two-qubit permutation
/// gate next to the standard set.
enum class GateKind {
  Cnot,
  X,
  Y,
  Z,
  H,
  S,
  Sdg,
  T,
  Tdg,
  Rx,
  Ry,
  Rz,
  Swap,
};

const char* kind_name(GateKind kind);

inline bool is_rotation(GateKind kind) {
  return kind == GateKind::Rx || kind == GateKind::Ry || kind == GateKind::Rz;
}

inline bool is_two_qubit(GateKind kind) {
  return kind == GateKind::Cnot || kind == GateKind::Swap;
}

/// Dense unitary of a gate, row major. dim is 2 for single-qubit gates and 4
/// for Cnot/Swap. For the 4x4 matrices the two-bit sub-index is
/// (first_qubit << 1) | second_qubit, i.e. control is the high bit of a Cnot.
struct GateMatrix {
  int dim = 2;
  std::array<Complex, 16> m{};

  Complex at(int r, int c) const { return m[r * dim + c]; }
  Complex& at(int r, int c) { return m[r * dim + c]; }
};

/// Entry magnitudes at or below this threshold count as structural zeros when
/// classifying gates; it separates Rx(pi) from Rx(pi +- eps) robustly in
/// double precision.
inline constexpr double kZeroThreshold = 1e-12;

GateMatrix gate_matrix(GateKind kind, double theta = 0.0);

enum class GateClass { NonSuperposition, Superposition };

/// NonSuperposition iff gate_matrix(kind, theta) has at most one nonzero
/// entry per row (a scaled permutation). Rz is NonSuperposition for every
/// angle; Rx/Ry only at multiples of pi.
GateClass classify_gate(GateKind kind, double theta = 0.0);

bool is_unitary(const GateMatrix& m, double tol = 1e-12);

}  // namespace qtask
