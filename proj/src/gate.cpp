#include "qtask/gate.hpp"

#include <cmath>

namespace qtask {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210484903928;

GateMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  GateMatrix g;
  g.dim = 2;
  g.at(0, 0) = a;
  g.at(0, 1) = b;
  g.at(1, 0) = c;
  g.at(1, 1) = d;
  return g;
}

}  // namespace

const char* kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::Cnot: return "CNOT";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "SDG";
    case GateKind::T: return "T";
    case GateKind::Tdg: return "TDG";
    case GateKind::Rx: return "RX";
    case GateKind::Ry: return "RY";
    case GateKind::Rz: return "RZ";
    case GateKind::Swap: return "SWAP";
  }
  return "?";
}

GateMatrix gate_matrix(GateKind kind, double theta) {
  const Complex i{0.0, 1.0};
  const double half = theta / 2.0;
  switch (kind) {
    case GateKind::X:
      return mat2(0, 1, 1, 0);
    case GateKind::Y:
      return mat2(0, -i, i, 0);
    case GateKind::Z:
      return mat2(1, 0, 0, -1);
    case GateKind::H:
      return mat2(kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
    case GateKind::S:
      return mat2(1, 0, 0, i);
    case GateKind::Sdg:
      return mat2(1, 0, 0, -i);
    case GateKind::T:
      return mat2(1, 0, 0, std::polar(1.0, M_PI / 4.0));
    case GateKind::Tdg:
      return mat2(1, 0, 0, std::polar(1.0, -M_PI / 4.0));
    case GateKind::Rx:
      return mat2(std::cos(half), -i * std::sin(half), -i * std::sin(half),
                  std::cos(half));
    case GateKind::Ry:
      return mat2(std::cos(half), -std::sin(half), std::sin(half),
                  std::cos(half));
    case GateKind::Rz:
      return mat2(std::polar(1.0, -half), 0, 0, std::polar(1.0, half));
    case GateKind::Cnot: {
      GateMatrix g;
      g.dim = 4;
      g.at(0, 0) = 1;
      g.at(1, 1) = 1;
      g.at(2, 3) = 1;
      g.at(3, 2) = 1;
      return g;
    }
    case GateKind::Swap: {
      GateMatrix g;
      g.dim = 4;
      g.at(0, 0) = 1;
      g.at(1, 2) = 1;
      g.at(2, 1) = 1;
      g.at(3, 3) = 1;
      return g;
    }
  }
  throw Error("unknown gate kind");
}

GateClass classify_gate(GateKind kind, double theta) {
  const GateMatrix g = gate_matrix(kind, theta);
  for (int r = 0; r < g.dim; ++r) {
    int nonzeros = 0;
    for (int c = 0; c < g.dim; ++c) {
      if (std::abs(g.at(r, c)) > kZeroThreshold) {
        ++nonzeros;
      }
    }
    if (nonzeros > 1) {
      return GateClass::Superposition;
    }
  }
  return GateClass::NonSuperposition;
}

bool is_unitary(const GateMatrix& g, double tol) {
  for (int r = 0; r < g.dim; ++r) {
    for (int c = 0; c < g.dim; ++c) {
      Complex acc = 0;
      for (int k = 0; k < g.dim; ++k) {
        acc += g.at(r, k) * std::conj(g.at(c, k));
      }
      const Complex want = (r == c) ? Complex{1, 0} : Complex{0, 0};
      if (std::abs(acc - want) > tol) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace qtask
