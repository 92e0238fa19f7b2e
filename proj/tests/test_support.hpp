#pragma once

// Shared helpers for the test suites: a dense Kronecker-product oracle that
// is independent of the library's element-op and kron_row paths, plus random
// circuit generators.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qtask/circuit.hpp"
#include "qtask/engine.hpp"
#include "qtask/gate.hpp"

namespace testsup {

using qtask::Complex;

using DenseMatrix = std::vector<std::vector<Complex>>;

inline DenseMatrix identity(std::size_t dim) {
  DenseMatrix m(dim, std::vector<Complex>(dim, Complex{0, 0}));
  for (std::size_t i = 0; i < dim; ++i) {
    m[i][i] = Complex{1, 0};
  }
  return m;
}

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t ra = a.size(), rb = b.size();
  DenseMatrix out(ra * rb, std::vector<Complex>(ra * rb, Complex{0, 0}));
  for (std::size_t i = 0; i < ra; ++i) {
    for (std::size_t j = 0; j < ra; ++j) {
      for (std::size_t k = 0; k < rb; ++k) {
        for (std::size_t l = 0; l < rb; ++l) {
          out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
        }
      }
    }
  }
  return out;
}

inline DenseMatrix to_dense(const qtask::GateMatrix& g) {
  DenseMatrix m(g.dim, std::vector<Complex>(g.dim));
  for (int r = 0; r < g.dim; ++r) {
    for (int c = 0; c < g.dim; ++c) {
      m[r][c] = g.at(r, c);
    }
  }
  return m;
}

// Full 2^n x 2^n operator of a gate, built from single-qubit projectors and
// Kronecker products only (independent of the library's index arithmetic).
inline DenseMatrix lift_gate(const qtask::Gate& gate, int n) {
  const DenseMatrix I2 = identity(2);
  auto embed = [&](const std::vector<DenseMatrix>& per_qubit) {
    DenseMatrix acc = per_qubit[n - 1];
    for (int q = n - 2; q >= 0; --q) {
      acc = kron(acc, per_qubit[q]);
    }
    return acc;
  };
  auto add = [](DenseMatrix a, const DenseMatrix& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < a.size(); ++j) {
        a[i][j] += b[i][j];
      }
    }
    return a;
  };

  const DenseMatrix p0{{Complex{1, 0}, {}}, {{}, {}}};
  const DenseMatrix p1{{{}, {}}, {{}, Complex{1, 0}}};
  const DenseMatrix x{{{}, Complex{1, 0}}, {Complex{1, 0}, {}}};

  if (gate.kind == qtask::GateKind::Cnot) {
    std::vector<DenseMatrix> a(n, I2), b(n, I2);
    a[gate.control] = p0;
    b[gate.control] = p1;
    b[gate.target] = x;
    return add(embed(a), embed(b));
  }
  if (gate.kind == qtask::GateKind::Swap) {
    // SWAP = 1/2 (II + XX + YY + ZZ)
    const DenseMatrix y{{{}, Complex{0, -1}}, {Complex{0, 1}, {}}};
    const DenseMatrix z{{Complex{1, 0}, {}}, {{}, Complex{-1, 0}}};
    DenseMatrix acc(std::size_t{1} << n,
                    std::vector<Complex>(std::size_t{1} << n, Complex{0, 0}));
    for (const DenseMatrix& pauli : {I2, x, y, z}) {
      std::vector<DenseMatrix> fs(n, I2);
      fs[gate.target] = pauli;
      fs[gate.control] = pauli;
      acc = add(std::move(acc), embed(fs));
    }
    for (auto& row : acc) {
      for (auto& v : row) {
        v *= 0.5;
      }
    }
    return acc;
  }
  std::vector<DenseMatrix> fs(n, I2);
  fs[gate.target] = to_dense(qtask::gate_matrix(gate.kind, gate.theta));
  return embed(fs);
}

inline std::vector<Complex> apply_dense(const DenseMatrix& m,
                                        const std::vector<Complex>& v) {
  std::vector<Complex> out(v.size(), Complex{0, 0});
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) {
      out[r] += m[r][c] * v[c];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random circuits
// ---------------------------------------------------------------------------

struct GateDesc {
  qtask::GateKind kind;
  double theta = 0.0;
  int target = 0;
  int control = -1;
};

struct CircuitDesc {
  int num_qubits = 1;
  std::vector<std::vector<GateDesc>> nets;
};

inline GateDesc random_gate(std::mt19937_64& rng, int n) {
  static const qtask::GateKind kinds[] = {
      qtask::GateKind::Cnot, qtask::GateKind::X,   qtask::GateKind::Y,
      qtask::GateKind::Z,    qtask::GateKind::H,   qtask::GateKind::S,
      qtask::GateKind::Sdg,  qtask::GateKind::T,   qtask::GateKind::Tdg,
      qtask::GateKind::Rx,   qtask::GateKind::Ry,  qtask::GateKind::Rz,
      qtask::GateKind::Swap,
  };
  GateDesc g;
  g.kind = kinds[rng() % (n >= 2 ? 13 : 12)];
  if (n < 2 && qtask::is_two_qubit(g.kind)) {
    g.kind = qtask::GateKind::H;
  }
  g.target = static_cast<int>(rng() % n);
  if (qtask::is_two_qubit(g.kind)) {
    do {
      g.control = static_cast<int>(rng() % n);
    } while (g.control == g.target);
  }
  if (qtask::is_rotation(g.kind)) {
    switch (rng() % 4) {
      case 0: g.theta = M_PI; break;              // non-superposition Rx/Ry
      case 1: g.theta = M_PI / 2.0; break;
      case 2: g.theta = 0.0; break;               // identity-like
      default:
        g.theta = std::uniform_real_distribution<double>(-2 * M_PI,
                                                         2 * M_PI)(rng);
    }
  }
  return g;
}

// Gates are appended into the last net when qubits are free, otherwise a new
// net is opened; this yields realistic multi-gate nets.
inline CircuitDesc random_circuit(std::mt19937_64& rng, int max_qubits,
                                  int max_gates) {
  CircuitDesc c;
  c.num_qubits = 1 + static_cast<int>(rng() % max_qubits);
  const int gates = 1 + static_cast<int>(rng() % max_gates);
  c.nets.emplace_back();
  for (int i = 0; i < gates; ++i) {
    const GateDesc g = random_gate(rng, c.num_qubits);
    auto used = [&](const std::vector<GateDesc>& net) {
      for (const GateDesc& h : net) {
        if (h.target == g.target || h.control == g.target ||
            (g.control >= 0 &&
             (h.target == g.control || h.control == g.control))) {
          return true;
        }
      }
      return false;
    };
    if (used(c.nets.back()) || rng() % 3 == 0) {
      c.nets.emplace_back();
    }
    c.nets.back().push_back(g);
  }
  return c;
}

inline void build(qtask::Simulator& sim, const CircuitDesc& c) {
  for (const auto& net : c.nets) {
    const qtask::NetId id = sim.insert_net_back();
    for (const GateDesc& g : net) {
      if (g.control >= 0) {
        sim.insert_gate(g.kind, id, g.target, g.control);
      } else if (qtask::is_rotation(g.kind)) {
        sim.insert_gate(g.kind, g.theta, id, g.target);
      } else {
        sim.insert_gate(g.kind, id, g.target);
      }
    }
  }
}

inline void build(qtask::Circuit& circuit, const CircuitDesc& c) {
  for (const auto& net : c.nets) {
    const qtask::NetId id = circuit.insert_net_back();
    for (const GateDesc& g : net) {
      circuit.insert_gate(g.kind, g.theta, id, g.target, g.control);
    }
  }
}

inline double max_dev(const qtask::Simulator& sim,
                      const std::vector<Complex>& ref) {
  const std::vector<Complex> got = sim.amplitudes(0, ref.size() - 1);
  double dev = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    dev = std::max(dev, std::abs(got[i] - ref[i]));
  }
  return dev;
}

}  // namespace testsup
