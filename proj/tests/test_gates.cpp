#include <cmath>

#include "doctest.h"
#include "qtask/gate.hpp"

using namespace qtask;

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

TEST_CASE("pinned gate matrices") {
  const GateMatrix x = gate_matrix(GateKind::X);
  CHECK(x.at(0, 0) == Complex{0, 0});
  CHECK(x.at(0, 1) == Complex{1, 0});
  CHECK(x.at(1, 0) == Complex{1, 0});
  CHECK(x.at(1, 1) == Complex{0, 0});

  const GateMatrix h = gate_matrix(GateKind::H);
  CHECK(h.at(0, 0).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  CHECK(h.at(1, 1).real() == doctest::Approx(-kInvSqrt2).epsilon(1e-15));

  const GateMatrix cx = gate_matrix(GateKind::Cnot);
  REQUIRE(cx.dim == 4);
  const int expected_col[4] = {0, 1, 3, 2};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      CHECK(cx.at(r, c) == (c == expected_col[r] ? Complex{1, 0}
                                                 : Complex{0, 0}));
    }
  }

  const GateMatrix rz0 = gate_matrix(GateKind::Rz, 0.0);
  CHECK(std::abs(rz0.at(0, 0) - Complex{1, 0}) < 1e-15);
  CHECK(std::abs(rz0.at(1, 1) - Complex{1, 0}) < 1e-15);
  CHECK(std::abs(rz0.at(0, 1)) < 1e-15);
}

TEST_CASE("all gate matrices are unitary") {
  for (GateKind k : {GateKind::Cnot, GateKind::X, GateKind::Y, GateKind::Z,
                     GateKind::H, GateKind::S, GateKind::Sdg, GateKind::T,
                     GateKind::Tdg, GateKind::Swap}) {
    CHECK(is_unitary(gate_matrix(k)));
  }
  for (GateKind k : {GateKind::Rx, GateKind::Ry, GateKind::Rz}) {
    for (int i = 0; i < 50; ++i) {
      const double theta = -7.0 + 0.29 * i;
      CHECK(is_unitary(gate_matrix(k, theta)));
    }
  }
}

TEST_CASE("classification") {
  CHECK(classify_gate(GateKind::H) == GateClass::Superposition);
  CHECK(classify_gate(GateKind::Rx, M_PI) == GateClass::NonSuperposition);
  CHECK(classify_gate(GateKind::Rx, M_PI / 2) == GateClass::Superposition);
  CHECK(classify_gate(GateKind::Z) == GateClass::NonSuperposition);
  CHECK(classify_gate(GateKind::Ry, M_PI) == GateClass::NonSuperposition);
  CHECK(classify_gate(GateKind::Ry, 1.0) == GateClass::Superposition);
  CHECK(classify_gate(GateKind::Cnot) == GateClass::NonSuperposition);
  CHECK(classify_gate(GateKind::Swap) == GateClass::NonSuperposition);
  // Rz is diagonal for every angle.
  for (int i = 0; i < 40; ++i) {
    CHECK(classify_gate(GateKind::Rz, -6.0 + i * 0.31) ==
          GateClass::NonSuperposition);
  }
  // Near-pi rotations stay superposition: the threshold must not snap them.
  CHECK(classify_gate(GateKind::Rx, M_PI + 1e-4) == GateClass::Superposition);
}

TEST_CASE("classification matches the one-nonzero-per-row predicate") {
  auto rows_ok = [](const GateMatrix& m) {
    for (int r = 0; r < m.dim; ++r) {
      int nz = 0;
      for (int c = 0; c < m.dim; ++c) {
        if (std::abs(m.at(r, c)) > 1e-12) {
          ++nz;
        }
      }
      if (nz > 1) {
        return false;
      }
    }
    return true;
  };
  for (GateKind k : {GateKind::Cnot, GateKind::X, GateKind::Y, GateKind::Z,
                     GateKind::H, GateKind::S, GateKind::Sdg, GateKind::T,
                     GateKind::Tdg, GateKind::Swap}) {
    CHECK((classify_gate(k) == GateClass::NonSuperposition) ==
          rows_ok(gate_matrix(k)));
  }
  for (GateKind k : {GateKind::Rx, GateKind::Ry, GateKind::Rz}) {
    for (int i = 0; i < 60; ++i) {
      const double theta = -6.5 + 0.21 * i;
      CHECK((classify_gate(k, theta) == GateClass::NonSuperposition) ==
            rows_ok(gate_matrix(k, theta)));
    }
  }
}
