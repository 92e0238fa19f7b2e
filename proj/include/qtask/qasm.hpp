#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qtask/engine.hpp"
#include "qtask/gate.hpp"
#include "qtask/types.hpp"

namespace qtask::qasm {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnsupportedGateError : public Error {
 public:
  UnsupportedGateError(const std::string& name, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct Statement {
  enum class Kind { Gate, Barrier };
  Kind kind = Kind::Gate;
  GateKind gate = GateKind::X;
  double theta = 0.0;
  bool has_theta = false;
  std::vector<int> qubits;  // cx: control first, target second
  int line = 0;
  int column = 0;
};

/// Parsed OpenQASM 2.0 subset: one quantum register, standard gates of the
/// supported set plus swap, barriers retained as level separator hints.
struct QasmProgram {
  std::size_t num_qubits = 0;
  std::string qreg_name = "q";
  std::vector<Statement> statements;
};

QasmProgram parse(std::string_view text);

/// Regenerates QASM text for a parsed program (statement order preserved).
std::string to_qasm(const QasmProgram& program);

/// ASAP leveling: a gate's level is one past the highest level among earlier
/// gates sharing a qubit; a barrier pushes all later gates past every level
/// seen so far. Returns statement indices grouped by ascending level.
std::vector<std::vector<std::size_t>> levelize(const QasmProgram& program);

/// Creates one net per level (appended in order) and inserts the gates.
/// OpenQASM `cx a,b` maps to control=a, target=b.
void build_circuit(Simulator& sim, const QasmProgram& program);

}  // namespace qtask::qasm
