#include "qtask/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace qtask::qasm {

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(message + " at line " + std::to_string(line) + ", column " +
            std::to_string(column)),
      line_(line),
      column_(column) {}

UnsupportedGateError::UnsupportedGateError(const std::string& name, int line,
                                           int column)
    : Error("unsupported gate '" + name + "' at line " + std::to_string(line) +
            ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  enum class Kind { Ident, Number, Symbol, String, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) {
      t.kind = Token::Kind::End;
      return t;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        t.text += advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      t.kind = Token::Kind::Number;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
              ((text_[pos_] == '+' || text_[pos_] == '-') && !t.text.empty() &&
               (t.text.back() == 'e' || t.text.back() == 'E')))) {
        t.text += advance();
      }
      return t;
    }
    if (c == '"') {
      t.kind = Token::Kind::String;
      advance();
      while (pos_ < text_.size() && text_[pos_] != '"') {
        t.text += advance();
      }
      if (pos_ >= text_.size()) {
        throw ParseError("unterminated string", t.line, t.column);
      }
      advance();
      return t;
    }
    t.kind = Token::Kind::Symbol;
    t.text = advance();
    if (t.text == "-" && pos_ < text_.size() && text_[pos_] == '>') {
      t.text += advance();
    }
    return t;
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          advance();
        }
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  QasmProgram run() {
    expect_ident("OPENQASM");
    const Token version = expect(Token::Kind::Number, "version number");
    if (version.text != "2.0") {
      throw ParseError("unsupported OPENQASM version " + version.text,
                       version.line, version.column);
    }
    expect_symbol(";");

    bool saw_qreg = false;
    while (cur_.kind != Token::Kind::End) {
      const Token head = expect(Token::Kind::Ident, "statement");
      if (head.text == "include") {
        const Token file = expect(Token::Kind::String, "include file");
        if (file.text != "qelib1.inc") {
          throw ParseError("unsupported include \"" + file.text + "\"",
                           file.line, file.column);
        }
        expect_symbol(";");
      } else if (head.text == "qreg") {
        if (saw_qreg) {
          throw ParseError("only a single quantum register is supported",
                           head.line, head.column);
        }
        saw_qreg = true;
        auto [name, size] = parse_reg_decl();
        program_.qreg_name = name;
        program_.num_qubits = size;
      } else if (head.text == "creg") {
        parse_reg_decl();  // accepted and ignored
      } else if (head.text == "barrier") {
        parse_barrier(head);
      } else {
        parse_gate(head, saw_qreg);
      }
    }
    if (!saw_qreg) {
      throw ParseError("missing qreg declaration", 1, 1);
    }
    return std::move(program_);
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  Token expect(Token::Kind kind, const std::string& what) {
    if (cur_.kind != kind) {
      throw ParseError("expected " + what, cur_.line, cur_.column);
    }
    Token t = cur_;
    shift();
    return t;
  }

  void expect_symbol(const std::string& s) {
    if (cur_.kind != Token::Kind::Symbol || cur_.text != s) {
      throw ParseError("expected '" + s + "'", cur_.line, cur_.column);
    }
    shift();
  }

  void expect_ident(const std::string& s) {
    if (cur_.kind != Token::Kind::Ident || cur_.text != s) {
      throw ParseError("expected '" + s + "'", cur_.line, cur_.column);
    }
    shift();
  }

  bool at_symbol(const std::string& s) const {
    return cur_.kind == Token::Kind::Symbol && cur_.text == s;
  }

  std::pair<std::string, std::size_t> parse_reg_decl() {
    const Token name = expect(Token::Kind::Ident, "register name");
    expect_symbol("[");
    const Token size = expect(Token::Kind::Number, "register size");
    expect_symbol("]");
    expect_symbol(";");
    const long n = std::strtol(size.text.c_str(), nullptr, 10);
    if (n < 1) {
      throw ParseError("register size must be positive", size.line,
                       size.column);
    }
    return {name.text, static_cast<std::size_t>(n)};
  }

  int parse_qubit_operand() {
    const Token name = expect(Token::Kind::Ident, "qubit operand");
    if (name.text != program_.qreg_name) {
      throw ParseError("unknown register '" + name.text + "'", name.line,
                       name.column);
    }
    if (!at_symbol("[")) {
      throw ParseError("register broadcast is not supported; index the qubit",
                       cur_.line, cur_.column);
    }
    shift();
    const Token idx = expect(Token::Kind::Number, "qubit index");
    expect_symbol("]");
    const long q = std::strtol(idx.text.c_str(), nullptr, 10);
    if (q < 0 || static_cast<std::size_t>(q) >= program_.num_qubits) {
      throw ParseError("qubit index out of range", idx.line, idx.column);
    }
    return static_cast<int>(q);
  }

  // Angle grammar: ['-'] term {('*'|'/') term}, term := number | pi
  double parse_angle() {
    double sign = 1.0;
    if (at_symbol("-")) {
      shift();
      sign = -1.0;
    }
    double value = parse_angle_term();
    while (at_symbol("*") || at_symbol("/")) {
      const bool mul = cur_.text == "*";
      shift();
      const double rhs = parse_angle_term();
      value = mul ? value * rhs : value / rhs;
    }
    return sign * value;
  }

  double parse_angle_term() {
    if (cur_.kind == Token::Kind::Ident && cur_.text == "pi") {
      shift();
      return M_PI;
    }
    const Token num = expect(Token::Kind::Number, "angle");
    return std::strtod(num.text.c_str(), nullptr);
  }

  void parse_barrier(const Token& head) {
    Statement st;
    st.kind = Statement::Kind::Barrier;
    st.line = head.line;
    st.column = head.column;
    // Operands are irrelevant: any barrier separates levels globally.
    while (!at_symbol(";")) {
      if (cur_.kind == Token::Kind::End) {
        throw ParseError("expected ';'", cur_.line, cur_.column);
      }
      shift();
    }
    shift();
    program_.statements.push_back(st);
  }

  void parse_gate(const Token& head, bool saw_qreg) {
    static const std::map<std::string, GateKind> kinds = {
        {"cx", GateKind::Cnot}, {"x", GateKind::X},     {"y", GateKind::Y},
        {"z", GateKind::Z},     {"h", GateKind::H},     {"s", GateKind::S},
        {"sdg", GateKind::Sdg}, {"t", GateKind::T},     {"tdg", GateKind::Tdg},
        {"rx", GateKind::Rx},   {"ry", GateKind::Ry},   {"rz", GateKind::Rz},
        {"swap", GateKind::Swap},
    };
    auto it = kinds.find(head.text);
    if (it == kinds.end()) {
      throw UnsupportedGateError(head.text, head.line, head.column);
    }
    if (!saw_qreg) {
      throw ParseError("gate before qreg declaration", head.line, head.column);
    }

    Statement st;
    st.kind = Statement::Kind::Gate;
    st.gate = it->second;
    st.line = head.line;
    st.column = head.column;

    if (is_rotation(st.gate)) {
      expect_symbol("(");
      st.theta = parse_angle();
      st.has_theta = true;
      expect_symbol(")");
    } else if (at_symbol("(")) {
      throw ParseError("gate takes no parameter", cur_.line, cur_.column);
    }

    st.qubits.push_back(parse_qubit_operand());
    while (at_symbol(",")) {
      shift();
      st.qubits.push_back(parse_qubit_operand());
    }
    expect_symbol(";");

    const std::size_t want = is_two_qubit(st.gate) ? 2 : 1;
    if (st.qubits.size() != want) {
      throw ParseError("wrong operand count for '" + head.text + "'",
                       head.line, head.column);
    }
    if (want == 2 && st.qubits[0] == st.qubits[1]) {
      throw ParseError("two-qubit gate needs distinct qubits", head.line,
                       head.column);
    }
    program_.statements.push_back(std::move(st));
  }

  Lexer lexer_;
  Token cur_;
  QasmProgram program_;
};

const char* gate_text(GateKind kind) {
  switch (kind) {
    case GateKind::Cnot: return "cx";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::Swap: return "swap";
  }
  return "?";
}

}  // namespace

QasmProgram parse(std::string_view text) { return Parser(text).run(); }

std::string to_qasm(const QasmProgram& program) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\n";
  os << "include \"qelib1.inc\";\n";
  os << "qreg " << program.qreg_name << "[" << program.num_qubits << "];\n";
  os.precision(17);
  for (const Statement& st : program.statements) {
    if (st.kind == Statement::Kind::Barrier) {
      os << "barrier " << program.qreg_name << ";\n";
      continue;
    }
    os << gate_text(st.gate);
    if (st.has_theta) {
      os << "(" << st.theta << ")";
    }
    bool first = true;
    for (int q : st.qubits) {
      os << (first ? " " : ",") << program.qreg_name << "[" << q << "]";
      first = false;
    }
    os << ";\n";
  }
  return os.str();
}

std::vector<std::vector<std::size_t>> levelize(const QasmProgram& program) {
  std::vector<int> qubit_level(program.num_qubits, -1);
  int floor = 0;
  int max_level = -1;
  std::vector<std::vector<std::size_t>> levels;
  for (std::size_t i = 0; i < program.statements.size(); ++i) {
    const Statement& st = program.statements[i];
    if (st.kind == Statement::Kind::Barrier) {
      floor = max_level + 1;
      continue;
    }
    int level = floor;
    for (int q : st.qubits) {
      level = std::max(level, qubit_level[q] + 1);
    }
    for (int q : st.qubits) {
      qubit_level[q] = level;
    }
    max_level = std::max(max_level, level);
    if (static_cast<std::size_t>(level) >= levels.size()) {
      levels.resize(level + 1);
    }
    levels[level].push_back(i);
  }
  return levels;
}

void build_circuit(Simulator& sim, const QasmProgram& program) {
  for (const auto& level : levelize(program)) {
    const NetId net = sim.insert_net_back();
    for (std::size_t idx : level) {
      const Statement& st = program.statements[idx];
      switch (st.gate) {
        case GateKind::Cnot:
          sim.insert_gate(GateKind::Cnot, net, /*target=*/st.qubits[1],
                          /*control=*/st.qubits[0]);
          break;
        case GateKind::Swap:
          sim.insert_gate(GateKind::Swap, net, st.qubits[0], st.qubits[1]);
          break;
        default:
          if (st.has_theta) {
            sim.insert_gate(st.gate, st.theta, net, st.qubits[0]);
          } else {
            sim.insert_gate(st.gate, net, st.qubits[0]);
          }
      }
    }
  }
}

}  // namespace qtask::qasm
