// Command-line front end: full simulation of OpenQASM files, modifier-trace
// replay with incremental updates, and benchmark sweeps.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtask/engine.hpp"
#include "qtask/oracle.hpp"
#include "qtask/qasm.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw qtask::Error("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double max_deviation(const qtask::Simulator& sim) {
  const qtask::oracle::DenseState ref =
      qtask::oracle::simulate_dense(sim.circuit());
  const std::vector<qtask::Complex> got = sim.amplitudes(0, ref.size() - 1);
  double dev = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    dev = std::max(dev, std::abs(got[i] - ref[i]));
  }
  return dev;
}

void print_amplitudes(const qtask::Simulator& sim, const std::string& emit,
                      std::size_t top) {
  const std::uint64_t dim = std::uint64_t{1} << sim.num_qubits();
  const std::vector<qtask::Complex> amps = sim.amplitudes(0, dim - 1);

  std::vector<std::uint64_t> order(dim);
  for (std::uint64_t i = 0; i < dim; ++i) {
    order[i] = i;
  }
  if (top > 0 && top < dim) {
    std::partial_sort(order.begin(), order.begin() + top, order.end(),
                      [&](std::uint64_t a, std::uint64_t b) {
                        const double pa = std::norm(amps[a]);
                        const double pb = std::norm(amps[b]);
                        return pa != pb ? pa > pb : a < b;
                      });
    order.resize(top);
  }

  if (emit == "json") {
    nlohmann::json out = nlohmann::json::array();
    for (std::uint64_t i : order) {
      out.push_back({{"index", i},
                     {"re", amps[i].real()},
                     {"im", amps[i].imag()}});
    }
    std::cout << out.dump(2) << "\n";
    return;
  }
  std::cout.precision(16);
  for (std::uint64_t i : order) {
    std::cout << i << " " << amps[i].real() << " " << amps[i].imag() << "\n";
  }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& path, std::uint64_t block_size,
                 unsigned threads, const std::string& dump_path,
                 const std::string& emit, std::size_t top) {
  const qtask::qasm::QasmProgram program = qtask::qasm::parse(read_file(path));
  qtask::Simulator sim(static_cast<int>(program.num_qubits),
                       qtask::Config{block_size, threads});
  qtask::qasm::build_circuit(sim, program);
  const auto start = Clock::now();
  sim.update_state();
  const double ms = elapsed_ms(start);
  if (!dump_path.empty()) {
    std::ofstream out(dump_path, std::ios::binary);
    sim.dump_graph(out);
  }
  std::cerr << "simulated " << program.num_qubits << " qubits, "
            << sim.circuit().num_gates() << " gates in " << std::fixed
            << std::setprecision(3) << ms << " ms ("
            << sim.last_update().executed_partitions << " partitions)\n";
  print_amplitudes(sim, emit, top);
  return 0;
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

struct TraceStmt {
  enum class Kind { Net, Gate, RemoveGate, RemoveNet, Update, Dump };
  Kind kind;
  std::string id;
  std::string anchor;  // net: optional `after` id
  bool front = false;
  qtask::GateKind gate = qtask::GateKind::X;
  double theta = 0.0;
  bool has_theta = false;
  std::string net;
  int target = 0;
  int control = -1;
  std::string path;
  int line = 0;
};

struct Trace {
  int num_qubits = 0;
  std::vector<TraceStmt> stmts;
};

double parse_trace_angle(const std::string& text, int line) {
  std::string s = text;
  double sign = 1.0;
  if (!s.empty() && s[0] == '-') {
    sign = -1.0;
    s = s.substr(1);
  }
  if (s == "pi") {
    return sign * M_PI;
  }
  if (s.rfind("pi/", 0) == 0) {
    const double d = std::strtod(s.c_str() + 3, nullptr);
    if (d == 0.0) {
      throw qtask::Error("bad angle at trace line " + std::to_string(line));
    }
    return sign * M_PI / d;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw qtask::Error("bad angle at trace line " + std::to_string(line));
  }
  return sign * v;
}

qtask::GateKind parse_trace_kind(const std::string& name, int line) {
  static const std::map<std::string, qtask::GateKind> kinds = {
      {"CNOT", qtask::GateKind::Cnot}, {"X", qtask::GateKind::X},
      {"Y", qtask::GateKind::Y},       {"Z", qtask::GateKind::Z},
      {"H", qtask::GateKind::H},       {"S", qtask::GateKind::S},
      {"SDG", qtask::GateKind::Sdg},   {"T", qtask::GateKind::T},
      {"TDG", qtask::GateKind::Tdg},   {"RX", qtask::GateKind::Rx},
      {"RY", qtask::GateKind::Ry},     {"RZ", qtask::GateKind::Rz},
      {"SWAP", qtask::GateKind::Swap},
  };
  auto it = kinds.find(name);
  if (it == kinds.end()) {
    throw qtask::Error("unknown gate kind '" + name + "' at trace line " +
                       std::to_string(line));
  }
  return it->second;
}

Trace parse_trace(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_qubits = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') {
      continue;
    }
    if (word == "qubits") {
      if (!(ls >> trace.num_qubits) || trace.num_qubits < 1) {
        throw qtask::Error("bad qubits line " + std::to_string(lineno));
      }
      saw_qubits = true;
      continue;
    }
    if (!saw_qubits) {
      throw qtask::Error("trace must start with 'qubits <n>'");
    }
    TraceStmt st;
    st.line = lineno;
    if (word == "net") {
      st.kind = TraceStmt::Kind::Net;
      if (!(ls >> st.id)) {
        throw qtask::Error("net needs an id, line " + std::to_string(lineno));
      }
      std::string tail;
      if (ls >> tail) {
        if (tail == "front") {
          st.front = true;
        } else if (tail == "after") {
          if (!(ls >> st.anchor)) {
            throw qtask::Error("'after' needs a net id, line " +
                               std::to_string(lineno));
          }
        } else {
          throw qtask::Error("unexpected '" + tail + "', line " +
                             std::to_string(lineno));
        }
      }
    } else if (word == "gate") {
      st.kind = TraceStmt::Kind::Gate;
      std::string token;
      if (!(ls >> st.id >> token >> st.net >> st.target)) {
        throw qtask::Error("malformed gate line " + std::to_string(lineno));
      }
      const std::size_t paren = token.find('(');
      if (paren != std::string::npos) {
        if (token.back() != ')') {
          throw qtask::Error("malformed angle, line " + std::to_string(lineno));
        }
        st.theta = parse_trace_angle(
            token.substr(paren + 1, token.size() - paren - 2), lineno);
        st.has_theta = true;
        token = token.substr(0, paren);
      }
      st.gate = parse_trace_kind(token, lineno);
      if (!(ls >> st.control)) {
        st.control = -1;
      }
    } else if (word == "remove_gate") {
      st.kind = TraceStmt::Kind::RemoveGate;
      ls >> st.id;
    } else if (word == "remove_net") {
      st.kind = TraceStmt::Kind::RemoveNet;
      ls >> st.id;
    } else if (word == "update") {
      st.kind = TraceStmt::Kind::Update;
    } else if (word == "dump") {
      st.kind = TraceStmt::Kind::Dump;
      if (!(ls >> st.path)) {
        throw qtask::Error("dump needs a path, line " + std::to_string(lineno));
      }
    } else {
      throw qtask::Error("unknown trace statement '" + word + "', line " +
                         std::to_string(lineno));
    }
    trace.stmts.push_back(std::move(st));
  }
  if (!saw_qubits) {
    throw qtask::Error("trace must start with 'qubits <n>'");
  }
  return trace;
}

int cmd_replay(const std::string& path, std::uint64_t block_size,
               unsigned threads, bool verify) {
  const Trace trace = parse_trace(read_file(path));
  qtask::Simulator sim(trace.num_qubits, qtask::Config{block_size, threads});
  std::map<std::string, qtask::NetId> nets;
  std::map<std::string, qtask::GateId> gates;

  auto net_of = [&](const std::string& id) {
    auto it = nets.find(id);
    if (it == nets.end()) {
      throw qtask::Error("unknown net id '" + id + "'");
    }
    return it->second;
  };

  int update_count = 0;
  for (const TraceStmt& st : trace.stmts) {
    switch (st.kind) {
      case TraceStmt::Kind::Net: {
        if (nets.count(st.id)) {
          throw qtask::Error("duplicate net id '" + st.id + "'");
        }
        qtask::NetId id;
        if (st.front) {
          id = sim.insert_net_front();
        } else if (!st.anchor.empty()) {
          id = sim.insert_net_after(net_of(st.anchor));
        } else {
          id = sim.insert_net_back();
        }
        nets[st.id] = id;
        break;
      }
      case TraceStmt::Kind::Gate: {
        if (gates.count(st.id)) {
          throw qtask::Error("duplicate gate id '" + st.id + "'");
        }
        const qtask::NetId net = net_of(st.net);
        qtask::GateId id;
        if (st.control >= 0) {
          id = sim.insert_gate(st.gate, net, st.target, st.control);
        } else if (st.has_theta) {
          id = sim.insert_gate(st.gate, st.theta, net, st.target);
        } else {
          id = sim.insert_gate(st.gate, net, st.target);
        }
        gates[st.id] = id;
        break;
      }
      case TraceStmt::Kind::RemoveGate: {
        auto it = gates.find(st.id);
        if (it == gates.end()) {
          throw qtask::Error("unknown gate id '" + st.id + "'");
        }
        sim.remove_gate(it->second);
        gates.erase(it);
        break;
      }
      case TraceStmt::Kind::RemoveNet: {
        sim.remove_net(net_of(st.id));
        nets.erase(st.id);
        break;
      }
      case TraceStmt::Kind::Update: {
        const auto start = Clock::now();
        sim.update_state();
        const double ms = elapsed_ms(start);
        const qtask::UpdateStats& s = sim.last_update();
        std::cout << "update " << ++update_count << ": time_ms=" << std::fixed
                  << std::setprecision(3) << ms
                  << " partitions=" << s.executed_partitions
                  << " blocks=" << s.materialized_blocks
                  << " amplitudes=" << s.rewritten_amplitudes;
        if (verify) {
          std::cout << " maxdev=" << std::scientific << std::setprecision(3)
                    << max_deviation(sim);
        }
        std::cout << "\n";
        break;
      }
      case TraceStmt::Kind::Dump: {
        std::ofstream out(st.path, std::ios::binary);
        sim.dump_graph(out);
        break;
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct LevelPlan {
  int num_qubits = 0;
  std::vector<std::vector<qtask::qasm::Statement>> levels;
};

LevelPlan load_levels(const std::string& path) {
  const qtask::qasm::QasmProgram program = qtask::qasm::parse(read_file(path));
  LevelPlan plan;
  plan.num_qubits = static_cast<int>(program.num_qubits);
  for (const auto& level : qtask::qasm::levelize(program)) {
    std::vector<qtask::qasm::Statement> group;
    for (std::size_t idx : level) {
      group.push_back(program.statements[idx]);
    }
    plan.levels.push_back(std::move(group));
  }
  return plan;
}

void insert_level(qtask::Simulator& sim,
                  std::map<std::size_t, qtask::NetId>& present,
                  const LevelPlan& plan, std::size_t level) {
  // The net of a level sits right after the closest present lower level.
  auto it = present.lower_bound(level);
  qtask::NetId net;
  if (it == present.begin()) {
    net = sim.insert_net_front();
  } else {
    net = sim.insert_net_after(std::prev(it)->second);
  }
  present[level] = net;
  for (const qtask::qasm::Statement& st : plan.levels[level]) {
    if (st.gate == qtask::GateKind::Cnot) {
      sim.insert_gate(st.gate, net, st.qubits[1], st.qubits[0]);
    } else if (st.gate == qtask::GateKind::Swap) {
      sim.insert_gate(st.gate, net, st.qubits[0], st.qubits[1]);
    } else if (st.has_theta) {
      sim.insert_gate(st.gate, st.theta, net, st.qubits[0]);
    } else {
      sim.insert_gate(st.gate, net, st.qubits[0]);
    }
  }
}

struct BenchRow {
  std::size_t iteration;
  double ms;
  std::size_t partitions;
};

void print_rows(const std::vector<BenchRow>& rows) {
  std::cout << "iteration,wall_time_ms,executed_partitions\n";
  for (const BenchRow& r : rows) {
    std::cout << r.iteration << "," << std::fixed << std::setprecision(3)
              << r.ms << "," << r.partitions << "\n";
  }
}

std::vector<BenchRow> run_bench(const LevelPlan& plan, const std::string& mode,
                                std::uint64_t block_size, unsigned threads,
                                std::uint64_t seed, std::size_t per_iter,
                                std::size_t iters) {
  std::mt19937_64 rng(seed);
  qtask::Simulator sim(plan.num_qubits, qtask::Config{block_size, threads});
  std::map<std::size_t, qtask::NetId> present;
  std::vector<BenchRow> rows;
  std::size_t iteration = 0;

  auto update_row = [&]() {
    const auto start = Clock::now();
    sim.update_state();
    rows.push_back(BenchRow{iteration++, elapsed_ms(start),
                            sim.last_update().executed_partitions});
  };

  auto build_full = [&]() {
    for (std::size_t l = 0; l < plan.levels.size(); ++l) {
      insert_level(sim, present, plan, l);
    }
    update_row();
  };

  if (mode == "insert-sweep") {
    std::vector<std::size_t> order(plan.levels.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t next = 0;
    while (next < order.size()) {
      for (std::size_t k = 0; k < per_iter && next < order.size(); ++k) {
        insert_level(sim, present, plan, order[next++]);
      }
      update_row();
    }
  } else if (mode == "remove-sweep") {
    build_full();
    while (!present.empty()) {
      for (std::size_t k = 0; k < per_iter && !present.empty(); ++k) {
        std::uniform_int_distribution<std::size_t> pick(0,
                                                        present.size() - 1);
        auto it = std::next(present.begin(), pick(rng));
        sim.remove_net(it->second);
        present.erase(it);
      }
      update_row();
    }
  } else if (mode == "mix") {
    build_full();
    std::vector<std::size_t> absent;
    for (std::size_t i = 0; i < iters; ++i) {
      for (std::size_t k = 0; k < per_iter; ++k) {
        const bool can_remove = !present.empty();
        const bool can_insert = !absent.empty();
        const bool remove =
            can_remove && (!can_insert || rng() % 2 == 0);
        if (remove) {
          std::uniform_int_distribution<std::size_t> pick(
              0, present.size() - 1);
          auto it = std::next(present.begin(), pick(rng));
          sim.remove_net(it->second);
          absent.push_back(it->first);
          present.erase(it);
        } else if (can_insert) {
          std::uniform_int_distribution<std::size_t> pick(0,
                                                          absent.size() - 1);
          const std::size_t at = pick(rng);
          insert_level(sim, present, plan, absent[at]);
          absent.erase(absent.begin() + at);
        }
      }
      update_row();
    }
  } else {
    throw qtask::Error("unknown bench mode '" + mode + "'");
  }
  return rows;
}

int cmd_bench(const std::string& path, const std::string& mode,
              std::uint64_t block_size, unsigned threads, std::uint64_t seed,
              std::size_t per_iter, std::size_t iters,
              const std::string& core_sweep) {
  const LevelPlan plan = load_levels(path);
  if (core_sweep.empty()) {
    print_rows(run_bench(plan, mode, block_size, threads, seed, per_iter,
                         iters));
    return 0;
  }
  std::cout << "cores,total_ms\n";
  std::istringstream cs(core_sweep);
  std::string tok;
  while (std::getline(cs, tok, ',')) {
    const unsigned cores = static_cast<unsigned>(std::stoul(tok));
    const auto start = Clock::now();
    run_bench(plan, mode, block_size, cores, seed, per_iter, iters);
    std::cout << cores << "," << std::fixed << std::setprecision(3)
              << elapsed_ms(start) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtask: incremental task-parallel state-vector simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // --block-size/--threads may follow the subcommand

  std::uint64_t block_size = 256;
  unsigned threads = 0;
  app.add_option("--block-size", block_size,
                 "amplitudes per data block (power of two)")
      ->capture_default_str();
  app.add_option("--threads", threads,
                 "worker threads (0 = hardware concurrency)")
      ->capture_default_str();

  auto* sim_cmd = app.add_subcommand("simulate", "full simulation of a QASM file");
  std::string sim_path;
  std::string dump_path;
  std::string emit = "text";
  std::size_t top = 0;
  sim_cmd->add_option("qasm", sim_path, "OpenQASM 2.0 input")->required();
  sim_cmd->add_option("--dump-graph", dump_path, "write partition graph DOT");
  sim_cmd->add_option("--emit", emit, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  sim_cmd->add_option("--top", top, "print only the k largest amplitudes");

  auto* rep_cmd = app.add_subcommand("replay", "replay a modifier trace");
  std::string rep_path;
  bool verify = false;
  rep_cmd->add_option("trace", rep_path, "modifier trace file")->required();
  rep_cmd->add_flag("--verify", verify,
                    "compare each update against the dense oracle");

  auto* bench_cmd = app.add_subcommand("bench", "incremental benchmark sweeps");
  std::string bench_path;
  std::string mode = "insert-sweep";
  std::uint64_t seed = 1;
  std::size_t per_iter = 1;
  std::size_t iters = 50;
  std::string core_sweep;
  bench_cmd->add_option("qasm", bench_path, "OpenQASM 2.0 input")->required();
  bench_cmd->add_option("--mode", mode, "insert-sweep, remove-sweep or mix")
      ->check(CLI::IsMember({"insert-sweep", "remove-sweep", "mix"}));
  bench_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  bench_cmd->add_option("--levels-per-iter", per_iter,
                        "levels modified per iteration")
      ->capture_default_str();
  bench_cmd->add_option("--iters", iters, "iterations in mix mode")
      ->capture_default_str();
  bench_cmd->add_option("--core-sweep", core_sweep,
                        "comma list of thread counts; reports total time per "
                        "count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim_cmd) {
      return cmd_simulate(sim_path, block_size, threads, dump_path, emit, top);
    }
    if (*rep_cmd) {
      return cmd_replay(rep_path, block_size, threads, verify);
    }
    return cmd_bench(bench_path, mode, block_size, threads, seed, per_iter,
                     iters, core_sweep);
  } catch (const qtask::qasm::UnsupportedGateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qtask::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
