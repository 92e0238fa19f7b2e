// Integration tests driving the qtask_cli binary through its public surface:
// exit codes, amplitude output, DOT dumps, replay reports and bench CSV.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int g_failures = 0;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(QTASK_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    return r;
  }
  std::array<char, 4096> buf;
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) {
    r.output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) {
  return std::string(QTASK_TEST_DATA) + "/" + name;
}

void check(bool ok, const std::string& what) {
  if (ok) {
    std::cout << "[PASS] " << what << "\n";
  } else {
    std::cerr << "[FAIL] " << what << "\n";
    ++g_failures;
  }
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

int main() {
  {
    const RunResult r = run("simulate " + data("bell.qasm"));
    check(r.exit_code == 0, "simulate bell exits 0");
    check(r.output.find("0 0.7071067811865476 0") != std::string::npos &&
              r.output.find("3 0.7071067811865476 0") != std::string::npos,
          "bell amplitudes at indices 0 and 3");
  }

  {
    const RunResult r =
        run("simulate " + data("bell.qasm") + " --emit json --top 2");
    check(r.exit_code == 0, "simulate --emit json exits 0");
    check(r.output.find("\"index\"") != std::string::npos &&
              r.output.find("\"re\"") != std::string::npos &&
              r.output.find("\"im\"") != std::string::npos,
          "json output carries index/re/im fields");
  }

  {
    const RunResult r = run("--block-size 4 simulate " + data("entangle5.qasm") +
                            " --dump-graph /tmp/qtask_g.dot --top 1");
    check(r.exit_code == 0, "simulate with graph dump exits 0");
    std::ifstream in("/tmp/qtask_g.dot");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const int nodes = count_occurrences(text, "label=") + 1;  // + output
    check(nodes == 17, "entangle5 graph has 17 nodes at block size 4");
  }

  {
    const RunResult r = run("simulate " + data("ccx.qasm"));
    check(r.exit_code == 2, "unsupported gate exits 2");
  }

  {
    const RunResult r = run("simulate " + data("missing.qasm"));
    check(r.exit_code == 1, "missing file exits 1");
  }

  {
    const RunResult r =
        run("--block-size 4 replay " + data("entangle5.trace") + " --verify");
    check(r.exit_code == 0, "replay entangle5 exits 0");
    check(r.output.find("update 2: ") != std::string::npos &&
              r.output.find("partitions=4") != std::string::npos &&
              r.output.find("amplitudes=24") != std::string::npos,
          "incremental update reports 4 partitions and 24 amplitudes");
    std::istringstream lines(r.output);
    std::string line;
    bool devs_ok = true;
    while (std::getline(lines, line)) {
      const std::size_t at = line.find("maxdev=");
      if (at == std::string::npos) {
        devs_ok = false;
        break;
      }
      devs_ok = devs_ok && std::stod(line.substr(at + 7)) <= 1e-10;
    }
    check(devs_ok, "every replay update verifies against the oracle");
  }

  {
    const RunResult r = run("replay " + data("mixed8.trace") + " --verify");
    check(r.exit_code == 0, "replay mixed8 exits 0");
    std::istringstream lines(r.output);
    std::string line;
    int updates = 0;
    bool devs_ok = true;
    while (std::getline(lines, line)) {
      const std::size_t at = line.find("maxdev=");
      if (at != std::string::npos) {
        ++updates;
        devs_ok = devs_ok && std::stod(line.substr(at + 7)) <= 1e-10;
      }
    }
    check(updates == 7 && devs_ok, "mixed8 trace verifies on all 7 updates");
  }

  {
    const RunResult a = run("replay " + data("mixed8.trace") + " --threads 1");
    const RunResult b = run("replay " + data("mixed8.trace") + " --threads 4");
    auto strip_times = [](const std::string& text) {
      std::istringstream lines(text);
      std::string line, out;
      while (std::getline(lines, line)) {
        const std::size_t at = line.find(" partitions=");
        out += (at == std::string::npos ? line : line.substr(at)) + "\n";
      }
      return out;
    };
    check(a.exit_code == 0 && b.exit_code == 0 &&
              strip_times(a.output) == strip_times(b.output),
          "thread count does not change replay reports");
  }

  {
    const RunResult a =
        run("simulate " + data("mixed8.qasm") + " --threads 1");
    const RunResult b =
        run("simulate " + data("mixed8.qasm") + " --threads 4");
    check(a.exit_code == 0 && b.exit_code == 0 && a.output == b.output,
          "thread count does not change simulate amplitude output");
  }

  {
    const RunResult a =
        run("bench " + data("mixed8.qasm") + " --mode mix --seed 1 --iters 12");
    const RunResult b =
        run("bench " + data("mixed8.qasm") + " --mode mix --seed 1 --iters 12");
    auto partition_column = [](const std::string& text) {
      std::istringstream lines(text);
      std::string line, out;
      while (std::getline(lines, line)) {
        const std::size_t comma = line.rfind(',');
        if (comma != std::string::npos) {
          out += line.substr(comma) + "\n";
        }
      }
      return out;
    };
    check(a.exit_code == 0 && b.exit_code == 0 &&
              partition_column(a.output) == partition_column(b.output) &&
              a.output.rfind("iteration,wall_time_ms,executed_partitions",
                             0) == 0,
          "bench mix is deterministic under a fixed seed");
  }

  {
    const RunResult r =
        run("bench " + data("mixed8.qasm") + " --mode insert-sweep --seed 7");
    std::istringstream lines(r.output);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.find("iteration") == std::string::npos) {
        ++rows;
      }
    }
    check(r.exit_code == 0 && rows > 0, "insert-sweep emits CSV rows");
  }

  {
    const RunResult r = run("bench " + data("mixed8.qasm") +
                            " --mode remove-sweep --seed 3");
    check(r.exit_code == 0 &&
              r.output.rfind("iteration,wall_time_ms,executed_partitions",
                             0) == 0,
          "remove-sweep runs to an empty circuit");
  }

  if (g_failures != 0) {
    std::cerr << g_failures << " cli test(s) failed\n";
    return 1;
  }
  std::cout << "all cli tests passed\n";
  return 0;
}
