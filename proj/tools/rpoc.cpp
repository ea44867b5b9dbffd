#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"
#include "rpo/bench.hpp"
#include "rpo/oracle.hpp"
#include "rpo/pipeline.hpp"
#include "rpo/qasm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;

constexpr std::string_view kLayoutTag = "// final_layout";

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

rpo::Circuit read_circuit(const std::string& path) {
  try {
    return rpo::parse_program(read_file(path));
  } catch (const rpo::ParseError& e) {
    throw InputError(fmt::format("{}:{}:{}: {}", path, e.line(), e.column(), e.what()));
  }
}

std::optional<std::vector<int>> read_layout(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.starts_with(kLayoutTag)) continue;
    std::istringstream fields(line.substr(kLayoutTag.size()));
    std::vector<int> layout;
    int p = 0;
    while (fields >> p) layout.push_back(p);
    return layout;
  }
  return std::nullopt;
}

rpo::CouplingMap resolve_coupling(const std::string& arg) {
  if (std::filesystem::exists(arg)) return rpo::CouplingMap::load(arg);
  return rpo::CouplingMap::builtin(arg);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write {}", path));
  out << text;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw InputError(fmt::format("bad qubit range '{}' (expected N or A..B)", s));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rpoc: state-aware peephole optimizer for quantum circuits"};
  app.require_subcommand(1);

  std::string in_path;
  std::string out_path;
  std::string coupling_arg;
  std::uint64_t seed = 0;
  bool no_qbo = false;
  bool no_qpo = false;
  bool blocks = false;
  bool random_layout = false;
  auto* optimize = app.add_subcommand("optimize", "Optimize a circuit");
  optimize->add_option("input", in_path, "Input circuit")->required();
  optimize->add_option("-o,--output", out_path, "Output file (default stdout)");
  optimize->add_option("--coupling", coupling_arg, "Coupling map JSON file or builtin name");
  optimize->add_option("--seed", seed, "Routing seed");
  optimize->add_flag("--no-qbo", no_qbo, "Disable basis-state optimization");
  optimize->add_flag("--no-qpo", no_qpo, "Disable pure-state optimization");
  optimize->add_flag("--blocks", blocks, "Enable two-qubit block re-synthesis");
  optimize->add_flag("--random-layout", random_layout, "Seeded random initial layout");

  std::string a_path;
  std::string b_path;
  double tol = rpo::kDefaultEquivTol;
  auto* verify = app.add_subcommand("verify", "Check two circuits for equivalence from |0...0>");
  verify->add_option("a", a_path, "Reference circuit")->required();
  verify->add_option("b", b_path, "Candidate circuit")->required();
  verify->add_option("--tol", tol, "Tolerance");

  std::string alg = "qpe";
  std::string range = "4";
  int reps = 25;
  std::string csv_path;
  bool no_verify = false;
  unsigned threads = 0;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "Compare baseline and RPO pipelines");
  bench->add_option("--alg", alg, "bv | qpe | grover | vqe_ry | qv_like");
  bench->add_option("--n", range, "Qubit count or range A..B");
  bench->add_option("--coupling", coupling_arg, "Coupling map JSON file or builtin name");
  bench->add_option("--reps", reps, "Repetitions (seeds) per size");
  bench->add_option("--seed", bench_seed, "First seed");
  bench->add_option("--csv", csv_path, "Write per-seed rows as CSV");
  bench->add_option("--threads", threads, "Worker threads (0 = all cores)");
  bench->add_flag("--no-verify", no_verify, "Skip oracle verification");

  std::string stats_path;
  auto* stats = app.add_subcommand("stats", "Print gate counts and depth");
  stats->add_option("input", stats_path, "Input circuit")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*optimize) {
      const rpo::Circuit c = read_circuit(in_path);
      rpo::PipelineOptions opts;
      if (!coupling_arg.empty()) opts.coupling = resolve_coupling(coupling_arg);
      opts.seed = seed;
      opts.enable_qbo = !no_qbo;
      opts.enable_qpo = !no_qpo;
      opts.enable_block_resynth = blocks;
      opts.random_layout = random_layout;
      const rpo::PipelineResult r = rpo::pipeline(c, opts);
      std::string text;
      if (opts.coupling) text = fmt::format("{} {}\n", kLayoutTag, fmt::join(r.final_layout, " "));
      text += rpo::emit_program(r.circuit);
      write_output(out_path, text);
      return kExitOk;
    }
    if (*verify) {
      const rpo::Circuit a = read_circuit(a_path);
      const std::string b_text = read_file(b_path);
      const rpo::Circuit b = read_circuit(b_path);
      const auto layout = read_layout(b_text);
      rpo::EquivalenceReport rep;
      if (layout) {
        rep = rpo::equivalent_with_layout(a, b, *layout, tol);
      } else {
        if (a.num_qubits() != b.num_qubits()) {
          throw InputError(fmt::format("width mismatch: {} vs {} qubits and no layout comment",
                                       a.num_qubits(), b.num_qubits()));
        }
        rep = rpo::equivalent_up_to_global_phase(a, b, tol);
      }
      fmt::print("{} (fidelity {:.12f}", rep.equivalent ? "equivalent" : "NOT equivalent",
                 rep.fidelity);
      for (const auto& d : rep.detail) fmt::print("; {}", d);
      fmt::print(")\n");
      return rep.equivalent ? kExitOk : kExitMismatch;
    }
    if (*bench) {
      const auto algorithm = rpo::parse_algorithm(alg);
      if (!algorithm) throw InputError(fmt::format("unknown algorithm '{}'", alg));
      const auto [lo, hi] = parse_range(range);
      if (lo < 1 || hi < lo) throw InputError(fmt::format("bad qubit range '{}'", range));
      std::vector<rpo::ReportRow> rows;
      for (int n = lo; n <= hi; ++n) {
        rpo::BenchSpec spec;
        spec.algorithm = *algorithm;
        spec.n = n;
        if (!coupling_arg.empty()) spec.coupling = resolve_coupling(coupling_arg);
        spec.repetitions = reps;
        spec.seed = bench_seed;
        spec.verify = !no_verify;
        spec.threads = threads;
        auto part = rpo::run_bench(spec);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      rpo::print_summary(rpo::summarize(rows), std::cout);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw InputError(fmt::format("cannot write {}", csv_path));
        rpo::write_csv(rows, out);
      }
      return kExitOk;
    }
    if (*stats) {
      const rpo::Circuit c = read_circuit(stats_path);
      fmt::print("qubits {}\nclbits {}\ninstructions {}\ncx {}\n1q {}\ndepth {}\n", c.num_qubits(),
                 c.num_clbits(), c.size(), rpo::count_cx(c), rpo::count_1q(c), rpo::depth(c));
      for (std::size_t k = 0; k < rpo::kNumGateKinds; ++k) {
        const auto kind = static_cast<rpo::GateKind>(k);
        const std::size_t n = rpo::count_gates(c, kind);
        if (n > 0) fmt::print("  {} {}\n", rpo::gate_name(kind), n);
      }
      return kExitOk;
    }
  } catch (const rpo::VerificationError& e) {
    fmt::print(std::cerr, "verification failed: {}\n", e.what());
    const std::string dump = "rpoc-failure.qasm";
    std::ofstream(dump) << e.circuit_text();
    fmt::print(std::cerr, "failing circuit written to {}\n", dump);
    return kExitMismatch;
  } catch (const InputError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInput;
  } catch (const rpo::CouplingError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInput;
  } catch (const rpo::CircuitError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInput;
  } catch (const rpo::SimulationError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}
