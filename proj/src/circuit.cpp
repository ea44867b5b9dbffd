#include "rpo/circuit.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>

namespace rpo {

namespace {

constexpr std::array<std::string_view, kNumGateKinds> kNames = {
    "id", "x",  "y",   "z",     "h",     "s",    "sdg",   "t",       "tdg",
    "u1", "u2", "u3",  "cx",    "cz",    "cu3",  "swap",  "swapz",   "ccx",
    "mcx", "cswap", "reset", "annot", "measure", "barrier",
};

}  // namespace

std::string_view gate_name(GateKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

std::size_t param_count(GateKind kind) {
  switch (kind) {
    case GateKind::U1:
      return 1;
    case GateKind::U2:
    case GateKind::Annot:
      return 2;
    case GateKind::U3:
    case GateKind::CU3:
      return 3;
    default:
      return 0;
  }
}

std::size_t control_count(GateKind kind, std::size_t n_qubits) {
  switch (kind) {
    case GateKind::CX:
    case GateKind::CU3:
    case GateKind::CSwap:
      return 1;
    case GateKind::CCX:
      return 2;
    case GateKind::MCX:
      return n_qubits == 0 ? 0 : n_qubits - 1;
    default:
      return 0;
  }
}

bool is_single_qubit_unitary(GateKind kind) {
  return static_cast<unsigned>(kind) <= static_cast<unsigned>(GateKind::U3);
}

bool is_directive(GateKind kind) {
  return kind == GateKind::Reset || kind == GateKind::Annot || kind == GateKind::Measure ||
         kind == GateKind::Barrier;
}

bool supports_open_controls(GateKind kind) {
  return kind == GateKind::CX || kind == GateKind::CCX || kind == GateKind::MCX;
}

GateSet default_basis() {
  return {GateKind::U1, GateKind::U2, GateKind::U3, GateKind::Id, GateKind::CX};
}

double param_period(GateKind kind, std::size_t index) {
  return (kind == GateKind::CU3 && index == 0) ? 2.0 * kTwoPi : kTwoPi;
}

Instruction::Instruction(GateKind k, std::vector<int> qs, std::vector<double> ps,
                         std::vector<int> cs, std::uint32_t open)
    : kind(k), qubits(std::move(qs)), params(std::move(ps)), clbits(std::move(cs)),
      open_controls(open) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i] = wrap_angle(params[i], param_period(kind, i));
  }
}

bool Instruction::acts_on(int q) const {
  return std::find(qubits.begin(), qubits.end(), q) != qubits.end();
}

int Instruction::zero_qubit() const {
  if (kind != GateKind::SwapZ) throw CircuitError("zero_qubit() requires a swapz instruction");
  return qubits[1];
}

bool operator==(const Instruction& a, const Instruction& b) {
  if (a.kind != b.kind || a.qubits != b.qubits || a.clbits != b.clbits ||
      a.open_controls != b.open_controls || a.params.size() != b.params.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (!angles_equal(a.params[i], b.params[i], param_period(a.kind, i))) return false;
  }
  return true;
}

namespace gates {
Instruction id(int q) { return {GateKind::Id, {q}}; }
Instruction x(int q) { return {GateKind::X, {q}}; }
Instruction y(int q) { return {GateKind::Y, {q}}; }
Instruction z(int q) { return {GateKind::Z, {q}}; }
Instruction h(int q) { return {GateKind::H, {q}}; }
Instruction s(int q) { return {GateKind::S, {q}}; }
Instruction sdg(int q) { return {GateKind::Sdg, {q}}; }
Instruction t(int q) { return {GateKind::T, {q}}; }
Instruction tdg(int q) { return {GateKind::Tdg, {q}}; }
Instruction u1(double lam, int q) { return {GateKind::U1, {q}, {lam}}; }
Instruction u2(double phi, double lam, int q) { return {GateKind::U2, {q}, {phi, lam}}; }
Instruction u3(double theta, double phi, double lam, int q) {
  return {GateKind::U3, {q}, {theta, phi, lam}};
}
Instruction cx(int control, int target) { return {GateKind::CX, {control, target}}; }
Instruction cz(int a, int b) { return {GateKind::CZ, {a, b}}; }
Instruction cu3(double theta, double phi, double lam, int control, int target) {
  return {GateKind::CU3, {control, target}, {theta, phi, lam}};
}
Instruction swap(int a, int b) { return {GateKind::Swap, {a, b}}; }
Instruction swapz(int a, int zero) { return {GateKind::SwapZ, {a, zero}}; }
Instruction ccx(int c0, int c1, int target) { return {GateKind::CCX, {c0, c1, target}}; }
Instruction mcx(std::vector<int> controls, int target, std::uint32_t open) {
  controls.push_back(target);
  return {GateKind::MCX, std::move(controls), {}, {}, open};
}
Instruction cswap(int control, int a, int b) { return {GateKind::CSwap, {control, a, b}}; }
Instruction reset(int q) { return {GateKind::Reset, {q}}; }
Instruction annot(double theta, double phi, int q) { return {GateKind::Annot, {q}, {theta, phi}}; }
Instruction measure(int q, int c) { return {GateKind::Measure, {q}, {}, {c}}; }
Instruction barrier(std::vector<int> qs) { return {GateKind::Barrier, std::move(qs)}; }
}  // namespace gates

void validate_instruction(const Instruction& inst, int n_qubits, int n_clbits) {
  const std::size_t nq = inst.qubits.size();
  const auto name = gate_name(inst.kind);
  std::size_t expected = 1;
  switch (inst.kind) {
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::CU3:
    case GateKind::Swap:
    case GateKind::SwapZ:
      expected = 2;
      break;
    case GateKind::CCX:
    case GateKind::CSwap:
      expected = 3;
      break;
    case GateKind::MCX:
    case GateKind::Barrier:
      expected = 0;  // variable
      break;
    default:
      break;
  }
  if (expected != 0 && nq != expected) {
    throw CircuitError(fmt::format("{} expects {} qubit operand(s), got {}", name, expected, nq));
  }
  if (inst.kind == GateKind::MCX && (nq < 2 || nq > 32)) {
    throw CircuitError(fmt::format("mcx expects between 2 and 32 qubit operands, got {}", nq));
  }
  if (inst.kind == GateKind::Barrier && nq == 0) throw CircuitError("barrier needs at least one qubit");
  if (inst.params.size() != param_count(inst.kind)) {
    throw CircuitError(fmt::format("{} expects {} parameter(s), got {}", name,
                                   param_count(inst.kind), inst.params.size()));
  }
  const std::size_t expected_clbits = inst.kind == GateKind::Measure ? 1 : 0;
  if (inst.clbits.size() != expected_clbits) {
    throw CircuitError(fmt::format("{} expects {} classical operand(s)", name, expected_clbits));
  }
  if (inst.open_controls != 0) {
    if (!supports_open_controls(inst.kind)) {
      throw CircuitError(fmt::format("{} does not take open controls", name));
    }
    if ((inst.open_controls >> inst.num_controls()) != 0) {
      throw CircuitError(fmt::format("{}: open-control mask exceeds control count", name));
    }
  }
  for (std::size_t i = 0; i < nq; ++i) {
    const int q = inst.qubits[i];
    if (q < 0 || q >= n_qubits) {
      throw CircuitError(fmt::format("{}: qubit index {} out of range (width {})", name, q, n_qubits));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (inst.qubits[j] == q) throw CircuitError(fmt::format("{}: duplicate qubit operand {}", name, q));
    }
  }
  for (int c : inst.clbits) {
    if (c < 0 || c >= n_clbits) {
      throw CircuitError(fmt::format("{}: clbit index {} out of range (width {})", name, c, n_clbits));
    }
  }
}

Circuit::Circuit(int n_qubits, int n_clbits) : n_qubits_(n_qubits), n_clbits_(n_clbits) {
  if (n_qubits < 0 || n_clbits < 0) throw CircuitError("negative register size");
}

Circuit& Circuit::append(Instruction inst) {
  validate_instruction(inst, n_qubits_, n_clbits_);
  instructions_.push_back(std::move(inst));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  for (const auto& inst : other) append(inst);
  return *this;
}

void Circuit::validate_terminal_measurements() const {
  std::vector<bool> measured(static_cast<std::size_t>(n_qubits_), false);
  for (std::size_t i = 0; i < instructions_.size(); ++i) {
    const auto& inst = instructions_[i];
    if (inst.kind == GateKind::Barrier) continue;
    for (int q : inst.qubits) {
      if (measured[static_cast<std::size_t>(q)]) {
        throw CircuitError(fmt::format(
            "instruction {} ({}) acts on qubit {} after it was measured; only terminal "
            "measurement is supported",
            i, gate_name(inst.kind), q));
      }
    }
    if (inst.kind == GateKind::Measure) measured[static_cast<std::size_t>(inst.qubits[0])] = true;
  }
}

bool operator==(const Circuit& a, const Circuit& b) {
  return a.n_qubits_ == b.n_qubits_ && a.n_clbits_ == b.n_clbits_ &&
         a.instructions_ == b.instructions_;
}

std::size_t count_gates(const Circuit& c, GateSet filter) {
  return static_cast<std::size_t>(std::count_if(
      c.begin(), c.end(), [&](const Instruction& i) { return filter.contains(i.kind); }));
}

std::size_t count_gates(const Circuit& c, GateKind kind) { return count_gates(c, GateSet{kind}); }

std::size_t count_1q(const Circuit& c) {
  return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](const Instruction& i) {
    return is_single_qubit_unitary(i.kind) && i.kind != GateKind::Id;
  }));
}

std::size_t depth(const Circuit& c) {
  std::vector<std::size_t> qubit_level(static_cast<std::size_t>(c.num_qubits()), 0);
  std::vector<std::size_t> clbit_level(static_cast<std::size_t>(c.num_clbits()), 0);
  std::size_t result = 0;
  for (const auto& inst : c) {
    std::size_t level = 0;
    for (int q : inst.qubits) level = std::max(level, qubit_level[static_cast<std::size_t>(q)]);
    for (int b : inst.clbits) level = std::max(level, clbit_level[static_cast<std::size_t>(b)]);
    if (inst.kind != GateKind::Barrier && inst.kind != GateKind::Annot) ++level;
    for (int q : inst.qubits) qubit_level[static_cast<std::size_t>(q)] = level;
    for (int b : inst.clbits) clbit_level[static_cast<std::size_t>(b)] = level;
    result = std::max(result, level);
  }
  return result;
}

}  // namespace rpo
