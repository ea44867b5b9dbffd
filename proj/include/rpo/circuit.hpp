#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rpo/angle.hpp"

namespace rpo {

enum class GateKind : std::uint8_t {
  Id,
  X,
  Y,
  Z,
  H,
  S,
  Sdg,
  T,
  Tdg,
  U1,
  U2,
  U3,
  CX,
  CZ,
  CU3,
  Swap,
  SwapZ,
  CCX,
  MCX,
  CSwap,
  Reset,
  Annot,
  Measure,
  Barrier,
};

inline constexpr std::size_t kNumGateKinds = static_cast<std::size_t>(GateKind::Barrier) + 1;

std::string_view gate_name(GateKind kind);

/// Number of angle parameters carried by `kind`.
std::size_t param_count(GateKind kind);

/// Number of control operands (leading qubits) for controlled kinds.
/// MCX is variable; pass its total operand count.
std::size_t control_count(GateKind kind, std::size_t n_qubits);

/// Single-qubit unitary gates (the u-family and the named Clifford+T gates).
bool is_single_qubit_unitary(GateKind kind);

/// RESET, ANNOT, MEASURE, BARRIER: operations outside the unitary gate set.
bool is_directive(GateKind kind);

/// Kinds whose control operands may carry open (|0>-triggered) polarity.
bool supports_open_controls(GateKind kind);

/// Compact set of gate kinds.
class GateSet {
 public:
  constexpr GateSet() = default;
  GateSet(std::initializer_list<GateKind> kinds) {
    for (GateKind k : kinds) insert(k);
  }

  void insert(GateKind k) { bits_ |= bit(k); }
  bool contains(GateKind k) const { return (bits_ & bit(k)) != 0; }
  GateSet operator+(GateSet other) const {
    GateSet r;
    r.bits_ = bits_ | other.bits_;
    return r;
  }
  friend bool operator==(GateSet, GateSet) = default;

 private:
  static constexpr std::uint32_t bit(GateKind k) { return 1u << static_cast<unsigned>(k); }
  std::uint32_t bits_ = 0;
};

/// {u1, u2, u3, id, cx}: the hardware basis the pipeline unrolls to.
GateSet default_basis();

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One operation of a circuit.
///
/// Operand conventions:
///  - controlled kinds list controls first, then targets (CSWAP: control, a, b);
///  - bit i of `open_controls` marks control i as open;
///  - SWAPZ lists the swapped operand first and the zero-designated qubit second;
///  - MEASURE has one qubit and one clbit.
///
/// Parameters are stored canonicalized: every angle into [0, 2pi), except the
/// polar angle of CU3, which is 4pi-periodic and is reduced into [0, 4pi).
struct Instruction {
  GateKind kind = GateKind::Id;
  std::vector<int> qubits;
  std::vector<double> params;
  std::vector<int> clbits;
  std::uint32_t open_controls = 0;

  Instruction() = default;
  Instruction(GateKind k, std::vector<int> qs, std::vector<double> ps = {},
              std::vector<int> cs = {}, std::uint32_t open = 0);

  std::size_t num_controls() const { return control_count(kind, qubits.size()); }
  bool is_open(std::size_t control) const { return ((open_controls >> control) & 1u) != 0; }
  bool acts_on(int q) const;
  int zero_qubit() const;  // SWAPZ only

  friend bool operator==(const Instruction& a, const Instruction& b);
};

/// Period used to canonicalize parameter `index` of `kind`.
double param_period(GateKind kind, std::size_t index);

// Convenience constructors.
namespace gates {
Instruction id(int q);
Instruction x(int q);
Instruction y(int q);
Instruction z(int q);
Instruction h(int q);
Instruction s(int q);
Instruction sdg(int q);
Instruction t(int q);
Instruction tdg(int q);
Instruction u1(double lam, int q);
Instruction u2(double phi, double lam, int q);
Instruction u3(double theta, double phi, double lam, int q);
Instruction cx(int control, int target);
Instruction cz(int a, int b);
Instruction cu3(double theta, double phi, double lam, int control, int target);
Instruction swap(int a, int b);
Instruction swapz(int a, int zero);
Instruction ccx(int c0, int c1, int target);
Instruction mcx(std::vector<int> controls, int target, std::uint32_t open = 0);
Instruction cswap(int control, int a, int b);
Instruction reset(int q);
Instruction annot(double theta, double phi, int q);
Instruction measure(int q, int c);
Instruction barrier(std::vector<int> qs);
}  // namespace gates

/// An ordered instruction list over indexed qubits and classical bits.
/// Program order is dataflow order.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits, int n_clbits = 0);

  int num_qubits() const { return n_qubits_; }
  int num_clbits() const { return n_clbits_; }
  const std::vector<Instruction>& instructions() const { return instructions_; }
  std::size_t size() const { return instructions_.size(); }
  bool empty() const { return instructions_.empty(); }
  auto begin() const { return instructions_.begin(); }
  auto end() const { return instructions_.end(); }
  const Instruction& operator[](std::size_t i) const { return instructions_[i]; }

  /// Appends after validating operand arity, index ranges, and duplicates.
  Circuit& append(Instruction inst);
  Circuit& append(const Circuit& other);

  /// Rejects gates acting on a qubit after it has been measured.
  void validate_terminal_measurements() const;

  /// Same width, no instructions.
  Circuit empty_copy() const { return Circuit(n_qubits_, n_clbits_); }

  friend bool operator==(const Circuit& a, const Circuit& b);

 private:
  int n_qubits_ = 0;
  int n_clbits_ = 0;
  std::vector<Instruction> instructions_;
};

/// Checks arity, ranges and duplicate operands against a width.
void validate_instruction(const Instruction& inst, int n_qubits, int n_clbits);

std::size_t count_gates(const Circuit& c, GateSet filter);
std::size_t count_gates(const Circuit& c, GateKind kind);
inline std::size_t count_cx(const Circuit& c) { return count_gates(c, GateKind::CX); }
/// Single-qubit unitary gates, excluding `id`.
std::size_t count_1q(const Circuit& c);

/// Longest chain of instructions that share a qubit or clbit. BARRIER and
/// ANNOT synchronize their qubits but do not add a layer.
std::size_t depth(const Circuit& c);

}  // namespace rpo
