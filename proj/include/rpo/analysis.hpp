#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rpo/circuit.hpp"
#include "rpo/unitary.hpp"

namespace rpo {

/// Single-qubit basis states tracked by the basis-state automaton.
/// L = (|0> + i|1>)/sqrt2, R = (|0> - i|1>)/sqrt2.
enum class BasisState : std::uint8_t { Zero, One, Plus, Minus, L, R, Top };

std::string_view to_string(BasisState s);

/// Amplitudes (a0, a1) of a non-Top basis state.
std::array<Complex, 2> basis_amplitudes(BasisState s);

/// KNOWN(theta, phi) or TOP. theta is in [0, pi]; at the poles phi is 0.
class PureState {
 public:
  static PureState top() { return PureState(); }
  static PureState known(double theta, double phi);
  static PureState from_amplitudes(Complex a0, Complex a1);
  static PureState from_basis(BasisState s);

  bool is_known() const { return known_; }
  bool is_top() const { return !known_; }
  double theta() const { return theta_; }
  double phi() const { return phi_; }
  std::array<Complex, 2> amplitudes() const;

  /// Same ray within kEpsAngle on the Bloch sphere angles.
  friend bool operator==(const PureState& a, const PureState& b);

 private:
  bool known_ = false;
  double theta_ = 0.0;
  double phi_ = 0.0;
};

using BasisMap = std::vector<BasisState>;
using PureMap = std::vector<PureState>;

/// Ground-state initialization: every qubit ZERO / KNOWN(0, 0).
inline BasisMap initial_basis_map(int n) { return BasisMap(static_cast<std::size_t>(n), BasisState::Zero); }
inline PureMap initial_pure_map(int n) {
  return PureMap(static_cast<std::size_t>(n), PureState::known(0.0, 0.0));
}

/// Transition of the basis-state automaton for a single-qubit kind, RESET,
/// ANNOT or MEASURE. Parameterized gates are recognized through their matrix.
BasisState basis_transition(BasisState s, GateKind kind, std::span<const double> params = {});

/// State u3(t1, p1, 0)|0> proportional to g u3(t0, p0, 0)|0>.
PureState pure_transition(const PureState& s, const U3Params& g);
PureState pure_transition(const PureState& s, const Unitary2& g);

/// Basis state on the ray (theta, phi), or TOP.
BasisState classify_pure_as_basis(double theta, double phi);

/// True when `u` maps basis state `s` to itself up to phase.
bool is_eigenstate(const Unitary2& u, BasisState s);

/// What a rewrite did to a multi-qubit instruction.
struct RewriteOutcome {
  enum class Kind { Removed, SingleQubitOnly, Kept };
  Kind kind = Kind::Kept;
  /// For SingleQubitOnly: the replacement single-qubit gates, in order.
  std::vector<Instruction> gates;
};

/// State update for a multi-qubit instruction: removed gates leave states
/// unchanged; single-qubit replacements advance the affected wires; SWAP and
/// SWAPZ permute states; anything else sets every operand to TOP.
void apply_multiqubit(BasisMap& map, const Instruction& inst, const RewriteOutcome& outcome);
void apply_multiqubit(PureMap& map, const Instruction& inst, const RewriteOutcome& outcome);

/// Statically resolvable effect of a multi-qubit gate on the given basis
/// states (control |0> removes a CX, control |1> leaves X on the target...).
/// Used by both the tracker and the QBO pass.
RewriteOutcome basis_gate_effect(const BasisMap& map, const Instruction& inst);

/// The same for pure states; only controls at a pole are resolved.
RewriteOutcome pure_gate_effect(const PureMap& map, const Instruction& inst);

/// States before every instruction and after the last (size() + 1 maps).
std::vector<BasisMap> track_basis_states(const Circuit& c);
std::vector<PureMap> track_pure_states(const Circuit& c);

/// Advance a map across one instruction (no rewriting).
void step_basis(BasisMap& map, const Instruction& inst);
void step_pure(PureMap& map, const Instruction& inst);

}  // namespace rpo
