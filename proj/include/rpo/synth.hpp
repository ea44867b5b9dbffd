#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "rpo/circuit.hpp"
#include "rpo/unitary.hpp"

namespace rpo {

class UnrollError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UnrollOptions {
  /// Wires guaranteed to be |0> wherever an MCX is decomposed; they are
  /// returned to |0>. Used for the V-chain construction of MCX with three or
  /// more controls.
  std::vector<int> clean_ancillas;
  /// Fail instead of falling back to the ancilla-free recursion when too few
  /// clean ancillas are available.
  bool require_ancillas = false;
};

/// Rewrites every instruction outside `basis` into basis gates. Directives
/// (RESET, ANNOT, MEASURE, BARRIER) pass through; open controls are
/// X-conjugated. `basis` must contain U1, U2 or U3 and CX.
Circuit unroll(const Circuit& c, GateSet basis, const UnrollOptions& options = {});

/// Fuses each maximal run of single-qubit gates on a wire into one u-gate
/// (or nothing, if the product is the identity). Runs of one gate are left
/// as they are unless the gate is the identity.
Circuit merge_1q_runs(const Circuit& c);

/// Removes pairs of identical CX gates with nothing in between on either
/// wire, repeatedly.
Circuit cancel_adjacent_cx(const Circuit& c);

/// G with G u3(theta, phi, 0)|0> = |0> up to phase.
U3Params pure_to_zero_gate(double theta, double phi);

/// V with V|psi(theta1, phi1)> = |psi(theta2, phi2)> up to phase.
U3Params pure_to_pure_gate(double theta1, double phi1, double theta2, double phi2);

/// Single-qubit pure state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct BlochAngles {
  double theta = 0.0;
  double phi = 0.0;
};

/// Two-qubit circuit (qubits 0 and 1) with at most one CX and four u-gates
/// that maps |in0> (x) |in1> to `target` up to phase. Amplitude index is
/// b0 + 2*b1 with b0 the bit of qubit 0.
Circuit prepare_two_qubit_state(const std::array<Complex, 4>& target, BlochAngles in0,
                                BlochAngles in1);

/// Schmidt coefficients below this are treated as zero (product target).
inline constexpr double kSchmidtTol = 1e-7;

}  // namespace rpo
