#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpo/circuit.hpp"

namespace rpo {

/// Dense simulation limit.
inline constexpr int kMaxSimQubits = 16;
/// Default fidelity tolerance of the equivalence checker.
inline constexpr double kDefaultEquivTol = 1e-9;

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ANNOT assertion failure: the qubit's reduced state does not match.
class AnnotationError : public SimulationError {
 public:
  AnnotationError(int qubit, std::size_t position, double trace_distance);
  int qubit() const { return qubit_; }
  std::size_t position() const { return position_; }
  double trace_distance() const { return trace_distance_; }

 private:
  int qubit_;
  std::size_t position_;
  double trace_distance_;
};

using Amplitude = std::complex<double>;
using Density2 = std::array<std::array<Amplitude, 2>, 2>;

/// 2^n amplitudes; qubit q is bit q of the basis index (little endian).
class Statevector {
 public:
  explicit Statevector(int n_qubits);  // |0...0>
  Statevector(int n_qubits, std::vector<Amplitude> amplitudes);

  int num_qubits() const { return n_qubits_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  std::span<Amplitude> amplitudes() { return amps_; }
  Amplitude operator[](std::size_t i) const { return amps_[i]; }
  double norm() const;

  /// Applies a 2x2 matrix to `target` on the subspace where every control
  /// qubit equals its required value (bit set in `control_values`).
  void apply_1q(const std::array<Amplitude, 4>& m, int target, std::uint64_t control_mask = 0,
                std::uint64_t control_values = 0);
  void apply_swap(int a, int b, std::uint64_t control_mask = 0, std::uint64_t control_values = 0);

 private:
  int n_qubits_;
  std::vector<Amplitude> amps_;
};

/// Result of running a circuit from |0...0>.
struct Simulation {
  Statevector state;
  /// Outcome distribution over clbit strings (bit j = clbit j) when the
  /// circuit measures; empty otherwise.
  std::vector<double> distribution;
  bool measured = false;
};

/// Runs `c` from |0...0>. ANNOT instructions are checked as assertions
/// (trace distance 1e-8); RESET requires the qubit to be unentangled;
/// MEASURE must be terminal.
Simulation simulate(const Circuit& c);

/// The same, from an arbitrary initial state of matching width.
Simulation simulate(const Circuit& c, Statevector initial);

/// 2x2 matrix the simulator uses for a single-qubit unitary kind.
std::array<Amplitude, 4> sim_gate_matrix(GateKind kind, std::span<const double> params);

/// Partial trace onto qubit `q`.
Density2 reduced_qubit_state(const Statevector& sv, int q);

/// Trace distance between rho and the pure projector |psi><psi|.
double trace_distance_to_pure(const Density2& rho, Amplitude a0, Amplitude a1);

/// |<a|b>|^2.
double fidelity(const Statevector& a, const Statevector& b);

struct EquivalenceReport {
  bool equivalent = false;
  double fidelity = 0.0;  // 1 - total variation distance for distributions
  double phase = 0.0;     // arg <a|b> for statevectors
  std::vector<std::string> detail;
};

/// Compares simulate(a) and simulate(b): statevector fidelity up to global
/// phase, or total-variation distance between exact outcome distributions
/// when both circuits measure.
EquivalenceReport equivalent_up_to_global_phase(const Circuit& a, const Circuit& b,
                                                double tol = kDefaultEquivTol);

/// As above, where `b` is a routed version of `a`: logical qubit q of `a`
/// ends on physical qubit final_layout[q] of `b`, and every physical qubit
/// not in the layout image ends in |0>.
EquivalenceReport equivalent_with_layout(const Circuit& a, const Circuit& b,
                                         std::span<const int> final_layout,
                                         double tol = kDefaultEquivTol);

}  // namespace rpo
