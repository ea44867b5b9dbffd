#pragma once

#include <array>
#include <vector>

#include "rpo/analysis.hpp"
#include "rpo/circuit.hpp"

namespace rpo {

/// One gate of a replacement template. Wires are 0 (the first operand of
/// the rewritten gate) and 1 (the second). For SWAPZ, w0 is the swapped
/// operand and w1 the zero-designated one.
struct TemplateGate {
  GateKind kind;
  int w0;
  int w1 = -1;
};

using Template = std::vector<TemplateGate>;

/// States that index the tables; L and R fall into the TOP column.
inline constexpr std::array<BasisState, 5> kTableStates = {
    BasisState::Top, BasisState::Zero, BasisState::One, BasisState::Plus, BasisState::Minus};

/// Replacement for CX(control, target) under the given input states.
const Template& cx_rewrite(BasisState control, BasisState target);

/// Replacement for SWAP(top, bottom) under the given input states. Output
/// states are the swapped inputs.
const Template& swap_rewrite(BasisState top, BasisState bottom);

/// The template on concrete qubits q0 (wire 0) and q1 (wire 1).
std::vector<Instruction> instantiate(const Template& t, int q0, int q1);

}  // namespace rpo
