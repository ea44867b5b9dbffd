#pragma once

#include "rpo/circuit.hpp"

namespace rpo {

/// Basis-state optimization: one in-order traversal that tracks basis states
/// and rewrites gates whose action on them is known. The output equals the
/// input up to global phase from |0...0> (given RESETs and trusted ANNOTs).
Circuit qbo(const Circuit& c);

struct QpoOptions {
  /// Replace two-qubit blocks with known pure inputs and a CX cost of at
  /// least two by a state-preparation circuit with at most one CX.
  bool block_resynth = false;
};

/// Pure-state optimization over an unrolled circuit
/// ({u1, u2, u3, id, cx} plus swap and swapz).
Circuit qpo(const Circuit& c, QpoOptions options = {});

/// CX count of `c` after unrolling to the default basis.
std::size_t unrolled_cx_count(const Circuit& c);

}  // namespace rpo
