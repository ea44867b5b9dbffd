#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rpo/circuit.hpp"
#include "rpo/routing.hpp"

namespace rpo {

struct PipelineOptions {
  std::optional<CouplingMap> coupling;
  std::uint64_t seed = 0;
  bool enable_qbo = true;
  bool enable_qpo = true;
  bool enable_block_resynth = false;
  bool random_layout = false;
  GateSet basis = default_basis();
};

struct PipelineResult {
  Circuit circuit;
  /// Logical qubit -> output wire. Identity when no coupling map is given.
  std::vector<int> final_layout;
};

/// QBO; unroll; route; QBO; unroll (keeping swap/swapz); merge 1q runs; QPO;
/// then {unroll, merge, cancel CX} until the instruction count is stable
/// (at least two rounds). QBO/QPO stages are skipped when disabled.
PipelineResult pipeline(const Circuit& c, const PipelineOptions& options);

/// Options with both RPO passes off.
inline PipelineOptions baseline_options(PipelineOptions o) {
  o.enable_qbo = false;
  o.enable_qpo = false;
  o.enable_block_resynth = false;
  return o;
}

}  // namespace rpo
