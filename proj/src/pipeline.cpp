#include "rpo/pipeline.hpp"

#include <numeric>

#include "rpo/passes.hpp"
#include "rpo/synth.hpp"

namespace rpo {

namespace {

constexpr int kMaxCleanupRounds = 100;

}  // namespace

PipelineResult pipeline(const Circuit& c, const PipelineOptions& options) {
  Circuit cur = c;
  if (options.enable_qbo) cur = qbo(cur);
  cur = unroll(cur, options.basis);

  std::vector<int> layout(static_cast<std::size_t>(c.num_qubits()));
  std::iota(layout.begin(), layout.end(), 0);
  if (options.coupling) {
    RouteResult routed = route(cur, *options.coupling, options.seed, options.random_layout);
    cur = std::move(routed.circuit);
    layout = std::move(routed.final_layout);
  }

  if (options.enable_qbo) cur = qbo(cur);
  cur = unroll(cur, options.basis + GateSet{GateKind::Swap, GateKind::SwapZ});
  cur = merge_1q_runs(cur);
  if (options.enable_qpo) cur = qpo(cur, QpoOptions{options.enable_block_resynth});

  std::size_t previous = cur.size() + 1;
  for (int round = 0; round < kMaxCleanupRounds; ++round) {
    cur = unroll(cur, options.basis);
    cur = merge_1q_runs(cur);
    cur = cancel_adjacent_cx(cur);
    if (round >= 1 && cur.size() == previous) break;
    previous = cur.size();
  }
  return {std::move(cur), std::move(layout)};
}

}  // namespace rpo
