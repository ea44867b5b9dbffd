#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rpo/circuit.hpp"

namespace rpo {

class CouplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected physical-qubit connectivity. Construction rejects self-loops,
/// out-of-range endpoints and disconnected graphs.
class CouplingMap {
 public:
  CouplingMap(int n_physical, std::vector<std::pair<int, int>> edges);

  /// `{ "n": 5, "edges": [[0,1],[1,2],...] }`
  static CouplingMap from_json(std::string_view text);
  static CouplingMap load(const std::string& path);
  /// "line5", "line15", "grid4x5", and generally "lineN" / "gridRxC".
  static CouplingMap builtin(std::string_view name);
  static CouplingMap line(int n);
  static CouplingMap grid(int rows, int cols);

  int num_physical() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int p) const { return adj_[static_cast<std::size_t>(p)]; }
  bool adjacent(int a, int b) const;
  int distance(int a, int b) const;

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> dist_;  // n x n
};

struct RouteResult {
  Circuit circuit;                 // width num_physical
  std::vector<int> initial_layout;  // logical -> physical
  std::vector<int> final_layout;    // logical -> physical after all SWAPs
};

/// Maps `c` onto `map`: starting from the identity layout (or a seeded
/// random one), inserts SWAPs along a shortest path before each two-qubit
/// gate on non-adjacent qubits, moving the first operand. `seed` breaks ties
/// between equal-length paths. Measurements are emitted at the end against
/// the final layout.
RouteResult route(const Circuit& c, const CouplingMap& map, std::uint64_t seed,
                  bool random_layout = false);

}  // namespace rpo
