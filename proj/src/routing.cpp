#include "rpo/routing.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace rpo {

CouplingMap::CouplingMap(int n_physical, std::vector<std::pair<int, int>> edges)
    : n_(n_physical), adj_(static_cast<std::size_t>(std::max(n_physical, 0))) {
  if (n_physical < 1) throw CouplingError("coupling map needs at least one qubit");
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) {
      throw CouplingError(fmt::format("edge ({}, {}) out of range for {} qubits", a, b, n_));
    }
    if (a == b) throw CouplingError(fmt::format("self-loop on qubit {}", a));
    if (adjacent(a, b)) continue;
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());

  const auto n = static_cast<std::size_t>(n_);
  dist_.assign(n * n, -1);
  for (int s = 0; s < n_; ++s) {
    int* row = &dist_[static_cast<std::size_t>(s) * n];
    row[s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : neighbors(u)) {
        if (row[v] < 0) {
          row[v] = row[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (int t = 0; t < n_; ++t) {
      if (row[t] < 0) throw CouplingError(fmt::format("coupling map is disconnected ({} cannot reach {})", s, t));
    }
  }
}

bool CouplingMap::adjacent(int a, int b) const {
  const auto& nb = adj_[static_cast<std::size_t>(a)];
  return std::find(nb.begin(), nb.end(), b) != nb.end();
}

int CouplingMap::distance(int a, int b) const {
  return dist_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b)];
}

CouplingMap CouplingMap::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CouplingError(fmt::format("coupling map JSON: {}", e.what()));
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw CouplingError("coupling map JSON needs \"n\" and \"edges\"");
  }
  try {
    const int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw CouplingError("each edge must be a pair");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return CouplingMap(n, std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw CouplingError(fmt::format("coupling map JSON: {}", e.what()));
  }
}

CouplingMap CouplingMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CouplingError(fmt::format("cannot open coupling map {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

CouplingMap CouplingMap::line(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return CouplingMap(n, std::move(edges));
}

CouplingMap CouplingMap::grid(int rows, int cols) {
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int i = r * cols + c;
      if (c + 1 < cols) edges.emplace_back(i, i + 1);
      if (r + 1 < rows) edges.emplace_back(i, i + cols);
    }
  }
  return CouplingMap(rows * cols, std::move(edges));
}

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
    throw CouplingError(fmt::format("bad size '{}' in coupling map name", s));
  }
  return v;
}

}  // namespace

CouplingMap CouplingMap::builtin(std::string_view name) {
  if (name.starts_with("line")) return line(parse_int(name.substr(4)));
  if (name.starts_with("grid")) {
    const auto rest = name.substr(4);
    const auto x = rest.find('x');
    if (x == std::string_view::npos) throw CouplingError(fmt::format("unknown coupling map '{}'", name));
    return grid(parse_int(rest.substr(0, x)), parse_int(rest.substr(x + 1)));
  }
  throw CouplingError(fmt::format("unknown coupling map '{}'", name));
}

RouteResult route(const Circuit& c, const CouplingMap& map, std::uint64_t seed, bool random_layout) {
  const int np = map.num_physical();
  if (c.num_qubits() > np) {
    throw CouplingError(fmt::format("circuit has {} qubits but the coupling map only {}",
                                    c.num_qubits(), np));
  }
  std::mt19937_64 rng(seed);
  // Virtual qubits >= c.num_qubits() are idle |0> wires.
  std::vector<int> l2p(static_cast<std::size_t>(np));
  std::iota(l2p.begin(), l2p.end(), 0);
  if (random_layout) std::shuffle(l2p.begin(), l2p.end(), rng);
  std::vector<int> p2l(static_cast<std::size_t>(np));
  for (int v = 0; v < np; ++v) p2l[static_cast<std::size_t>(l2p[static_cast<std::size_t>(v)])] = v;

  RouteResult result{Circuit(np, c.num_clbits()), {}, {}};
  result.initial_layout.assign(l2p.begin(), l2p.begin() + c.num_qubits());
  auto phys = [&](int v) { return l2p[static_cast<std::size_t>(v)]; };

  auto shortest_path = [&](int from, int to) {
    std::vector<int> parent(static_cast<std::size_t>(np), -1);
    parent[static_cast<std::size_t>(from)] = from;
    std::deque<int> queue{from};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      if (u == to) break;
      std::vector<int> nb = map.neighbors(u);
      std::shuffle(nb.begin(), nb.end(), rng);
      for (int v : nb) {
        if (parent[static_cast<std::size_t>(v)] < 0) {
          parent[static_cast<std::size_t>(v)] = u;
          queue.push_back(v);
        }
      }
    }
    std::vector<int> path{to};
    while (path.back() != from) path.push_back(parent[static_cast<std::size_t>(path.back())]);
    std::reverse(path.begin(), path.end());
    return path;
  };

  auto swap_physical = [&](int a, int b) {
    result.circuit.append(gates::swap(a, b));
    const int va = p2l[static_cast<std::size_t>(a)];
    const int vb = p2l[static_cast<std::size_t>(b)];
    std::swap(p2l[static_cast<std::size_t>(a)], p2l[static_cast<std::size_t>(b)]);
    l2p[static_cast<std::size_t>(va)] = b;
    l2p[static_cast<std::size_t>(vb)] = a;
  };

  std::vector<Instruction> measures;
  for (const auto& inst : c) {
    if (inst.kind == GateKind::Measure) {
      measures.push_back(inst);
      continue;
    }
    if (inst.qubits.size() == 2 && inst.kind != GateKind::Barrier) {
      const int pa = phys(inst.qubits[0]);
      const int pb = phys(inst.qubits[1]);
      if (!map.adjacent(pa, pb)) {
        const auto path = shortest_path(pa, pb);
        for (std::size_t k = 0; k + 2 < path.size(); ++k) swap_physical(path[k], path[k + 1]);
      }
    } else if (inst.qubits.size() > 2 && inst.kind != GateKind::Barrier) {
      throw CouplingError(fmt::format("routing expects gates on at most two qubits, got {}",
                                      gate_name(inst.kind)));
    }
    Instruction mapped = inst;
    for (int& q : mapped.qubits) q = phys(q);
    result.circuit.append(std::move(mapped));
  }
  for (auto& m : measures) {
    m.qubits[0] = phys(m.qubits[0]);
    result.circuit.append(std::move(m));
  }
  result.final_layout.assign(l2p.begin(), l2p.begin() + c.num_qubits());
  return result;
}

}  // namespace rpo
