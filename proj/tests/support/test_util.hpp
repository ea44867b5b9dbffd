#pragma once

// Shared helpers for unit and acceptance tests: random circuit generation and
// input-state preparation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rpo/analysis.hpp"
#include "rpo/circuit.hpp"
#include "rpo/oracle.hpp"
#include "rpo/rewrite_tables.hpp"

namespace rpo::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

inline bool coin(Rng& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

/// Multiples of pi/4 most of the time (so basis states appear), otherwise a
/// generic angle.
inline double random_angle(Rng& rng) {
  if (coin(rng, 0.6)) return pick(rng, 8) * kPi / 4;
  return uniform(rng, 0.0, kTwoPi);
}

/// Gates preparing basis state `s` from |0> on qubit q.
inline std::vector<Instruction> prepare_basis(BasisState s, int q) {
  switch (s) {
    case BasisState::Zero:
      return {};
    case BasisState::One:
      return {gates::x(q)};
    case BasisState::Plus:
      return {gates::h(q)};
    case BasisState::Minus:
      return {gates::x(q), gates::h(q)};
    case BasisState::L:
      return {gates::h(q), gates::s(q)};
    case BasisState::R:
      return {gates::h(q), gates::sdg(q)};
    case BasisState::Top:
      break;
  }
  return {};
}

/// Random (generally entangled) state of qubit q and reference qubit ref.
inline void entangle_with_reference(Circuit& c, int q, int ref, Rng& rng) {
  c.append(gates::u3(uniform(rng, 0, kPi), uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi), q));
  c.append(gates::u3(uniform(rng, 0, kPi), uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi), ref));
  c.append(gates::cx(ref, q));
  c.append(gates::u3(uniform(rng, 0, kPi), uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi), q));
}

struct RandomCircuitOptions {
  int n_qubits = 4;
  int n_instructions = 30;
  bool allow_multi = true;        // CCX, MCX, CSWAP
  bool allow_open_controls = true;
  bool allow_swapz = true;
  bool allow_reset = true;        // only on never-entangled qubits
  bool allow_barrier = true;
  bool measure_all = false;       // terminal measurement of every qubit
  double two_qubit_bias = 0.35;
};

/// Random circuit over the tracked gate set. RESET is emitted only on qubits
/// that no multi-qubit gate has touched, so it is always legal.
inline Circuit random_circuit(Rng& rng, const RandomCircuitOptions& o) {
  const int n = o.n_qubits;
  Circuit c(n, o.measure_all ? n : 0);
  std::vector<bool> touched(static_cast<std::size_t>(n), false);
  auto distinct = [&](int k) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(k));
    return all;
  };
  auto open_mask = [&](int k) -> std::uint32_t {
    if (!o.allow_open_controls || !coin(rng, 0.25)) return 0;
    return static_cast<std::uint32_t>(pick(rng, 1 << k));
  };
  while (static_cast<int>(c.size()) < o.n_instructions) {
    if (n >= 2 && coin(rng, o.two_qubit_bias)) {
      int choice = pick(rng, o.allow_multi && n >= 3 ? 9 : 6);
      std::vector<int> qs;
      Instruction inst;
      switch (choice) {
        case 0:
        case 1:
          qs = distinct(2);
          inst = Instruction(GateKind::CX, qs, {}, {}, open_mask(1));
          break;
        case 2:
          qs = distinct(2);
          inst = gates::cz(qs[0], qs[1]);
          break;
        case 3:
          qs = distinct(2);
          inst = gates::swap(qs[0], qs[1]);
          break;
        case 4:
          qs = distinct(2);
          inst = o.allow_swapz ? gates::swapz(qs[0], qs[1]) : gates::swap(qs[0], qs[1]);
          break;
        case 5:
          qs = distinct(2);
          inst = gates::cu3(random_angle(rng), random_angle(rng), random_angle(rng), qs[0], qs[1]);
          break;
        case 6:
          qs = distinct(3);
          inst = Instruction(GateKind::CCX, qs, {}, {}, open_mask(2));
          break;
        case 7:
          qs = distinct(3);
          inst = gates::cswap(qs[0], qs[1], qs[2]);
          break;
        default: {
          const int k = std::min(n, 3 + pick(rng, 2));
          qs = distinct(k);
          inst = Instruction(GateKind::MCX, qs, {}, {}, open_mask(k - 1));
          break;
        }
      }
      for (int q : inst.qubits) touched[static_cast<std::size_t>(q)] = true;
      c.append(inst);
      continue;
    }
    const int q = pick(rng, n);
    const int choice = pick(rng, 14);
    switch (choice) {
      case 0:
        c.append(gates::x(q));
        break;
      case 1:
        c.append(gates::y(q));
        break;
      case 2:
        c.append(gates::z(q));
        break;
      case 3:
      case 4:
        c.append(gates::h(q));
        break;
      case 5:
        c.append(gates::s(q));
        break;
      case 6:
        c.append(gates::sdg(q));
        break;
      case 7:
        c.append(coin(rng, 0.5) ? gates::t(q) : gates::tdg(q));
        break;
      case 8:
        c.append(gates::u1(random_angle(rng), q));
        break;
      case 9:
        c.append(gates::u2(random_angle(rng), random_angle(rng), q));
        break;
      case 10:
        c.append(gates::u3(random_angle(rng), random_angle(rng), random_angle(rng), q));
        break;
      case 11:
        if (o.allow_reset && !touched[static_cast<std::size_t>(q)]) {
          c.append(gates::reset(q));
        } else {
          c.append(gates::id(q));
        }
        break;
      case 12:
        if (o.allow_barrier && n >= 2) {
          const auto qs = distinct(2);
          c.append(gates::barrier(qs));
        } else {
          c.append(gates::h(q));
        }
        break;
      default:
        c.append(gates::x(q));
        break;
    }
  }
  if (o.measure_all) {
    for (int q = 0; q < n; ++q) c.append(gates::measure(q, q));
  }
  return c;
}

/// Copy of `c` with ANNOT instructions inserted after random instructions on
/// qubits whose simulated reduced state is pure; each carries the true state.
inline Circuit add_true_annotations(const Circuit& c, Rng& rng, double rate = 0.2) {
  Circuit out = c.empty_copy();
  Statevector sv(c.num_qubits());
  std::vector<Instruction> measures;
  for (const auto& inst : c) {
    if (inst.kind == GateKind::Measure) {
      measures.push_back(inst);
      continue;
    }
    out.append(inst);
    Circuit step = c.empty_copy();
    step.append(inst);
    sv = simulate(step, sv).state;
    for (int q : inst.qubits) {
      if (!coin(rng, rate)) continue;
      const Density2 rho = reduced_qubit_state(sv, q);
      const double purity = std::norm(rho[0][0]) + std::norm(rho[1][1]) + 2 * std::norm(rho[0][1]);
      if (purity < 1.0 - 1e-12) continue;
      // Pure: rho = |psi><psi| with psi = (sqrt(rho00), rho10 / sqrt(rho00)) or |1>.
      const double p0 = rho[0][0].real();
      PureState s = p0 > 1e-12 ? PureState::from_amplitudes(std::sqrt(p0), rho[1][0] / std::sqrt(p0))
                               : PureState::known(kPi, 0.0);
      out.append(gates::annot(s.theta(), s.phi(), q));
    }
  }
  for (auto& m : measures) out.append(std::move(m));
  return out;
}


/// Smallest fidelity between `original` and template `t` on wires (0, 1)
/// over every input the cell assumes. A basis wire is prepared exactly; a
/// TOP wire runs through all six basis states and `trials` random states
/// entangled with a reference qubit.
inline double min_cell_fidelity(const Instruction& original, const Template& t, BasisState s0,
                                BasisState s1, Rng& rng, int trials = 8) {
  constexpr std::array<BasisState, 6> kSix = {BasisState::Zero, BasisState::One, BasisState::Plus,
                                              BasisState::Minus, BasisState::L, BasisState::R};
  // Input choices per wire: -1 = entangled with the reference, else a basis state index.
  auto choices = [&](BasisState s) {
    std::vector<int> v;
    if (s != BasisState::Top) {
      v.push_back(static_cast<int>(s));
      return v;
    }
    for (auto b : kSix) v.push_back(static_cast<int>(b));
    for (int i = 0; i < trials; ++i) v.push_back(-1);
    return v;
  };
  double worst = 1.0;
  for (int c0 : choices(s0)) {
    for (int c1 : choices(s1)) {
      Circuit prep(4);
      auto prepare = [&](int choice, int wire) {
        if (choice < 0) {
          entangle_with_reference(prep, wire, wire + 2, rng);
        } else {
          for (auto& g : prepare_basis(static_cast<BasisState>(choice), wire)) prep.append(g);
        }
      };
      prepare(c0, 0);
      prepare(c1, 1);
      Circuit a = prep;
      a.append(original);
      Circuit b = prep;
      for (auto& g : instantiate(t, 0, 1)) b.append(g);
      worst = std::min(worst, equivalent_up_to_global_phase(a, b).fidelity);
    }
  }
  return worst;
}

/// Largest trace distance between a non-TOP tracked state and the simulated
/// reduced state, over every program point before the first MEASURE. Returns
/// the number of checked (point, qubit) pairs through `checked`.
inline double max_tracking_error(const Circuit& c, std::size_t* checked = nullptr) {
  const auto basis = track_basis_states(c);
  const auto pure = track_pure_states(c);
  Statevector sv(c.num_qubits());
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i <= c.size(); ++i) {
    for (int q = 0; q < c.num_qubits(); ++q) {
      const auto qi = static_cast<std::size_t>(q);
      const Density2 rho = reduced_qubit_state(sv, q);
      if (basis[i][qi] != BasisState::Top) {
        const auto a = basis_amplitudes(basis[i][qi]);
        worst = std::max(worst, trace_distance_to_pure(rho, a[0], a[1]));
        ++count;
      }
      if (pure[i][qi].is_known()) {
        const auto a = pure[i][qi].amplitudes();
        worst = std::max(worst, trace_distance_to_pure(rho, a[0], a[1]));
        ++count;
      }
    }
    if (i == c.size() || c[i].kind == GateKind::Measure) break;
    Circuit step = c.empty_copy();
    step.append(c[i]);
    sv = simulate(step, sv).state;
  }
  if (checked) *checked = count;
  return worst;
}

}  // namespace rpo::testing
