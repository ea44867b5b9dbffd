#include "rpo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace rpo {

namespace {

constexpr double kPoleTol = 1e-10;
constexpr double kEigenTol = 1e-9;

using Table = std::array<BasisState, 6>;
using enum BasisState;

// Rows indexed by Zero, One, Plus, Minus, L, R.
constexpr Table kX = {One, Zero, Plus, Minus, R, L};
constexpr Table kY = {One, Zero, Minus, Plus, L, R};
constexpr Table kZ = {Zero, One, Minus, Plus, R, L};
constexpr Table kH = {Plus, Minus, Zero, One, R, L};
constexpr Table kS = {Zero, One, L, R, Minus, Plus};
constexpr Table kSdg = {Zero, One, R, L, Plus, Minus};

std::size_t idx(BasisState s) { return static_cast<std::size_t>(s); }

BasisState classify_amplitudes(const std::array<Complex, 2>& v) {
  const PureState p = PureState::from_amplitudes(v[0], v[1]);
  return classify_pure_as_basis(p.theta(), p.phi());
}

std::array<Complex, 2> apply_matrix(const Unitary2& u, const std::array<Complex, 2>& v) {
  return {u(0, 0) * v[0] + u(0, 1) * v[1], u(1, 0) * v[0] + u(1, 1) * v[1]};
}

bool near(double a, double b) { return std::fabs(a - b) < kEpsAngle; }

bool is_pole_zero(const PureState& s) { return s.is_known() && s.theta() < kEpsAngle; }
bool is_pole_one(const PureState& s) { return s.is_known() && s.theta() > kPi - kEpsAngle; }

// Phase e^{i g} with u|s> = e^{i g}|s>, when s is an eigenvector of u.
std::optional<double> eigenphase(const Unitary2& u, const std::array<Complex, 2>& v) {
  const auto w = apply_matrix(u, v);
  const Complex inner = std::conj(v[0]) * w[0] + std::conj(v[1]) * w[1];
  if (std::norm(inner) < 1.0 - kEigenTol) return std::nullopt;
  return std::arg(inner);
}

void swap_entries(auto& map, int a, int b) {
  std::swap(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)]);
}

void set_top(BasisMap& map, const Instruction& inst) {
  for (int q : inst.qubits) map[static_cast<std::size_t>(q)] = Top;
}

void set_top(PureMap& map, const Instruction& inst) {
  for (int q : inst.qubits) map[static_cast<std::size_t>(q)] = PureState::top();
}

RewriteOutcome removed() { return {RewriteOutcome::Kind::Removed, {}}; }
RewriteOutcome kept() { return {RewriteOutcome::Kind::Kept, {}}; }
RewriteOutcome single(std::vector<Instruction> gs) {
  return {RewriteOutcome::Kind::SingleQubitOnly, std::move(gs)};
}

}  // namespace

std::string_view to_string(BasisState s) {
  static constexpr std::array<std::string_view, 7> kNames = {"|0>", "|1>", "|+>", "|->",
                                                             "|L>", "|R>", "T"};
  return kNames[idx(s)];
}

std::array<Complex, 2> basis_amplitudes(BasisState s) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (s) {
    case Zero:
      return {1.0, 0.0};
    case One:
      return {0.0, 1.0};
    case Plus:
      return {h, h};
    case Minus:
      return {h, -h};
    case L:
      return {h, Complex(0.0, h)};
    case R:
      return {h, Complex(0.0, -h)};
    case Top:
      break;
  }
  throw std::invalid_argument("basis_amplitudes: TOP has no amplitudes");
}

PureState PureState::known(double theta, double phi) {
  return from_amplitudes(std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi));
}

PureState PureState::from_amplitudes(Complex a0, Complex a1) {
  PureState s;
  s.known_ = true;
  const double m0 = std::abs(a0);
  const double m1 = std::abs(a1);
  s.theta_ = 2.0 * std::atan2(m1, m0);
  if (s.theta_ < kPoleTol || s.theta_ > kPi - kPoleTol) {
    s.phi_ = 0.0;
  } else {
    s.phi_ = wrap_angle(std::arg(a1) - std::arg(a0));
  }
  return s;
}

PureState PureState::from_basis(BasisState s) {
  if (s == Top) return top();
  const auto v = basis_amplitudes(s);
  return from_amplitudes(v[0], v[1]);
}

std::array<Complex, 2> PureState::amplitudes() const {
  return {std::cos(theta_ / 2.0), std::polar(std::sin(theta_ / 2.0), phi_)};
}

bool operator==(const PureState& a, const PureState& b) {
  if (a.known_ != b.known_) return false;
  if (!a.known_) return true;
  if (!near(a.theta_, b.theta_)) return false;
  if (a.theta_ < kEpsAngle || a.theta_ > kPi - kEpsAngle) return true;
  return angles_equal(a.phi_, b.phi_);
}

BasisState classify_pure_as_basis(double theta, double phi) {
  const PureState p = PureState::known(theta, phi);
  const double t = p.theta();
  if (t < kEpsAngle) return Zero;
  if (t > kPi - kEpsAngle) return One;
  if (!near(t, kPi / 2)) return Top;
  const double f = p.phi();
  if (angles_equal(f, 0.0)) return Plus;
  if (angles_equal(f, kPi)) return Minus;
  if (angles_equal(f, kPi / 2)) return L;
  if (angles_equal(f, 3 * kPi / 2)) return R;
  return Top;
}

bool is_eigenstate(const Unitary2& u, BasisState s) {
  if (s == Top) return false;
  return eigenphase(u, basis_amplitudes(s)).has_value();
}

BasisState basis_transition(BasisState s, GateKind kind, std::span<const double> params) {
  switch (kind) {
    case GateKind::Reset:
      return Zero;
    case GateKind::Annot:
      return classify_pure_as_basis(params[0], params[1]);
    case GateKind::Measure:
      return Top;
    case GateKind::Barrier:
      return s;
    default:
      break;
  }
  if (s == Top || !is_single_qubit_unitary(kind)) return Top;
  switch (kind) {
    case GateKind::Id:
      return s;
    case GateKind::X:
      return kX[idx(s)];
    case GateKind::Y:
      return kY[idx(s)];
    case GateKind::Z:
      return kZ[idx(s)];
    case GateKind::H:
      return kH[idx(s)];
    case GateKind::S:
      return kS[idx(s)];
    case GateKind::Sdg:
      return kSdg[idx(s)];
    default:
      return classify_amplitudes(apply_matrix(gate_unitary(kind, params), basis_amplitudes(s)));
  }
}

PureState pure_transition(const PureState& s, const Unitary2& g) {
  if (s.is_top()) return s;
  const auto w = apply_matrix(g, s.amplitudes());
  return PureState::from_amplitudes(w[0], w[1]);
}

PureState pure_transition(const PureState& s, const U3Params& g) {
  if (s.is_top()) return s;
  const U3Params out = compose_u3(U3Params{s.theta(), s.phi(), 0.0, 0.0}, g);
  // u3(t, p, l)|0> does not depend on l.
  return PureState::known(out.theta.value(), out.phi.value());
}

RewriteOutcome pure_gate_effect(const PureMap& map, const Instruction& inst) {
  auto at = [&](int q) { return map[static_cast<std::size_t>(q)]; };
  const auto& q = inst.qubits;
  if (inst.open_controls != 0) return kept();
  switch (inst.kind) {
    case GateKind::CX:
      if (is_pole_zero(at(q[0]))) return removed();
      if (is_pole_one(at(q[0]))) return single({gates::x(q[1])});
      return kept();
    case GateKind::CZ:
      if (is_pole_zero(at(q[0])) || is_pole_zero(at(q[1]))) return removed();
      if (is_pole_one(at(q[0]))) return single({gates::z(q[1])});
      if (is_pole_one(at(q[1]))) return single({gates::z(q[0])});
      return kept();
    case GateKind::CU3:
      if (is_pole_zero(at(q[0]))) return removed();
      if (is_pole_one(at(q[0]))) {
        return single({gates::u3(inst.params[0], inst.params[1], inst.params[2], q[1])});
      }
      return kept();
    case GateKind::CSwap:
      if (is_pole_zero(at(q[0]))) return removed();
      return kept();
    default:
      return kept();
  }
}

RewriteOutcome basis_gate_effect(const BasisMap& map, const Instruction& inst) {
  auto at = [&](int q) { return map[static_cast<std::size_t>(q)]; };
  const auto& q = inst.qubits;
  switch (inst.kind) {
    case GateKind::CX:
    case GateKind::CCX:
    case GateKind::MCX: {
      const std::size_t k = q.size() - 1;
      std::vector<int> live;
      for (std::size_t i = 0; i < k; ++i) {
        const BasisState active = inst.is_open(i) ? Zero : One;
        const BasisState inactive = inst.is_open(i) ? One : Zero;
        if (at(q[i]) == inactive) return removed();
        if (at(q[i]) != active) live.push_back(q[i]);
      }
      const int t = q.back();
      if (live.empty()) return single({gates::x(t)});
      if (at(t) == Plus) return removed();
      if (at(t) == Minus && live.size() == 1) return single({gates::z(live[0])});
      return kept();
    }
    case GateKind::CZ:
      if (at(q[0]) == Zero || at(q[1]) == Zero) return removed();
      if (at(q[0]) == One) return single({gates::z(q[1])});
      if (at(q[1]) == One) return single({gates::z(q[0])});
      return kept();
    case GateKind::CU3: {
      if (at(q[0]) == Zero) return removed();
      const Instruction u = gates::u3(inst.params[0], inst.params[1], inst.params[2], q[1]);
      if (at(q[0]) == One) return single({u});
      if (at(q[1]) == Top) return kept();
      const auto phase = eigenphase(u3_matrix(inst.params[0], inst.params[1], inst.params[2]),
                                    basis_amplitudes(at(q[1])));
      if (!phase) return kept();
      if (angles_equal(*phase, 0.0)) return removed();
      return single({gates::u1(*phase, q[0])});
    }
    case GateKind::Swap:
      if (at(q[0]) != Top && at(q[0]) == at(q[1])) return removed();
      return kept();
    case GateKind::CSwap:
      if (at(q[0]) == Zero) return removed();
      if (at(q[1]) != Top && at(q[1]) == at(q[2])) return removed();
      return kept();
    default:
      return kept();
  }
}

void apply_multiqubit(BasisMap& map, const Instruction& inst, const RewriteOutcome& outcome) {
  auto& m = map;
  switch (outcome.kind) {
    case RewriteOutcome::Kind::Removed:
      return;
    case RewriteOutcome::Kind::SingleQubitOnly:
      for (const auto& g : outcome.gates) {
        auto& s = m[static_cast<std::size_t>(g.qubits[0])];
        s = basis_transition(s, g.kind, g.params);
      }
      return;
    case RewriteOutcome::Kind::Kept:
      break;
  }
  const auto& q = inst.qubits;
  switch (inst.kind) {
    case GateKind::Swap:
      swap_entries(m, q[0], q[1]);
      return;
    case GateKind::SwapZ: {
      const auto a = static_cast<std::size_t>(q[0]);
      const auto z = static_cast<std::size_t>(q[1]);
      if (m[z] == Zero) {
        std::swap(m[a], m[z]);
      } else if (m[z] == One) {
        m[z] = basis_transition(m[a], GateKind::X);
        m[a] = One;
      } else {
        set_top(m, inst);
      }
      return;
    }
    case GateKind::CSwap:
      if (m[static_cast<std::size_t>(q[0])] == One) {
        swap_entries(m, q[1], q[2]);
        return;
      }
      set_top(m, inst);
      return;
    case GateKind::Barrier:
      return;
    default:
      set_top(m, inst);
  }
}

void apply_multiqubit(PureMap& map, const Instruction& inst, const RewriteOutcome& outcome) {
  switch (outcome.kind) {
    case RewriteOutcome::Kind::Removed:
      return;
    case RewriteOutcome::Kind::SingleQubitOnly:
      for (const auto& g : outcome.gates) {
        auto& s = map[static_cast<std::size_t>(g.qubits[0])];
        s = pure_transition(s, gate_unitary(g.kind, g.params));
      }
      return;
    case RewriteOutcome::Kind::Kept:
      break;
  }
  const auto& q = inst.qubits;
  switch (inst.kind) {
    case GateKind::Swap:
      swap_entries(map, q[0], q[1]);
      return;
    case GateKind::SwapZ: {
      const auto a = static_cast<std::size_t>(q[0]);
      const auto z = static_cast<std::size_t>(q[1]);
      if (is_pole_zero(map[z])) {
        std::swap(map[a], map[z]);
      } else if (is_pole_one(map[z])) {
        map[z] = pure_transition(map[a], gate_unitary(GateKind::X));
        map[a] = PureState::known(kPi, 0.0);
      } else {
        set_top(map, inst);
      }
      return;
    }
    case GateKind::CSwap:
      if (is_pole_one(map[static_cast<std::size_t>(q[0])])) {
        swap_entries(map, q[1], q[2]);
        return;
      }
      set_top(map, inst);
      return;
    case GateKind::Barrier:
      return;
    default:
      set_top(map, inst);
  }
}

void step_basis(BasisMap& map, const Instruction& inst) {
  if (inst.kind == GateKind::Barrier) return;
  if (inst.qubits.size() == 1 && (is_single_qubit_unitary(inst.kind) || is_directive(inst.kind))) {
    auto& s = map[static_cast<std::size_t>(inst.qubits[0])];
    s = basis_transition(s, inst.kind, inst.params);
    return;
  }
  apply_multiqubit(map, inst, basis_gate_effect(map, inst));
}

void step_pure(PureMap& map, const Instruction& inst) {
  if (inst.kind == GateKind::Barrier) return;
  if (inst.qubits.size() == 1) {
    auto& s = map[static_cast<std::size_t>(inst.qubits[0])];
    switch (inst.kind) {
      case GateKind::Reset:
        s = PureState::known(0.0, 0.0);
        return;
      case GateKind::Annot:
        s = PureState::known(inst.params[0], inst.params[1]);
        return;
      case GateKind::Measure:
        s = PureState::top();
        return;
      default:
        s = pure_transition(s, gate_unitary(inst.kind, inst.params));
        return;
    }
  }
  apply_multiqubit(map, inst, pure_gate_effect(map, inst));
}

std::vector<BasisMap> track_basis_states(const Circuit& c) {
  std::vector<BasisMap> maps;
  maps.reserve(c.size() + 1);
  BasisMap m = initial_basis_map(c.num_qubits());
  maps.push_back(m);
  for (const auto& inst : c) {
    step_basis(m, inst);
    maps.push_back(m);
  }
  return maps;
}

std::vector<PureMap> track_pure_states(const Circuit& c) {
  std::vector<PureMap> maps;
  maps.reserve(c.size() + 1);
  PureMap m = initial_pure_map(c.num_qubits());
  maps.push_back(m);
  for (const auto& inst : c) {
    step_pure(m, inst);
    maps.push_back(m);
  }
  return maps;
}

}  // namespace rpo
