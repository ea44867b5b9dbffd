#include "rpo/passes.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rpo/analysis.hpp"
#include "rpo/rewrite_tables.hpp"
#include "rpo/synth.hpp"
#include "rpo/unitary.hpp"

namespace rpo {

namespace {

using enum BasisState;

bool is_pauli_z_state(BasisState s) { return s == Zero || s == One; }
bool is_pauli_x_state(BasisState s) { return s == Plus || s == Minus; }

class Qbo {
 public:
  explicit Qbo(const Circuit& c) : out_(c.empty_copy()), st_(initial_basis_map(c.num_qubits())) {}

  Circuit take() { return std::move(out_); }

  void process(const Instruction& inst) {
    if (inst.open_controls != 0) {
      process_open(inst);
      return;
    }
    const auto& q = inst.qubits;
    switch (inst.kind) {
      case GateKind::Barrier:
        out_.append(inst);
        return;
      case GateKind::Reset:
      case GateKind::Annot:
      case GateKind::Measure:
        out_.append(inst);
        at(q[0]) = basis_transition(at(q[0]), inst.kind, inst.params);
        return;
      case GateKind::CX:
        for (const auto& g : instantiate(cx_rewrite(at(q[0]), at(q[1])), q[0], q[1])) {
          if (g.kind == GateKind::CX) {
            keep(g);
          } else {
            process(g);
          }
        }
        return;
      case GateKind::CZ:
        process_cz(q[0], q[1]);
        return;
      case GateKind::Swap:
        process_swap(q[0], q[1]);
        return;
      case GateKind::SwapZ:
        if (at(q[1]) == Zero) {
          out_.append(inst);
          std::swap(at(q[0]), at(q[1]));
        } else {
          process(gates::cx(q[0], q[1]));
          process(gates::cx(q[1], q[0]));
        }
        return;
      case GateKind::CCX:
      case GateKind::MCX:
        process_mcx({q.begin(), q.end() - 1}, q.back());
        return;
      case GateKind::CSwap:
        process_cswap(q[0], q[1], q[2]);
        return;
      case GateKind::CU3: {
        const RewriteOutcome r = basis_gate_effect(st_, inst);
        if (r.kind == RewriteOutcome::Kind::Kept) {
          keep(inst);
        } else {
          for (const auto& g : r.gates) process(g);
        }
        return;
      }
      default:
        break;
    }
    if (is_single_qubit_unitary(inst.kind)) {
      process_1q(inst);
      return;
    }
    keep(inst);
  }

 private:
  BasisState& at(int q) { return st_[static_cast<std::size_t>(q)]; }

  void keep(const Instruction& inst) {
    out_.append(inst);
    for (int q : inst.qubits) at(q) = Top;
  }

  void process_1q(const Instruction& inst) {
    BasisState& s = at(inst.qubits[0]);
    if (s != Top && is_eigenstate(gate_unitary(inst.kind, inst.params), s)) return;
    out_.append(inst);
    s = basis_transition(s, inst.kind, inst.params);
  }

  void process_open(const Instruction& inst) {
    Instruction closed = inst;
    closed.open_controls = 0;
    const std::size_t k = inst.num_controls();
    for (std::size_t i = 0; i < k; ++i) {
      if (inst.is_open(i)) process(gates::x(inst.qubits[i]));
    }
    process(closed);
    for (std::size_t i = 0; i < k; ++i) {
      if (inst.is_open(i)) process(gates::x(inst.qubits[i]));
    }
  }

  void process_cz(int a, int b) {
    if (at(a) == Zero || at(b) == Zero) return;
    if (at(a) == One) {
      process(gates::z(b));
    } else if (at(b) == One) {
      process(gates::z(a));
    } else {
      keep(gates::cz(a, b));
    }
  }

  void process_swap(int a, int b) {
    const Template& t = swap_rewrite(at(a), at(b));
    if (t.size() == 1 && t[0].kind == GateKind::Swap) {
      out_.append(gates::swap(a, b));
    } else {
      for (auto& g : instantiate(t, a, b)) out_.append(std::move(g));
    }
    std::swap(at(a), at(b));
  }

  void process_mcx(const std::vector<int>& controls, int target) {
    std::vector<int> live;
    for (int c : controls) {
      if (at(c) == Zero) return;
      if (at(c) != One) live.push_back(c);
    }
    if (live.empty()) {
      process(gates::x(target));
      return;
    }
    if (at(target) == Plus) return;
    if (at(target) == Minus) {
      // Phase kickback: a multi-controlled Z on the controls.
      if (live.size() == 1) {
        process(gates::z(live[0]));
      } else if (live.size() == 2) {
        process_cz(live[0], live[1]);
      } else {
        const int z = live.back();
        process(gates::h(z));
        process(gates::mcx({live.begin(), live.end() - 1}, z));
        process(gates::h(z));
      }
      return;
    }
    if (live.size() == 1) {
      process(gates::cx(live[0], target));
    } else if (live.size() == 2) {
      keep(gates::ccx(live[0], live[1], target));
    } else {
      keep(gates::mcx(live, target));
    }
  }

  void process_cswap(int c, int a, int b) {
    if (at(c) == Zero) return;
    if (at(c) == One) {
      process_swap(a, b);
      return;
    }
    if (at(a) != Top && at(a) == at(b)) return;
    // CSWAP = CX(b->a) CCX(c, a, b) CX(b->a), or the mirror image; pick the
    // orientation whose first CX the CX table can simplify.
    if (is_pauli_z_state(at(b)) || is_pauli_x_state(at(a))) {
      process(gates::cx(b, a));
      process(gates::ccx(c, a, b));
      process(gates::cx(b, a));
    } else if (is_pauli_z_state(at(a)) || is_pauli_x_state(at(b))) {
      process(gates::cx(a, b));
      process(gates::ccx(c, b, a));
      process(gates::cx(a, b));
    } else {
      keep(gates::cswap(c, a, b));
    }
  }

  Circuit out_;
  BasisMap st_;
};

// Two-qubit amplitude vector, index b0 + 2 * b1.
using Vec4 = std::array<Complex, 4>;

void apply_1q(Vec4& v, const Unitary2& u, int w) {
  const int stride = w == 0 ? 1 : 2;
  for (int i = 0; i < 4; ++i) {
    if ((i & stride) != 0) continue;
    const Complex a0 = v[static_cast<std::size_t>(i)];
    const Complex a1 = v[static_cast<std::size_t>(i | stride)];
    v[static_cast<std::size_t>(i)] = u(0, 0) * a0 + u(0, 1) * a1;
    v[static_cast<std::size_t>(i | stride)] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void apply_controlled(Vec4& v, const Unitary2& u, int control) {
  const int cbit = control == 0 ? 1 : 2;
  const int tbit = control == 0 ? 2 : 1;
  const std::size_t i0 = static_cast<std::size_t>(cbit);
  const std::size_t i1 = static_cast<std::size_t>(cbit | tbit);
  const Complex a0 = v[i0];
  const Complex a1 = v[i1];
  v[i0] = u(0, 0) * a0 + u(0, 1) * a1;
  v[i1] = u(1, 0) * a0 + u(1, 1) * a1;
}

int cx_cost(GateKind k) {
  switch (k) {
    case GateKind::CX:
    case GateKind::CZ:
      return 1;
    case GateKind::SwapZ:
    case GateKind::CU3:
      return 2;
    case GateKind::Swap:
      return 3;
    default:
      return -1;
  }
}

class Qpo {
 public:
  Qpo(const Circuit& c, QpoOptions options)
      : in_(c), options_(options), out_(c.empty_copy()), st_(initial_pure_map(c.num_qubits())),
        consumed_(c.size(), false) {}

  Circuit run() {
    for (std::size_t i = 0; i < in_.size(); ++i) {
      if (consumed_[i]) continue;
      const Instruction& inst = in_[i];
      if (options_.block_resynth && try_block(i)) continue;
      process(inst);
    }
    return std::move(out_);
  }

 private:
  PureState& at(int q) { return st_[static_cast<std::size_t>(q)]; }

  void emit_u(const U3Params& p, int q) {
    if (auto g = u_gate(p, q)) {
      at(q) = pure_transition(at(q), gate_unitary(g->kind, g->params));
      out_.append(std::move(*g));
    }
  }

  void keep(const Instruction& inst) {
    out_.append(inst);
    for (int q : inst.qubits) at(q) = PureState::top();
  }

  void process(const Instruction& inst) {
    const auto& q = inst.qubits;
    if (q.size() == 1 || inst.kind == GateKind::Barrier) {
      out_.append(inst);
      step_pure(st_, inst);
      return;
    }
    switch (inst.kind) {
      case GateKind::Swap:
        process_swap(q[0], q[1]);
        return;
      case GateKind::SwapZ:
        out_.append(inst);
        apply_multiqubit(st_, inst, RewriteOutcome{});
        return;
      case GateKind::CSwap:
        process_cswap(inst);
        return;
      default:
        break;
    }
    const RewriteOutcome r = pure_gate_effect(st_, inst);
    switch (r.kind) {
      case RewriteOutcome::Kind::Removed:
        return;
      case RewriteOutcome::Kind::SingleQubitOnly:
        for (const auto& g : r.gates) process(g);
        return;
      case RewriteOutcome::Kind::Kept:
        keep(inst);
        return;
    }
  }

  void process_swap(int a, int b) {
    const PureState sa = at(a);
    const PureState sb = at(b);
    if (sa.is_known() && sb.is_known()) {
      // V on a and V^-1 on b exchange the two states.
      emit_u(pure_to_pure_gate(sa.theta(), sa.phi(), sb.theta(), sb.phi()), a);
      emit_u(pure_to_pure_gate(sb.theta(), sb.phi(), sa.theta(), sa.phi()), b);
      at(a) = sb;
      at(b) = sa;
      return;
    }
    if (sa.is_known() || sb.is_known()) {
      const int k = sa.is_known() ? a : b;
      const int other = k == a ? b : a;
      const PureState s = at(k);
      emit_u(pure_to_zero_gate(s.theta(), s.phi()), k);
      out_.append(gates::swapz(other, k));
      at(k) = at(other);
      at(other) = PureState::known(0.0, 0.0);
      emit_u(U3Params{s.theta(), s.phi(), 0.0, 0.0}, other);
      at(other) = s;
      return;
    }
    out_.append(gates::swap(a, b));
    std::swap(at(a), at(b));
  }

  void process_cswap(const Instruction& inst) {
    const int c = inst.qubits[0];
    const int a = inst.qubits[1];
    const int b = inst.qubits[2];
    const RewriteOutcome r = pure_gate_effect(st_, inst);
    if (r.kind == RewriteOutcome::Kind::Removed) return;
    if (at(c).is_known() && at(c).theta() > kPi - kEpsAngle) {
      process_swap(a, b);
      return;
    }
    const PureState sa = at(a);
    const PureState sb = at(b);
    if (!sa.is_known() || !sb.is_known()) {
      keep(inst);
      return;
    }
    // Controlled V and V^-1 on the targets; the phases they pick up on the
    // active branch are undone on the control.
    const U3Params v = pure_to_pure_gate(sa.theta(), sa.phi(), sb.theta(), sb.phi());
    const U3Params w = pure_to_pure_gate(sb.theta(), sb.phi(), sa.theta(), sa.phi());
    const auto phase_of = [](const U3Params& p, const PureState& from, const PureState& to) {
      const Unitary2 m = u3_matrix(p.theta.value(), p.phi.value(), p.lam.value());
      const auto x = from.amplitudes();
      const auto y = to.amplitudes();
      const Complex r0 = m(0, 0) * x[0] + m(0, 1) * x[1];
      const Complex r1 = m(1, 0) * x[0] + m(1, 1) * x[1];
      return std::arg(std::conj(y[0]) * r0 + std::conj(y[1]) * r1);
    };
    const double alpha = phase_of(v, sa, sb) + phase_of(w, sb, sa);
    if (!v.is_identity()) {
      out_.append(gates::cu3(v.theta.value(), v.phi.value(), v.lam.value(), c, a));
    }
    if (!w.is_identity()) {
      out_.append(gates::cu3(w.theta.value(), w.phi.value(), w.lam.value(), c, b));
    }
    if (!angles_equal(alpha, 0.0)) out_.append(gates::u1(-alpha, c));
    for (int q : inst.qubits) at(q) = PureState::top();
  }

  bool try_block(std::size_t start) {
    const Instruction& first = in_[start];
    if (first.qubits.size() != 2 || first.open_controls != 0 || cx_cost(first.kind) < 0) {
      return false;
    }
    const int p = first.qubits[0];
    const int q = first.qubits[1];
    if (!at(p).is_known() || !at(q).is_known()) return false;

    std::vector<std::size_t> block;
    int cost = 0;
    for (std::size_t j = start; j < in_.size(); ++j) {
      if (consumed_[j]) continue;
      const Instruction& g = in_[j];
      const bool on_p = g.acts_on(p);
      const bool on_q = g.acts_on(q);
      if (!on_p && !on_q) continue;
      if (is_single_qubit_unitary(g.kind)) {
        block.push_back(j);
        continue;
      }
      if (g.qubits.size() == 2 && on_p && on_q && g.open_controls == 0 && cx_cost(g.kind) >= 0) {
        block.push_back(j);
        cost += cx_cost(g.kind);
        continue;
      }
      break;
    }
    if (cost < 2) return false;

    const auto wire = [&](int qubit) { return qubit == p ? 0 : 1; };
    Vec4 v{};
    {
      const auto a = at(p).amplitudes();
      const auto b = at(q).amplitudes();
      for (int i = 0; i < 4; ++i) {
        v[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i & 1)] * b[static_cast<std::size_t>(i >> 1)];
      }
    }
    const Unitary2 x = gate_unitary(GateKind::X);
    const Unitary2 z = gate_unitary(GateKind::Z);
    for (std::size_t j : block) {
      const Instruction& g = in_[j];
      if (is_single_qubit_unitary(g.kind)) {
        apply_1q(v, gate_unitary(g.kind, g.params), wire(g.qubits[0]));
        continue;
      }
      const int w0 = wire(g.qubits[0]);
      const int w1 = wire(g.qubits[1]);
      switch (g.kind) {
        case GateKind::CX:
          apply_controlled(v, x, w0);
          break;
        case GateKind::CZ:
          apply_controlled(v, z, w0);
          break;
        case GateKind::CU3:
          apply_controlled(v, u3_matrix(g.params[0], g.params[1], g.params[2]), w0);
          break;
        case GateKind::SwapZ:
          apply_controlled(v, x, w0);
          apply_controlled(v, x, w1);
          break;
        case GateKind::Swap:
          std::swap(v[1], v[2]);
          break;
        default:
          break;
      }
    }

    const Circuit repl = prepare_two_qubit_state(
        v, {at(p).theta(), at(p).phi()}, {at(q).theta(), at(q).phi()});
    for (const auto& g : repl) {
      Instruction mapped = g;
      for (int& r : mapped.qubits) r = r == 0 ? p : q;
      if (mapped.kind == GateKind::CX) {
        keep(mapped);
      } else {
        at(mapped.qubits[0]) = pure_transition(at(mapped.qubits[0]),
                                               gate_unitary(mapped.kind, mapped.params));
        out_.append(std::move(mapped));
      }
    }
    for (std::size_t j : block) consumed_[j] = true;
    return true;
  }

  const Circuit& in_;
  QpoOptions options_;
  Circuit out_;
  PureMap st_;
  std::vector<bool> consumed_;
};

}  // namespace

Circuit qbo(const Circuit& c) {
  Qbo pass(c);
  for (const auto& inst : c) pass.process(inst);
  return pass.take();
}

Circuit qpo(const Circuit& c, QpoOptions options) { return Qpo(c, options).run(); }

std::size_t unrolled_cx_count(const Circuit& c) { return count_cx(unroll(c, default_basis())); }

}  // namespace rpo
