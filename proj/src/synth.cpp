#include "rpo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>

namespace rpo {

namespace {

class Unroller {
 public:
  Unroller(GateSet basis, const UnrollOptions& options, Circuit& out)
      : basis_(basis), options_(options), out_(out) {}

  void emit(const Instruction& inst) {
    if (inst.open_controls != 0) {
      emit_open(inst);
      return;
    }
    if (is_directive(inst.kind)) {
      out_.append(inst);
      return;
    }
    if (is_single_qubit_unitary(inst.kind)) {
      emit_1q(inst);
      return;
    }
    if (basis_.contains(inst.kind)) {
      out_.append(inst);
      return;
    }
    const auto& q = inst.qubits;
    switch (inst.kind) {
      case GateKind::CX:
        throw UnrollError("basis must contain cx");
      case GateKind::CZ:
        emit(gates::h(q[1]));
        emit(gates::cx(q[0], q[1]));
        emit(gates::h(q[1]));
        return;
      case GateKind::Swap:
        emit(gates::cx(q[0], q[1]));
        emit(gates::cx(q[1], q[0]));
        emit(gates::cx(q[0], q[1]));
        return;
      case GateKind::SwapZ:
        emit(gates::cx(q[0], q[1]));
        emit(gates::cx(q[1], q[0]));
        return;
      case GateKind::CU3:
        emit_cu3(inst.params[0], inst.params[1], inst.params[2], q[0], q[1]);
        return;
      case GateKind::CCX:
        emit_ccx(q[0], q[1], q[2]);
        return;
      case GateKind::MCX:
        emit_mcx({q.begin(), q.end() - 1}, q.back());
        return;
      case GateKind::CSwap:
        emit(gates::cx(q[2], q[1]));
        emit(gates::ccx(q[0], q[1], q[2]));
        emit(gates::cx(q[2], q[1]));
        return;
      default:
        throw UnrollError(fmt::format("cannot decompose {}", gate_name(inst.kind)));
    }
  }

 private:
  void emit_open(const Instruction& inst) {
    Instruction closed = inst;
    closed.open_controls = 0;
    const std::size_t k = inst.num_controls();
    for (std::size_t i = 0; i < k; ++i) {
      if (inst.is_open(i)) emit(gates::x(inst.qubits[i]));
    }
    emit(closed);
    for (std::size_t i = 0; i < k; ++i) {
      if (inst.is_open(i)) emit(gates::x(inst.qubits[i]));
    }
  }

  void emit_1q(const Instruction& inst) {
    if (basis_.contains(inst.kind)) {
      out_.append(inst);
      return;
    }
    const U3Params p = zyz_decompose(gate_unitary(inst.kind, inst.params));
    emit_u(p, inst.qubits[0]);
  }

  void emit_u(const U3Params& p, int q) {
    if (p.is_identity()) return;
    if (p.theta == Angle(0.0) && basis_.contains(GateKind::U1)) {
      out_.append(gates::u1(p.phi.value() + p.lam.value(), q));
    } else if (p.theta == Angle(kPi / 2) && basis_.contains(GateKind::U2)) {
      out_.append(gates::u2(p.phi.value(), p.lam.value(), q));
    } else if (basis_.contains(GateKind::U3)) {
      out_.append(gates::u3(p.theta.value(), p.phi.value(), p.lam.value(), q));
    } else {
      throw UnrollError("basis cannot express a general single-qubit gate");
    }
  }

  void emit_cu3(double theta, double phi, double lam, int c, int t) {
    emit(gates::u1((lam + phi) / 2, c));
    emit(gates::u1((lam - phi) / 2, t));
    emit(gates::cx(c, t));
    emit(gates::u3(-theta / 2, 0.0, -(phi + lam) / 2, t));
    emit(gates::cx(c, t));
    emit(gates::u3(theta / 2, phi, 0.0, t));
  }

  // Controlled-U including U's global phase.
  void emit_controlled(int c, int t, const Unitary2& u) {
    const U3Params p = zyz_decompose(u);
    if (!angles_equal(p.global_phase, 0.0)) {
      emit(gates::u1(p.global_phase, c));
    }
    if (p.is_identity()) return;
    emit(gates::cu3(p.theta.value(), p.phi.value(), p.lam.value(), c, t));
  }

  void emit_ccx(int a, int b, int c) {
    emit(gates::h(c));
    emit(gates::cx(b, c));
    emit(gates::tdg(c));
    emit(gates::cx(a, c));
    emit(gates::t(c));
    emit(gates::cx(b, c));
    emit(gates::tdg(c));
    emit(gates::cx(a, c));
    emit(gates::t(b));
    emit(gates::t(c));
    emit(gates::h(c));
    emit(gates::cx(a, b));
    emit(gates::t(a));
    emit(gates::tdg(b));
    emit(gates::cx(a, b));
  }

  void emit_mcx(const std::vector<int>& controls, int target) {
    if (controls.size() == 1) {
      emit(gates::cx(controls[0], target));
      return;
    }
    if (controls.size() == 2) {
      emit_ccx(controls[0], controls[1], target);
      return;
    }
    std::vector<int> ancillas;
    for (int a : options_.clean_ancillas) {
      if (a != target && std::find(controls.begin(), controls.end(), a) == controls.end()) {
        ancillas.push_back(a);
      }
    }
    const std::size_t needed = controls.size() - 2;
    if (ancillas.size() >= needed) {
      emit_vchain(controls, target, ancillas);
      return;
    }
    if (options_.require_ancillas) {
      throw UnrollError(fmt::format("mcx with {} controls needs {} clean ancillas, {} available",
                                    controls.size(), needed, ancillas.size()));
    }
    emit_mcu(controls, target, gate_unitary(GateKind::X));
  }

  void emit_vchain(const std::vector<int>& cs, int target, const std::vector<int>& anc) {
    const std::size_t k = cs.size();
    std::vector<Instruction> compute;
    compute.push_back(gates::ccx(cs[0], cs[1], anc[0]));
    for (std::size_t i = 2; i + 1 < k; ++i) {
      compute.push_back(gates::ccx(cs[i], anc[i - 2], anc[i - 1]));
    }
    for (const auto& g : compute) emit(g);
    emit(gates::ccx(cs[k - 1], anc[k - 3], target));
    for (auto it = compute.rbegin(); it != compute.rend(); ++it) emit(*it);
  }

  // C^k(U) = C(V)[c_k]; C^{k-1}X[c_k]; C(V^dag)[c_k]; C^{k-1}X[c_k]; C^{k-1}(V).
  void emit_mcu(const std::vector<int>& controls, int target, const Unitary2& u) {
    if (controls.size() == 1) {
      emit_controlled(controls[0], target, u);
      return;
    }
    const Unitary2 v = u.sqrt();
    const int last = controls.back();
    const std::vector<int> rest(controls.begin(), controls.end() - 1);
    emit_controlled(last, target, v);
    emit_mcx(rest, last);
    emit_controlled(last, target, v.adjoint());
    emit_mcx(rest, last);
    emit_mcu(rest, target, v);
  }

  GateSet basis_;
  const UnrollOptions& options_;
  Circuit& out_;
};

bool is_identity_gate(const Instruction& inst) {
  return zyz_decompose(gate_unitary(inst.kind, inst.params)).is_identity();
}

}  // namespace

Circuit unroll(const Circuit& c, GateSet basis, const UnrollOptions& options) {
  if (!basis.contains(GateKind::CX) ||
      !(basis.contains(GateKind::U1) || basis.contains(GateKind::U2) ||
        basis.contains(GateKind::U3))) {
    throw UnrollError("basis must contain cx and a u-gate");
  }
  Circuit out = c.empty_copy();
  Unroller u(basis, options, out);
  for (const auto& inst : c) u.emit(inst);
  return out;
}

Circuit merge_1q_runs(const Circuit& c) {
  struct Run {
    std::size_t slot = 0;
    std::size_t length = 0;
    Unitary2 product;
  };
  std::vector<std::optional<Instruction>> slots;
  std::vector<std::optional<Run>> runs(static_cast<std::size_t>(c.num_qubits()));

  auto flush = [&](int q) {
    auto& run = runs[static_cast<std::size_t>(q)];
    if (!run) return;
    auto& slot = slots[run->slot];
    if (run->length == 1) {
      if (is_identity_gate(*slot)) slot.reset();
    } else {
      slot = u_gate(zyz_decompose(run->product), q);
    }
    run.reset();
  };

  for (const auto& inst : c) {
    if (is_single_qubit_unitary(inst.kind)) {
      const int q = inst.qubits[0];
      auto& run = runs[static_cast<std::size_t>(q)];
      const Unitary2 m = gate_unitary(inst.kind, inst.params);
      if (run) {
        run->product = m * run->product;
        ++run->length;
      } else {
        run = Run{slots.size(), 1, m};
        slots.emplace_back(inst);
      }
      continue;
    }
    for (int q : inst.qubits) flush(q);
    slots.emplace_back(inst);
  }
  for (int q = 0; q < c.num_qubits(); ++q) flush(q);

  Circuit out = c.empty_copy();
  for (auto& s : slots) {
    if (s) out.append(std::move(*s));
  }
  return out;
}

Circuit cancel_adjacent_cx(const Circuit& c) {
  std::vector<Instruction> kept;
  std::vector<bool> alive;
  std::vector<std::vector<std::size_t>> last(static_cast<std::size_t>(c.num_qubits()));

  for (const auto& inst : c) {
    if (inst.kind == GateKind::CX && inst.open_controls == 0) {
      auto& sc = last[static_cast<std::size_t>(inst.qubits[0])];
      auto& st = last[static_cast<std::size_t>(inst.qubits[1])];
      if (!sc.empty() && !st.empty() && sc.back() == st.back() && kept[sc.back()] == inst) {
        alive[sc.back()] = false;
        sc.pop_back();
        st.pop_back();
        continue;
      }
    }
    for (int q : inst.qubits) last[static_cast<std::size_t>(q)].push_back(kept.size());
    kept.push_back(inst);
    alive.push_back(true);
  }

  Circuit out = c.empty_copy();
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (alive[i]) out.append(std::move(kept[i]));
  }
  return out;
}

U3Params pure_to_zero_gate(double theta, double phi) {
  return zyz_decompose(u3_matrix(theta, phi, 0.0).adjoint());
}

U3Params pure_to_pure_gate(double theta1, double phi1, double theta2, double phi2) {
  return zyz_decompose(u3_matrix(theta2, phi2, 0.0) * u3_matrix(theta1, phi1, 0.0).adjoint());
}

Circuit prepare_two_qubit_state(const std::array<Complex, 4>& target, BlochAngles in0,
                                BlochAngles in1) {
  double norm2 = 0.0;
  for (const auto& a : target) norm2 += std::norm(a);
  if (std::fabs(norm2 - 1.0) > 1e-9) {
    throw std::invalid_argument("prepare_two_qubit_state: target is not normalized");
  }
  Eigen::Matrix2cd m;
  m << target[0], target[2], target[1], target[3];
  const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix2cd u = svd.matrixU();
  const Eigen::Matrix2cd v = svd.matrixV().conjugate();
  const double s0 = svd.singularValues()(0);
  const double s1 = svd.singularValues()(1);

  const Unitary2 u_in0 = u3_matrix(in0.theta, in0.phi, 0.0);
  const Unitary2 u_in1 = u3_matrix(in1.theta, in1.phi, 0.0);
  // Re-unitarize the SVD factors through the checked constructor.
  const Unitary2 ua(u);
  const Unitary2 vb(v);

  Circuit out(2);
  auto put = [&](const Unitary2& g, int q) {
    if (auto inst = u_gate(zyz_decompose(g), q)) out.append(std::move(*inst));
  };
  if (s1 < kSchmidtTol) {
    put(ua * u_in0.adjoint(), 0);
    put(vb * u_in1.adjoint(), 1);
    return out;
  }
  const double t = std::atan2(s1, s0);
  put(u3_matrix(2.0 * t, 0.0, 0.0) * u_in0.adjoint(), 0);
  put(u_in1.adjoint(), 1);
  out.append(gates::cx(0, 1));
  put(ua, 0);
  put(vb, 1);
  return out;
}

}  // namespace rpo
