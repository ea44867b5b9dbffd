#include "rpo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace rpo {

namespace {

const Amplitude kI{0.0, 1.0};

std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

std::array<Amplitude, 4> u3_entries(double theta, double phi, double lam) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {c, -std::exp(kI * lam) * s, std::exp(kI * phi) * s, std::exp(kI * (phi + lam)) * c};
}

const std::array<Amplitude, 4> kPauliX = {0.0, 1.0, 1.0, 0.0};
const std::array<Amplitude, 4> kPauliZ = {1.0, 0.0, 0.0, -1.0};

// Pure state closest to rho (dominant eigenvector).
std::array<Amplitude, 2> dominant_eigenvector(const Density2& rho) {
  const double d0 = rho[0][0].real();
  const double d1 = rho[1][1].real();
  const Amplitude off = rho[0][1];
  const double gap = std::sqrt((d0 - d1) * (d0 - d1) + 4.0 * std::norm(off));
  const double lambda = 0.5 * (d0 + d1 + gap);
  std::array<Amplitude, 2> v{};
  if (std::abs(off) > 1e-14) {
    v = {off, lambda - d0};
  } else {
    v = d0 >= d1 ? std::array<Amplitude, 2>{1.0, 0.0} : std::array<Amplitude, 2>{0.0, 1.0};
  }
  const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  return {v[0] / n, v[1] / n};
}

}  // namespace

AnnotationError::AnnotationError(int qubit, std::size_t position, double trace_distance)
    : SimulationError(fmt::format(
          "annotation on qubit {} at instruction {} does not hold (trace distance {:.3e})", qubit,
          position, trace_distance)),
      qubit_(qubit), position_(position), trace_distance_(trace_distance) {}

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxSimQubits) {
    throw SimulationError(
        fmt::format("statevector width {} outside supported range [0, {}]", n_qubits, kMaxSimQubits));
  }
  amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

Statevector::Statevector(int n_qubits, std::vector<Amplitude> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 0 || n_qubits > kMaxSimQubits || amps_.size() != (std::size_t{1} << n_qubits)) {
    throw SimulationError("statevector amplitude count does not match width");
  }
  if (std::fabs(norm() - 1.0) > 1e-10) throw SimulationError("statevector is not normalized");
}

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void Statevector::apply_1q(const std::array<Amplitude, 4>& m, int target,
                           std::uint64_t control_mask, std::uint64_t control_values) {
  const std::uint64_t tb = bit(target);
  const std::uint64_t n = amps_.size();
  for (std::uint64_t i = 0; i < n; ++i) {
    if ((i & tb) != 0 || (i & control_mask) != control_values) continue;
    const Amplitude a0 = amps_[i];
    const Amplitude a1 = amps_[i | tb];
    amps_[i] = m[0] * a0 + m[1] * a1;
    amps_[i | tb] = m[2] * a0 + m[3] * a1;
  }
}

void Statevector::apply_swap(int a, int b, std::uint64_t control_mask,
                             std::uint64_t control_values) {
  const std::uint64_t ba = bit(a);
  const std::uint64_t bb = bit(b);
  const std::uint64_t n = amps_.size();
  for (std::uint64_t i = 0; i < n; ++i) {
    // Visit each |..1..0..> / |..0..1..> pair once, from the a=1, b=0 side.
    if ((i & ba) == 0 || (i & bb) != 0 || (i & control_mask) != control_values) continue;
    std::swap(amps_[i], amps_[(i & ~ba) | bb]);
  }
}

std::array<Amplitude, 4> sim_gate_matrix(GateKind kind, std::span<const double> params) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::Id:
      return {1.0, 0.0, 0.0, 1.0};
    case GateKind::X:
      return kPauliX;
    case GateKind::Y:
      return {0.0, -kI, kI, 0.0};
    case GateKind::Z:
      return kPauliZ;
    case GateKind::H:
      return {h, h, h, -h};
    case GateKind::S:
      return {1.0, 0.0, 0.0, kI};
    case GateKind::Sdg:
      return {1.0, 0.0, 0.0, -kI};
    case GateKind::T:
      return {1.0, 0.0, 0.0, std::polar(1.0, std::acos(-1.0) / 4)};
    case GateKind::Tdg:
      return {1.0, 0.0, 0.0, std::polar(1.0, -std::acos(-1.0) / 4)};
    case GateKind::U1:
      return {1.0, 0.0, 0.0, std::polar(1.0, params[0])};
    case GateKind::U2:
      return u3_entries(std::acos(-1.0) / 2, params[0], params[1]);
    case GateKind::U3:
      return u3_entries(params[0], params[1], params[2]);
    default:
      throw SimulationError(fmt::format("{} is not a single-qubit gate", gate_name(kind)));
  }
}

Density2 reduced_qubit_state(const Statevector& sv, int q) {
  if (q < 0 || q >= sv.num_qubits()) {
    throw SimulationError(fmt::format("qubit {} out of range for width {}", q, sv.num_qubits()));
  }
  Density2 rho{};
  const std::uint64_t qb = bit(q);
  const auto amps = sv.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if ((i & qb) != 0) continue;
    const Amplitude a0 = amps[i];
    const Amplitude a1 = amps[i | qb];
    rho[0][0] += a0 * std::conj(a0);
    rho[0][1] += a0 * std::conj(a1);
    rho[1][0] += a1 * std::conj(a0);
    rho[1][1] += a1 * std::conj(a1);
  }
  return rho;
}

double trace_distance_to_pure(const Density2& rho, Amplitude a0, Amplitude a1) {
  // rho - |psi><psi| is Hermitian and traceless: eigenvalues +-mu.
  const double d00 = rho[0][0].real() - std::norm(a0);
  const Amplitude d01 = rho[0][1] - a0 * std::conj(a1);
  return std::sqrt(d00 * d00 + std::norm(d01));
}

namespace {

void apply_instruction(Statevector& sv, const Instruction& inst, std::size_t position) {
  const auto& qs = inst.qubits;
  auto controls = [&](std::size_t n_controls) {
    std::pair<std::uint64_t, std::uint64_t> mv{0, 0};
    for (std::size_t i = 0; i < n_controls; ++i) {
      mv.first |= bit(qs[i]);
      if (!inst.is_open(i)) mv.second |= bit(qs[i]);
    }
    return mv;
  };
  switch (inst.kind) {
    case GateKind::CX:
    case GateKind::CCX:
    case GateKind::MCX: {
      const auto [mask, values] = controls(qs.size() - 1);
      sv.apply_1q(kPauliX, qs.back(), mask, values);
      return;
    }
    case GateKind::CZ:
      sv.apply_1q(kPauliZ, qs[1], bit(qs[0]), bit(qs[0]));
      return;
    case GateKind::CU3:
      sv.apply_1q(u3_entries(inst.params[0], inst.params[1], inst.params[2]), qs[1], bit(qs[0]),
                  bit(qs[0]));
      return;
    case GateKind::Swap:
      sv.apply_swap(qs[0], qs[1]);
      return;
    case GateKind::SwapZ:
      sv.apply_1q(kPauliX, qs[1], bit(qs[0]), bit(qs[0]));
      sv.apply_1q(kPauliX, qs[0], bit(qs[1]), bit(qs[1]));
      return;
    case GateKind::CSwap:
      sv.apply_swap(qs[1], qs[2], bit(qs[0]), bit(qs[0]));
      return;
    case GateKind::Reset: {
      const int q = qs[0];
      const Density2 rho = reduced_qubit_state(sv, q);
      const auto psi = dominant_eigenvector(rho);
      const double dist = trace_distance_to_pure(rho, psi[0], psi[1]);
      if (dist > 1e-8) {
        throw SimulationError(fmt::format(
            "reset at instruction {} on qubit {} which is entangled (trace distance {:.3e})",
            position, q, dist));
      }
      const std::uint64_t qb = bit(q);
      auto amps = sv.amplitudes();
      double total = 0.0;
      for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & qb) != 0) continue;
        const Amplitude r = std::conj(psi[0]) * amps[i] + std::conj(psi[1]) * amps[i | qb];
        amps[i] = r;
        amps[i | qb] = 0.0;
        total += std::norm(r);
      }
      const double scale = 1.0 / std::sqrt(total);
      for (auto& a : amps) a *= scale;
      return;
    }
    case GateKind::Annot: {
      const double theta = inst.params[0];
      const double phi = inst.params[1];
      const Density2 rho = reduced_qubit_state(sv, qs[0]);
      const double dist = trace_distance_to_pure(rho, std::cos(theta / 2),
                                                 std::polar(std::sin(theta / 2), phi));
      if (dist > 1e-8) throw AnnotationError(qs[0], position, dist);
      return;
    }
    case GateKind::Measure:
    case GateKind::Barrier:
      return;
    default:
      sv.apply_1q(sim_gate_matrix(inst.kind, inst.params), qs[0]);
      return;
  }
}

}  // namespace

Simulation simulate(const Circuit& c) { return simulate(c, Statevector(c.num_qubits())); }

Simulation simulate(const Circuit& c, Statevector initial) {
  if (c.num_qubits() > kMaxSimQubits) {
    throw SimulationError(
        fmt::format("circuit width {} exceeds simulation limit {}", c.num_qubits(), kMaxSimQubits));
  }
  if (initial.num_qubits() != c.num_qubits()) {
    throw SimulationError("initial state width does not match circuit");
  }
  try {
    c.validate_terminal_measurements();
  } catch (const CircuitError& e) {
    throw SimulationError(e.what());
  }
  Simulation result{std::move(initial), {}, false};
  std::vector<int> clbit_source(static_cast<std::size_t>(c.num_clbits()), -1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& inst = c[i];
    apply_instruction(result.state, inst, i);
    if (inst.kind == GateKind::Measure) {
      clbit_source[static_cast<std::size_t>(inst.clbits[0])] = inst.qubits[0];
      result.measured = true;
    }
  }
  if (result.measured) {
    if (c.num_clbits() > 24) throw SimulationError("too many classical bits for an exact distribution");
    result.distribution.assign(std::size_t{1} << c.num_clbits(), 0.0);
    const auto amps = result.state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
      const double p = std::norm(amps[i]);
      if (p == 0.0) continue;
      std::uint64_t outcome = 0;
      for (std::size_t cb = 0; cb < clbit_source.size(); ++cb) {
        const int q = clbit_source[cb];
        if (q >= 0 && (i & bit(q)) != 0) outcome |= std::uint64_t{1} << cb;
      }
      result.distribution[outcome] += p;
    }
  }
  return result;
}

double fidelity(const Statevector& a, const Statevector& b) {
  if (a.num_qubits() != b.num_qubits()) throw SimulationError("fidelity: width mismatch");
  Amplitude inner{0.0, 0.0};
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i) inner += std::conj(a[i]) * b[i];
  return std::norm(inner);
}

namespace {

EquivalenceReport compare(const Simulation& sa, const Statevector& state_a, const Simulation& sb,
                          double tol) {
  EquivalenceReport report;
  if (sa.measured != sb.measured) {
    report.detail.emplace_back("one circuit measures and the other does not");
    return report;
  }
  if (sa.measured) {
    if (sa.distribution.size() != sb.distribution.size()) {
      throw SimulationError("classical register width mismatch");
    }
    double tvd = 0.0;
    for (std::size_t i = 0; i < sa.distribution.size(); ++i) {
      tvd += std::fabs(sa.distribution[i] - sb.distribution[i]);
    }
    tvd *= 0.5;
    report.fidelity = 1.0 - tvd;
    report.equivalent = tvd <= tol;
    report.detail.push_back(fmt::format("total variation distance {:.3e}", tvd));
    return report;
  }
  Amplitude inner{0.0, 0.0};
  for (std::size_t i = 0; i < state_a.amplitudes().size(); ++i) {
    inner += std::conj(state_a[i]) * sb.state[i];
  }
  report.fidelity = std::norm(inner);
  report.phase = std::arg(inner);
  report.equivalent = report.fidelity >= 1.0 - tol;
  report.detail.push_back(fmt::format("state fidelity 1 - {:.3e}", 1.0 - report.fidelity));
  return report;
}

}  // namespace

EquivalenceReport equivalent_up_to_global_phase(const Circuit& a, const Circuit& b, double tol) {
  if (a.num_qubits() != b.num_qubits()) {
    throw SimulationError(fmt::format("width mismatch: {} vs {} qubits", a.num_qubits(), b.num_qubits()));
  }
  const Simulation sa = simulate(a);
  const Simulation sb = simulate(b);
  return compare(sa, sa.state, sb, tol);
}

EquivalenceReport equivalent_with_layout(const Circuit& a, const Circuit& b,
                                         std::span<const int> final_layout, double tol) {
  if (final_layout.size() != static_cast<std::size_t>(a.num_qubits())) {
    throw SimulationError("layout size does not match the logical circuit width");
  }
  for (int p : final_layout) {
    if (p < 0 || p >= b.num_qubits()) throw SimulationError("layout entry outside physical width");
  }
  const Simulation sa = simulate(a);
  const Simulation sb = simulate(b);
  std::vector<Amplitude> embedded(std::size_t{1} << b.num_qubits(), Amplitude{0.0, 0.0});
  const auto amps = sa.state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    std::uint64_t j = 0;
    for (std::size_t q = 0; q < final_layout.size(); ++q) {
      if ((i & bit(static_cast<int>(q))) != 0) j |= bit(final_layout[q]);
    }
    embedded[j] = amps[i];
  }
  const Statevector state_a(b.num_qubits(), std::move(embedded));
  return compare(sa, state_a, sb, tol);
}

}  // namespace rpo
