#include <gtest/gtest.h>

#include <cmath>

#include "rpo/oracle.hpp"
#include "rpo/synth.hpp"
#include "rpo/unitary.hpp"
#include "support/test_util.hpp"

using namespace rpo;
using rpo::testing::Rng;

namespace {

Unitary2 haar_unitary(Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) z(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return Unitary2(q);
}

bool same_up_to_phase(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b, double tol = 1e-9) {
  return Unitary2(a).equal_up_to_phase(Unitary2(b), tol);
}

// Random entangled state on every wire except `clean` (left at |0>).
Circuit random_prep(int n, Rng& rng, const std::vector<int>& clean = {}) {
  Circuit c(n);
  auto is_clean = [&](int q) { return std::find(clean.begin(), clean.end(), q) != clean.end(); };
  for (int round = 0; round < 2; ++round) {
    for (int q = 0; q < n; ++q) {
      if (is_clean(q)) continue;
      c.append(gates::u3(rpo::testing::uniform(rng, 0, kPi), rpo::testing::uniform(rng, 0, kTwoPi),
                         rpo::testing::uniform(rng, 0, kTwoPi), q));
    }
    for (int q = 0; q + 1 < n; ++q) {
      if (!is_clean(q) && !is_clean(q + 1)) c.append(gates::cx(q, q + 1));
    }
  }
  return c;
}

// `a` and `b` agree up to a global phase on random inputs and every basis input.
void expect_equivalent(const Circuit& a, const Circuit& b, Rng& rng, const std::vector<int>& clean = {}) {
  const int n = a.num_qubits();
  for (int trial = 0; trial < 6; ++trial) {
    Circuit pa = random_prep(n, rng, clean), pb = pa;
    pa.append(a);
    pb.append(b);
    auto r = equivalent_up_to_global_phase(pa, pb);
    EXPECT_GE(r.fidelity, 1.0 - 1e-9);
  }
  if (!clean.empty()) return;
  for (int x = 0; x < (1 << n); ++x) {
    Circuit pa(n);
    for (int q = 0; q < n; ++q) {
      if ((x >> q) & 1) pa.append(gates::x(q));
    }
    Circuit pb = pa;
    pa.append(a);
    pb.append(b);
    EXPECT_GE(equivalent_up_to_global_phase(pa, pb).fidelity, 1.0 - 1e-9) << "basis input " << x;
  }
}

bool only_basis(const Circuit& c) {
  for (const auto& g : c) {
    if (!default_basis().contains(g.kind) && !is_directive(g.kind)) return false;
  }
  return true;
}

Circuit one(int n, Instruction inst) {
  Circuit c(n);
  c.append(std::move(inst));
  return c;
}

}  // namespace

TEST(Unroll, SwapIsThreeAlternatingCx) {
  auto u = unroll(one(2, gates::swap(0, 1)), default_basis());
  ASSERT_EQ(u.size(), 3u);
  EXPECT_EQ(u[0], gates::cx(0, 1));
  EXPECT_EQ(u[1], gates::cx(1, 0));
  EXPECT_EQ(u[2], gates::cx(0, 1));
}

TEST(Unroll, SwapzIsTwoCx) {
  auto u = unroll(one(2, gates::swapz(0, 1)), default_basis());
  ASSERT_EQ(u.size(), 2u);
  EXPECT_EQ(u[0], gates::cx(0, 1));
  EXPECT_EQ(u[1], gates::cx(1, 0));
}

TEST(Unroll, CompoundGatesAreEquivalent) {
  Rng rng(21);
  struct Case {
    Instruction inst;
    int n;
    std::size_t max_cx;
  };
  const std::vector<Case> cases = {
      {gates::swap(0, 1), 2, 3},
      {gates::swapz(1, 0), 2, 2},
      {gates::cz(0, 1), 2, 1},
      {gates::cu3(1.1, 0.4, -2.0, 1, 0), 2, 2},
      {gates::cu3(3 * kPi, 0, 0, 0, 1), 2, 2},
      {gates::cu3(0.7, kPi, kPi / 3, 0, 1), 2, 2},
      {gates::ccx(0, 1, 2), 3, 6},
      {gates::ccx(2, 0, 1), 3, 6},
      {Instruction(GateKind::CCX, {0, 1, 2}, {}, {}, 0b01), 3, 6},
      {Instruction(GateKind::CX, {1, 0}, {}, {}, 1), 2, 1},
      {gates::cswap(0, 1, 2), 3, 8},
      {gates::cswap(2, 0, 1), 3, 8},
      {gates::mcx({0, 1}, 2), 3, 6},
      {gates::mcx({0, 1, 2}, 3), 4, 1000},
      {gates::mcx({0, 1, 2}, 3, 0b101), 4, 1000},
      {gates::mcx({3, 0, 1, 4}, 2), 5, 1000},
  };
  for (const auto& cs : cases) {
    Circuit c = one(cs.n, cs.inst);
    Circuit u = unroll(c, default_basis());
    EXPECT_TRUE(only_basis(u)) << gate_name(cs.inst.kind);
    EXPECT_LE(count_cx(u), cs.max_cx) << gate_name(cs.inst.kind);
    expect_equivalent(c, u, rng);
  }
}

TEST(Unroll, ExactCxCounts) {
  EXPECT_EQ(count_cx(unroll(one(3, gates::ccx(0, 1, 2)), default_basis())), 6u);
  EXPECT_EQ(count_cx(unroll(one(3, gates::cswap(0, 1, 2)), default_basis())), 8u);
  EXPECT_EQ(count_cx(unroll(one(2, gates::cu3(1, 2, 3, 0, 1)), default_basis())), 2u);
}

TEST(Unroll, SingleQubitGatesIntoBasis) {
  Rng rng(22);
  Circuit c(1);
  for (auto g : {gates::x(0), gates::y(0), gates::z(0), gates::h(0), gates::s(0), gates::sdg(0),
                 gates::t(0), gates::tdg(0), gates::id(0)}) {
    c.append(g);
  }
  auto u = unroll(c, default_basis());
  EXPECT_TRUE(only_basis(u));
  expect_equivalent(c, u, rng);
  // Kinds already in the basis stay as written.
  auto keep = unroll(c, default_basis() + GateSet{GateKind::H, GateKind::X});
  EXPECT_EQ(count_gates(keep, GateKind::H), 1u);
}

TEST(Unroll, KeepsRequestedKindsAndDirectives) {
  Circuit c(2, 1);
  c.append(gates::swap(0, 1)).append(gates::swapz(0, 1)).append(gates::annot(0, 0, 1));
  c.append(gates::barrier({0, 1})).append(gates::reset(1)).append(gates::measure(0, 0));
  auto u = unroll(c, default_basis() + GateSet{GateKind::Swap, GateKind::SwapZ});
  EXPECT_EQ(u, c);
}

TEST(Unroll, McxAncillaModes) {
  Rng rng(23);
  // 4 controls on 0..3, target 4, two clean ancillas 5, 6.
  Circuit c = one(7, gates::mcx({0, 1, 2, 3}, 4));
  UnrollOptions with{.clean_ancillas = {5, 6}, .require_ancillas = true};
  auto u = unroll(c, default_basis(), with);
  EXPECT_TRUE(only_basis(u));
  expect_equivalent(c, u, rng, {5, 6});
  auto recursive = unroll(c, default_basis());
  EXPECT_LT(count_cx(u), count_cx(recursive));

  UnrollOptions short_of{.clean_ancillas = {5}, .require_ancillas = true};
  EXPECT_THROW(unroll(c, default_basis(), short_of), UnrollError);
  EXPECT_THROW(unroll(c, GateSet{GateKind::U3}), UnrollError);
  EXPECT_THROW(unroll(c, GateSet{GateKind::CX, GateKind::H}), UnrollError);
}

TEST(Zyz, Examples) {
  auto id = zyz_decompose(Unitary2::identity());
  EXPECT_NEAR(id.theta.value(), 0, 1e-12);
  EXPECT_NEAR(id.phi.value(), 0, 1e-12);
  EXPECT_NEAR(id.lam.value(), 0, 1e-12);
  EXPECT_NEAR(std::remainder(id.global_phase, kTwoPi), 0, 1e-12);

  const Unitary2 h = gate_unitary(GateKind::H);
  auto p = zyz_decompose(h);
  EXPECT_TRUE(same_up_to_phase(u3_matrix(kPi / 2, 0, kPi).matrix(), h.matrix()));
  EXPECT_TRUE(same_up_to_phase(p.matrix().matrix(), h.matrix()));
  EXPECT_NEAR(p.theta.value(), kPi / 2, 1e-9);
}

TEST(Zyz, HaarReconstruction) {
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    Unitary2 u = haar_unitary(rng);
    auto p = zyz_decompose(u);
    EXPECT_LE(p.theta.value(), kPi + 1e-12);
    EXPECT_LT((p.matrix().matrix() - u.matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
  EXPECT_THROW(Unitary2(1, 1, 0, 1), NotUnitaryError);
}

TEST(ComposeU3, Examples) {
  Rng rng(25);
  U3Params any = zyz_decompose(haar_unitary(rng));
  U3Params ident{};
  EXPECT_TRUE(same_up_to_phase(compose_u3(any, ident).matrix().matrix(), any.matrix().matrix()));
  EXPECT_TRUE(same_up_to_phase(compose_u3(ident, any).matrix().matrix(), any.matrix().matrix()));
  U3Params h = zyz_decompose(gate_unitary(GateKind::H));
  EXPECT_TRUE(compose_u3(h, h).is_identity());
  for (int i = 0; i < 100; ++i) {
    Unitary2 a = haar_unitary(rng), b = haar_unitary(rng);
    auto c = compose_u3(zyz_decompose(a), zyz_decompose(b));
    EXPECT_TRUE(same_up_to_phase(c.matrix().matrix(), b.matrix() * a.matrix()));
  }
}

TEST(UGate, CheapestForm) {
  EXPECT_FALSE(u_gate(U3Params{}, 0).has_value());
  EXPECT_EQ(u_gate(zyz_decompose(gate_unitary(GateKind::T)), 0)->kind, GateKind::U1);
  EXPECT_EQ(u_gate(zyz_decompose(gate_unitary(GateKind::H)), 0)->kind, GateKind::U2);
  auto g = u_gate(zyz_decompose(u3_matrix(1.0, 2.0, 3.0)), 0);
  EXPECT_EQ(g->kind, GateKind::U3);
}

TEST(Merge, Examples) {
  Circuit xx(1);
  xx.append(gates::u3(kPi, 0, kPi, 0)).append(gates::u3(kPi, 0, kPi, 0));
  EXPECT_TRUE(merge_1q_runs(xx).empty());

  Circuit tt(1);
  tt.append(gates::u1(kPi / 4, 0)).append(gates::u1(kPi / 4, 0));
  auto m = merge_1q_runs(tt);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], gates::u1(kPi / 2, 0));
}

TEST(Merge, RandomRunsBecomeOneGate) {
  Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    Circuit c(1);
    for (int i = 0; i < 5; ++i) {
      c.append(gates::u3(rpo::testing::uniform(rng, 0, kPi), rpo::testing::uniform(rng, 0, kTwoPi),
                         rpo::testing::uniform(rng, 0, kTwoPi), 0));
    }
    auto m = merge_1q_runs(c);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_GE(equivalent_up_to_global_phase(c, m).fidelity, 1.0 - 1e-9);
  }
}

TEST(Merge, DirectivesBreakRuns) {
  Circuit c(2, 1);
  c.append(gates::h(0)).append(gates::barrier({0})).append(gates::h(0));
  c.append(gates::x(1)).append(gates::cx(0, 1)).append(gates::x(1)).append(gates::measure(1, 0));
  auto m = merge_1q_runs(c);
  EXPECT_EQ(count_1q(m), 4u);
}

TEST(Merge, PropertyNoAdjacent1qAndEquivalent) {
  Rng rng(27);
  for (int trial = 0; trial < 60; ++trial) {
    rpo::testing::RandomCircuitOptions o;
    o.n_qubits = 4;
    o.n_instructions = 40;
    o.allow_reset = false;
    Circuit c = unroll(rpo::testing::random_circuit(rng, o), default_basis());
    Circuit m = merge_1q_runs(c);
    EXPECT_GE(equivalent_up_to_global_phase(c, m).fidelity, 1.0 - 1e-9);
    std::vector<bool> last_1q(4, false);
    for (const auto& g : m) {
      const bool single = is_single_qubit_unitary(g.kind);
      for (int q : g.qubits) {
        EXPECT_FALSE(single && last_1q[static_cast<std::size_t>(q)]);
        last_1q[static_cast<std::size_t>(q)] = single;
      }
    }
  }
}

TEST(CancelCx, Examples) {
  Circuit pair(2);
  pair.append(gates::cx(0, 1)).append(gates::cx(0, 1));
  EXPECT_TRUE(cancel_adjacent_cx(pair).empty());

  Circuit flipped(2);
  flipped.append(gates::cx(0, 1)).append(gates::cx(1, 0));
  EXPECT_EQ(cancel_adjacent_cx(flipped), flipped);

  Circuit blocked(2);
  blocked.append(gates::cx(0, 1)).append(gates::h(0)).append(gates::cx(0, 1));
  EXPECT_EQ(cancel_adjacent_cx(blocked), blocked);

  Circuit nested(3);
  nested.append(gates::cx(0, 1)).append(gates::cx(1, 2)).append(gates::cx(1, 2)).append(gates::cx(0, 1));
  EXPECT_TRUE(cancel_adjacent_cx(nested).empty());

  Circuit other_wire(3);
  other_wire.append(gates::cx(0, 1)).append(gates::h(2)).append(gates::cx(0, 1));
  EXPECT_EQ(cancel_adjacent_cx(other_wire).size(), 1u);
}

TEST(PureToZero, Examples) {
  EXPECT_TRUE(pure_to_zero_gate(0, 0).is_identity());
  auto g = pure_to_zero_gate(kPi / 2, 0);
  Eigen::Vector2cd plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  EXPECT_NEAR(std::abs(g.matrix().apply(plus)(0)), 1.0, 1e-9);
}

TEST(PureToZero, Random) {
  Rng rng(28);
  for (int i = 0; i < 200; ++i) {
    const double t = rpo::testing::uniform(rng, 0, kPi), p = rpo::testing::uniform(rng, 0, kTwoPi);
    Eigen::Vector2cd psi(std::cos(t / 2), std::polar(std::sin(t / 2), p));
    EXPECT_NEAR(std::abs(pure_to_zero_gate(t, p).matrix().apply(psi)(0)), 1.0, 1e-9);
  }
}

TEST(PureToPure, Examples) {
  EXPECT_TRUE(pure_to_pure_gate(1.0, 2.0, 1.0, 2.0).is_identity());
  auto v = pure_to_pure_gate(0, 0, 1.2, 0.4);
  Eigen::Vector2cd zero(1, 0);
  Eigen::Vector2cd out = v.matrix().apply(zero);
  Eigen::Vector2cd expect = u3_matrix(1.2, 0.4, 0).apply(zero);
  EXPECT_NEAR(std::abs(out.dot(expect)), 1.0, 1e-9);
}

TEST(PureToPure, Random) {
  Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    const double t1 = rpo::testing::uniform(rng, 0, kPi), p1 = rpo::testing::uniform(rng, 0, kTwoPi);
    const double t2 = rpo::testing::uniform(rng, 0, kPi), p2 = rpo::testing::uniform(rng, 0, kTwoPi);
    Eigen::Vector2cd a(std::cos(t1 / 2), std::polar(std::sin(t1 / 2), p1));
    Eigen::Vector2cd b(std::cos(t2 / 2), std::polar(std::sin(t2 / 2), p2));
    Eigen::Vector2cd out = pure_to_pure_gate(t1, p1, t2, p2).matrix().apply(a);
    EXPECT_NEAR(std::abs(b.dot(out)), 1.0, 1e-9);
  }
}

namespace {

// Fidelity of prepare_two_qubit_state's circuit run on the given inputs.
double prep_fidelity(const std::array<Complex, 4>& target, BlochAngles in0, BlochAngles in1,
                     std::size_t* cx = nullptr) {
  Circuit prep = prepare_two_qubit_state(target, in0, in1);
  if (cx) *cx = count_cx(prep);
  Circuit c(2);
  c.append(gates::u3(in0.theta, in0.phi, 0, 0)).append(gates::u3(in1.theta, in1.phi, 0, 1));
  c.append(prep);
  Statevector want(2, std::vector<Amplitude>(target.begin(), target.end()));
  return fidelity(simulate(c).state, want);
}

}  // namespace

TEST(PrepareTwoQubit, Examples) {
  Circuit zero = prepare_two_qubit_state({1, 0, 0, 0}, {0, 0}, {0, 0});
  EXPECT_TRUE(merge_1q_runs(zero).empty());

  const double r = 1 / std::sqrt(2.0);
  Circuit bell_ref(2);
  bell_ref.append(gates::h(0)).append(gates::cx(0, 1));
  Circuit bell = prepare_two_qubit_state({r, 0, 0, r}, {0, 0}, {0, 0});
  EXPECT_EQ(count_cx(bell), 1u);
  EXPECT_GE(equivalent_up_to_global_phase(bell_ref, bell).fidelity, 1.0 - 1e-9);

  EXPECT_THROW(prepare_two_qubit_state({1, 1, 0, 0}, {0, 0}, {0, 0}), std::invalid_argument);
}

TEST(PrepareTwoQubit, RandomTargetsAndInputs) {
  Rng rng(30);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    std::array<Complex, 4> t;
    double norm = 0;
    for (auto& a : t) {
      a = {g(rng), g(rng)};
      norm += std::norm(a);
    }
    for (auto& a : t) a /= std::sqrt(norm);
    BlochAngles in0{rpo::testing::uniform(rng, 0, kPi), rpo::testing::uniform(rng, 0, kTwoPi)};
    BlochAngles in1{rpo::testing::uniform(rng, 0, kPi), rpo::testing::uniform(rng, 0, kTwoPi)};
    std::size_t cx = 0;
    EXPECT_GE(prep_fidelity(t, in0, in1, &cx), 1.0 - 1e-9);
    EXPECT_LE(cx, 1u);
  }
}

TEST(PrepareTwoQubit, ProductTargetsUseNoCx) {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    auto a = u3_matrix(rpo::testing::uniform(rng, 0, kPi), rpo::testing::uniform(rng, 0, kTwoPi), 0)
                 .apply(Eigen::Vector2cd(1, 0));
    auto b = u3_matrix(rpo::testing::uniform(rng, 0, kPi), rpo::testing::uniform(rng, 0, kTwoPi), 0)
                 .apply(Eigen::Vector2cd(1, 0));
    std::array<Complex, 4> t = {a(0) * b(0), a(1) * b(0), a(0) * b(1), a(1) * b(1)};
    std::size_t cx = 9;
    EXPECT_GE(prep_fidelity(t, {0.3, 0.1}, {2.0, 4.0}, &cx), 1.0 - 1e-9);
    EXPECT_EQ(cx, 0u);
  }
}
