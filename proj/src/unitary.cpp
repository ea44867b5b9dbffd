#include "rpo/unitary.hpp"

#include <cmath>

namespace rpo {

namespace {

constexpr double kUnitaryTol = 1e-10;
// Below this magnitude an Euler angle is numerically undetermined.
constexpr double kDegenerate = 1e-12;

const Complex kI{0.0, 1.0};

void check_unitary(const Eigen::Matrix2cd& m) {
  const Eigen::Matrix2cd prod = m * m.adjoint();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const Complex expected = r == c ? 1.0 : 0.0;
      if (std::abs(prod(r, c) - expected) > kUnitaryTol) {
        throw NotUnitaryError("matrix is not unitary within 1e-10");
      }
    }
  }
}

}  // namespace

Unitary2::Unitary2(const Eigen::Matrix2cd& m) : m_(m) { check_unitary(m_); }

Unitary2::Unitary2(Complex a, Complex b, Complex c, Complex d) {
  m_ << a, b, c, d;
  check_unitary(m_);
}

Unitary2 Unitary2::adjoint() const { return Unitary2(m_.adjoint(), Unchecked{}); }

Unitary2 Unitary2::operator*(const Unitary2& other) const {
  return Unitary2(m_ * other.m_, Unchecked{});
}

Unitary2 Unitary2::sqrt() const {
  // For a 2x2 normal matrix, sqrt(U) = (U + s I) / sqrt(tr U + 2 s) with
  // s = sqrt(det U); pick the branch of s that keeps the denominator away
  // from zero.
  const Complex det = m_.determinant();
  const Complex tr = m_.trace();
  Complex s = std::sqrt(det);
  if (std::abs(tr + 2.0 * s) < std::abs(tr - 2.0 * s)) s = -s;
  const Complex denom = std::sqrt(tr + 2.0 * s);
  const Eigen::Matrix2cd root = (m_ + s * Eigen::Matrix2cd::Identity()) / denom;
  return Unitary2(root);
}

bool Unitary2::equal_up_to_phase(const Unitary2& other, double tol) const {
  // Align phase on the largest entry of `other`.
  int br = 0;
  int bc = 0;
  double best = -1.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (std::abs(other.m_(r, c)) > best) {
        best = std::abs(other.m_(r, c));
        br = r;
        bc = c;
      }
    }
  }
  if (std::abs(m_(br, bc)) < 1e-12) return false;
  const Complex phase = other.m_(br, bc) / m_(br, bc);
  const Complex unit = phase / std::abs(phase);
  return ((m_ * unit) - other.m_).cwiseAbs().maxCoeff() <= tol;
}

Unitary2 u3_matrix(double theta, double phi, double lam) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd m;
  m << c, -std::exp(kI * lam) * s, std::exp(kI * phi) * s, std::exp(kI * (phi + lam)) * c;
  return Unitary2(m);
}

Unitary2 U3Params::matrix() const {
  const Unitary2 base = u3_matrix(theta.value(), phi.value(), lam.value());
  return Unitary2(base.matrix() * std::exp(kI * global_phase));
}

bool U3Params::is_identity() const {
  return theta == Angle(0.0) && Angle(phi.value() + lam.value()) == Angle(0.0);
}

U3Params zyz_decompose(const Unitary2& u) {
  const Eigen::Matrix2cd& m = u.matrix();
  const double a00 = std::abs(m(0, 0));
  const double a10 = std::abs(m(1, 0));
  U3Params p;
  const double theta = 2.0 * std::atan2(a10, a00);
  p.theta = Angle(theta);
  if (a10 < kDegenerate) {
    // Diagonal: e^{i alpha} diag(1, e^{i lam}).
    const double alpha = std::arg(m(0, 0));
    p.global_phase = alpha;
    p.phi = Angle(0.0);
    p.lam = Angle(std::arg(m(1, 1)) - alpha);
  } else if (a00 < kDegenerate) {
    // Anti-diagonal: e^{i alpha} [[0, -e^{i lam}], [1, 0]].
    const double alpha = std::arg(m(1, 0));
    p.global_phase = alpha;
    p.phi = Angle(0.0);
    p.lam = Angle(std::arg(-m(0, 1)) - alpha);
  } else {
    const double alpha = std::arg(m(0, 0));
    p.global_phase = alpha;
    p.phi = Angle(std::arg(m(1, 0)) - alpha);
    p.lam = Angle(std::arg(-m(0, 1)) - alpha);
  }
  // Angle canonicalization stores theta modulo 2pi; theta <= pi so it is exact.
  return p;
}

U3Params compose_u3(const U3Params& first, const U3Params& second) {
  return zyz_decompose(second.matrix() * first.matrix());
}

Unitary2 gate_unitary(GateKind kind, std::span<const double> params) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::Id:
      return Unitary2::identity();
    case GateKind::X:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y:
      return {0.0, -kI, kI, 0.0};
    case GateKind::Z:
      return {1.0, 0.0, 0.0, -1.0};
    case GateKind::H:
      return {h, h, h, -h};
    case GateKind::S:
      return {1.0, 0.0, 0.0, kI};
    case GateKind::Sdg:
      return {1.0, 0.0, 0.0, -kI};
    case GateKind::T:
      return {1.0, 0.0, 0.0, std::exp(kI * (kPi / 4))};
    case GateKind::Tdg:
      return {1.0, 0.0, 0.0, std::exp(-kI * (kPi / 4))};
    case GateKind::U1:
      return {1.0, 0.0, 0.0, std::exp(kI * params[0])};
    case GateKind::U2:
      return u3_matrix(kPi / 2, params[0], params[1]);
    case GateKind::U3:
      return u3_matrix(params[0], params[1], params[2]);
    default:
      throw std::invalid_argument("gate_unitary: not a single-qubit unitary kind");
  }
}

std::optional<Instruction> u_gate(const U3Params& p, int qubit) {
  if (p.is_identity()) return std::nullopt;
  if (p.theta == Angle(0.0)) return gates::u1(p.phi.value() + p.lam.value(), qubit);
  if (p.theta == Angle(kPi / 2)) return gates::u2(p.phi.value(), p.lam.value(), qubit);
  return gates::u3(p.theta.value(), p.phi.value(), p.lam.value(), qubit);
}

}  // namespace rpo
