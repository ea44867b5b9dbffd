#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "rpo/angle.hpp"
#include "rpo/circuit.hpp"

namespace rpo {

using Complex = std::complex<double>;

class NotUnitaryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A 2x2 unitary matrix; unitarity (U U^dagger = I within 1e-10 per entry) is
/// checked on construction.
class Unitary2 {
 public:
  Unitary2() : m_(Eigen::Matrix2cd::Identity()) {}
  explicit Unitary2(const Eigen::Matrix2cd& m);
  Unitary2(Complex a, Complex b, Complex c, Complex d);

  static Unitary2 identity() { return Unitary2(); }

  const Eigen::Matrix2cd& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  Unitary2 adjoint() const;
  /// `this` applied after `first`: (*this) * first.
  Unitary2 operator*(const Unitary2& other) const;
  Eigen::Vector2cd apply(const Eigen::Vector2cd& v) const { return m_ * v; }

  /// Principal square root V with V*V = *this.
  Unitary2 sqrt() const;

  /// Equal to `other` up to a global phase, entrywise within `tol`.
  bool equal_up_to_phase(const Unitary2& other, double tol = 1e-9) const;

 private:
  struct Unchecked {};
  Unitary2(const Eigen::Matrix2cd& m, Unchecked) : m_(m) {}
  Eigen::Matrix2cd m_;
};

/// u3(theta, phi, lam) times exp(i * global_phase).
struct U3Params {
  Angle theta;
  Angle phi;
  Angle lam;
  double global_phase = 0.0;

  Unitary2 matrix() const;
  /// True when the gate is the identity up to global phase (within kEpsAngle).
  bool is_identity() const;
};

/// The u3 matrix [[cos, -e^{i lam} sin], [e^{i phi} sin, e^{i(phi+lam)} cos]]
/// with half-angle theta/2; no canonicalization of theta.
Unitary2 u3_matrix(double theta, double phi, double lam);

/// ZYZ re-synthesis: params with theta in [0, pi] and a recorded global phase
/// such that params.matrix() == u within 1e-9. In the degenerate cases
/// (theta == 0 or pi) phi is 0 and the free Euler angle is folded into lam.
U3Params zyz_decompose(const Unitary2& u);

/// Params of `second` applied after `first` (matrix product second * first).
U3Params compose_u3(const U3Params& first, const U3Params& second);

/// Matrix of a single-qubit unitary instruction kind.
Unitary2 gate_unitary(GateKind kind, std::span<const double> params = {});

/// Single-qubit gate instruction realizing `p` up to global phase, in the
/// cheapest u-form (u1 when theta == 0, u2 when theta == pi/2, else u3).
/// Empty when `p` is the identity.
std::optional<Instruction> u_gate(const U3Params& p, int qubit);

}  // namespace rpo
