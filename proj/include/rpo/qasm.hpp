#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "rpo/circuit.hpp"

namespace rpo {

/// Syntax or semantic error in program text, with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the OpenQASM-2-flavored subset:
///
///   qreg q[N];  creg c[N];
///   x q[0];  u3(pi/2,0,-pi/4) q[1];  cx q[0],q[1];  ocx q[0],q[1];
///   ccx[oc] q[0],q[1],q[2];  mcx[occ] q[0],q[1],q[2],q[3];
///   swapz q[0],q[1];   (second operand is the zero-designated qubit)
///   annot(theta,phi) q[0];  reset q[0];  barrier q[0],q[1];  measure q[0] -> c[0];
///
/// `//` starts a comment. Angles accept decimal literals, `pi`, and + - * /
/// with parentheses. Measurements must be terminal.
Circuit parse_program(std::string_view text);

/// Canonical text for `c`; parse_program(emit_program(c)) == c.
std::string emit_program(const Circuit& c);

/// Canonical spelling of an angle: `0`, `pi/2`, `3*pi/4`, or a 17-digit decimal.
std::string format_angle(double radians);

}  // namespace rpo
