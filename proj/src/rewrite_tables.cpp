#include "rpo/rewrite_tables.hpp"

#include <stdexcept>

namespace rpo {

namespace {

using G = GateKind;
using Row = std::array<Template, 5>;
using Table = std::array<Row, 5>;

std::size_t column(BasisState s) {
  switch (s) {
    case BasisState::Zero:
      return 1;
    case BasisState::One:
      return 2;
    case BasisState::Plus:
      return 3;
    case BasisState::Minus:
      return 4;
    default:
      return 0;
  }
}

const Template kCx = {{G::CX, 0, 1}};
const Template kNone = {};
const Template kXTarget = {{G::X, 1}};
const Template kZControl = {{G::Z, 0}};

// [control][target], order T, 0, 1, +, -.
const Table kCxTable = {
    Row{kCx, kCx, kCx, kNone, kZControl},
    Row{kNone, kNone, kNone, kNone, kNone},
    Row{kXTarget, kXTarget, kXTarget, kNone, kNone},
    Row{kCx, kCx, kCx, kNone, kZControl},
    Row{kCx, kCx, kCx, kNone, kZControl},
};

Template seq(std::initializer_list<TemplateGate> gs) { return Template(gs); }

// [top][bottom], order T, 0, 1, +, -.
const Table kSwapTable = {
    Row{
        seq({{G::Swap, 0, 1}}),
        seq({{G::SwapZ, 0, 1}}),
        seq({{G::X, 0}, {G::SwapZ, 0, 1}}),
        seq({{G::SwapZ, 1, 0}}),
        seq({{G::Z, 0}, {G::SwapZ, 1, 0}}),
    },
    Row{
        seq({{G::SwapZ, 1, 0}}),
        seq({}),
        seq({{G::X, 0}, {G::X, 1}}),
        seq({{G::H, 0}, {G::H, 1}}),
        seq({{G::X, 0}, {G::H, 0}, {G::H, 1}, {G::X, 1}}),
    },
    Row{
        seq({{G::X, 1}, {G::SwapZ, 1, 0}}),
        seq({{G::X, 0}, {G::X, 1}}),
        seq({}),
        seq({{G::X, 0}, {G::H, 0}, {G::H, 1}, {G::X, 1}}),
        seq({{G::H, 0}, {G::H, 1}}),
    },
    Row{
        seq({{G::SwapZ, 0, 1}}),
        seq({{G::H, 0}, {G::H, 1}}),
        seq({{G::H, 0}, {G::X, 0}, {G::X, 1}, {G::H, 1}}),
        seq({}),
        seq({{G::Z, 0}, {G::Z, 1}}),
    },
    Row{
        seq({{G::Z, 1}, {G::SwapZ, 0, 1}}),
        seq({{G::H, 0}, {G::X, 0}, {G::X, 1}, {G::H, 1}}),
        seq({{G::H, 0}, {G::H, 1}}),
        seq({{G::Z, 0}, {G::Z, 1}}),
        seq({}),
    },
};

}  // namespace

const Template& cx_rewrite(BasisState control, BasisState target) {
  return kCxTable[column(control)][column(target)];
}

const Template& swap_rewrite(BasisState top, BasisState bottom) {
  return kSwapTable[column(top)][column(bottom)];
}

std::vector<Instruction> instantiate(const Template& t, int q0, int q1) {
  const std::array<int, 2> wire = {q0, q1};
  std::vector<Instruction> out;
  out.reserve(t.size());
  for (const auto& g : t) {
    const int a = wire[static_cast<std::size_t>(g.w0)];
    switch (g.kind) {
      case G::X:
        out.push_back(gates::x(a));
        break;
      case G::Z:
        out.push_back(gates::z(a));
        break;
      case G::H:
        out.push_back(gates::h(a));
        break;
      case G::CX:
        out.push_back(gates::cx(a, wire[static_cast<std::size_t>(g.w1)]));
        break;
      case G::Swap:
        out.push_back(gates::swap(a, wire[static_cast<std::size_t>(g.w1)]));
        break;
      case G::SwapZ:
        out.push_back(gates::swapz(a, wire[static_cast<std::size_t>(g.w1)]));
        break;
      default:
        throw std::logic_error("unexpected gate kind in rewrite template");
    }
  }
  return out;
}

}  // namespace rpo
