#include "rpo/qasm.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

namespace rpo {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(fmt::format("{}:{}: {}", line, column, message)), line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& message, const Token& at) const {
    throw ParseError(message, at.line, at.column);
  }

  Token expect_symbol(std::string_view sym) {
    if (current_.type != Tok::Symbol || current_.text != sym) {
      fail(fmt::format("expected '{}' but found {}", sym, describe(current_)), current_);
    }
    return next();
  }

  bool accept_symbol(std::string_view sym) {
    if (current_.type == Tok::Symbol && current_.text == sym) {
      advance();
      return true;
    }
    return false;
  }

  Token expect_ident() {
    if (current_.type != Tok::Ident) fail("expected identifier but found " + describe(current_), current_);
    return next();
  }

  static std::string describe(const Token& t) {
    switch (t.type) {
      case Tok::End:
        return "end of input";
      case Tok::Number:
        return "number '" + t.text + "'";
      case Tok::Ident:
        return "identifier '" + t.text + "'";
      case Tok::Symbol:
        return "'" + t.text + "'";
    }
    return "token";
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '\n') {
        ++line_;
        column_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++column_;
        ++pos_;
      } else if (ch == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_space_and_comments();
    current_ = Token{};
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= src_.size()) {
      current_.type = Tok::End;
      return;
    }
    const std::size_t start = pos_;
    const char ch = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      current_.type = Tok::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
        ++pos_;
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t look = pos_ + 1;
        if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
        if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
          pos_ = look;
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
      }
      current_.type = Tok::Number;
    } else if (ch == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      pos_ += 2;
      current_.type = Tok::Symbol;
    } else {
      ++pos_;
      current_.type = Tok::Symbol;
    }
    current_.text = std::string(src_.substr(start, pos_ - start));
    column_ += static_cast<int>(pos_ - start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

struct GateSpelling {
  GateKind kind;
  bool all_open;  // the `o` prefix: every control open
};

const std::unordered_map<std::string, GateSpelling>& spellings() {
  static const std::unordered_map<std::string, GateSpelling> table = [] {
    std::unordered_map<std::string, GateSpelling> t;
    for (std::size_t k = 0; k < kNumGateKinds; ++k) {
      const auto kind = static_cast<GateKind>(k);
      if (kind == GateKind::Measure) continue;
      t.emplace(std::string(gate_name(kind)), GateSpelling{kind, false});
    }
    t.emplace("ocx", GateSpelling{GateKind::CX, true});
    t.emplace("occx", GateSpelling{GateKind::CCX, true});
    return t;
  }();
  return table;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  Circuit run() {
    while (lex_.peek().type != Tok::End) statement();
    Circuit c(n_qubits_.value_or(0), n_clbits_.value_or(0));
    for (auto& [inst, at] : pending_) {
      try {
        c.append(std::move(inst));
      } catch (const CircuitError& e) {
        lex_.fail(e.what(), at);
      }
    }
    try {
      c.validate_terminal_measurements();
    } catch (const CircuitError& e) {
      throw ParseError(e.what(), last_.line, last_.column);
    }
    return c;
  }

 private:
  void statement() {
    const Token head = lex_.expect_ident();
    last_ = head;
    if (head.text == "qreg" || head.text == "creg") {
      declare(head);
      return;
    }
    if (head.text == "measure") {
      const int q = operand(qreg_name_, head);
      lex_.expect_symbol("->");
      const int c = operand(creg_name_, head);
      lex_.expect_symbol(";");
      pending_.emplace_back(gates::measure(q, c), head);
      return;
    }
    const auto it = spellings().find(head.text);
    if (it == spellings().end()) lex_.fail("unknown statement '" + head.text + "'", head);
    const GateSpelling spelling = it->second;

    std::optional<std::string> polarity;
    if (lex_.accept_symbol("[")) {
      if (!supports_open_controls(spelling.kind) || spelling.all_open) {
        lex_.fail("control polarity list not allowed on '" + head.text + "'", head);
      }
      const Token pol = lex_.expect_ident();
      for (char ch : pol.text) {
        if (ch != 'o' && ch != 'c') lex_.fail("polarity list may only contain 'o' and 'c'", pol);
      }
      polarity = pol.text;
      lex_.expect_symbol("]");
    }

    std::vector<double> params;
    if (lex_.accept_symbol("(")) {
      params.push_back(expr());
      while (lex_.accept_symbol(",")) params.push_back(expr());
      lex_.expect_symbol(")");
    }

    std::vector<int> qubits{operand(qreg_name_, head)};
    while (lex_.accept_symbol(",")) qubits.push_back(operand(qreg_name_, head));
    lex_.expect_symbol(";");

    std::uint32_t open = 0;
    const std::size_t n_controls = control_count(spelling.kind, qubits.size());
    if (spelling.all_open) open = (1u << n_controls) - 1u;
    if (polarity) {
      if (polarity->size() != n_controls) {
        lex_.fail(fmt::format("polarity list has {} entries but '{}' has {} control(s)",
                              polarity->size(), head.text, n_controls),
                  head);
      }
      for (std::size_t i = 0; i < polarity->size(); ++i) {
        if ((*polarity)[i] == 'o') open |= 1u << i;
      }
    }
    if (params.size() != param_count(spelling.kind)) {
      lex_.fail(fmt::format("'{}' takes {} parameter(s), got {}", head.text,
                            param_count(spelling.kind), params.size()),
                head);
    }
    pending_.emplace_back(Instruction(spelling.kind, std::move(qubits), std::move(params), {}, open),
                          head);
  }

  void declare(const Token& head) {
    const Token name = lex_.expect_ident();
    lex_.expect_symbol("[");
    const int size = integer();
    lex_.expect_symbol("]");
    lex_.expect_symbol(";");
    auto& slot = head.text == "qreg" ? n_qubits_ : n_clbits_;
    if (slot) lex_.fail("only one " + head.text + " declaration is supported", head);
    if (!pending_.empty()) lex_.fail("register declarations must precede instructions", head);
    slot = size;
    (head.text == "qreg" ? qreg_name_ : creg_name_) = name.text;
  }

  int operand(const std::string& reg, const Token& stmt) {
    const Token name = lex_.expect_ident();
    if (reg.empty() || name.text != reg) {
      lex_.fail("unknown register '" + name.text + "' in '" + stmt.text + "'", name);
    }
    lex_.expect_symbol("[");
    const int index = integer();
    lex_.expect_symbol("]");
    return index;
  }

  int integer() {
    const Token t = lex_.next();
    int value = 0;
    const auto* end = t.text.data() + t.text.size();
    auto [ptr, ec] = std::from_chars(t.text.data(), end, value);
    if (t.type != Tok::Number || ec != std::errc() || ptr != end) {
      lex_.fail("expected non-negative integer but found " + Lexer::describe(t), t);
    }
    return value;
  }

  double expr() {
    double value = term();
    while (true) {
      if (lex_.accept_symbol("+")) {
        value += term();
      } else if (lex_.accept_symbol("-")) {
        value -= term();
      } else {
        return value;
      }
    }
  }

  double term() {
    double value = factor();
    while (true) {
      if (lex_.accept_symbol("*")) {
        value *= factor();
      } else if (lex_.peek().type == Tok::Symbol && lex_.peek().text == "/") {
        const Token slash = lex_.next();
        const double d = factor();
        if (d == 0.0) lex_.fail("division by zero in angle expression", slash);
        value /= d;
      } else {
        return value;
      }
    }
  }

  double factor() {
    if (lex_.accept_symbol("-")) return -factor();
    if (lex_.accept_symbol("+")) return factor();
    if (lex_.accept_symbol("(")) {
      const double v = expr();
      lex_.expect_symbol(")");
      return v;
    }
    const Token t = lex_.next();
    if (t.type == Tok::Ident && t.text == "pi") return kPi;
    if (t.type == Tok::Number) {
      char* end = nullptr;
      const double v = std::strtod(t.text.c_str(), &end);
      if (end != t.text.c_str() + t.text.size()) lex_.fail("malformed number '" + t.text + "'", t);
      return v;
    }
    lex_.fail("expected angle expression but found " + Lexer::describe(t), t);
  }

  Lexer lex_;
  Token last_;
  std::optional<int> n_qubits_;
  std::optional<int> n_clbits_;
  std::string qreg_name_;
  std::string creg_name_;
  std::vector<std::pair<Instruction, Token>> pending_;
};

}  // namespace

Circuit parse_program(std::string_view text) { return Parser(text).run(); }

std::string format_angle(double radians) {
  if (radians == 0.0) return "0";
  const double sign = radians < 0 ? -1.0 : 1.0;
  const double mag = std::fabs(radians);
  static constexpr std::array<int, 12> kDenominators = {1, 2, 3, 4, 6, 8, 12, 16, 32, 64, 128, 256};
  for (int m : kDenominators) {
    const double k = std::round(mag * m / kPi);
    if (k < 1.0 || k > 1e6) continue;
    if (std::fabs(mag - k * kPi / m) > 1e-12) continue;
    // Smallest denominator wins, so k and m are coprime here.
    std::string s = sign < 0 ? "-" : "";
    if (k != 1.0) s += fmt::format("{}*", static_cast<long long>(k));
    s += "pi";
    if (m != 1) s += fmt::format("/{}", m);
    return s;
  }
  return fmt::format("{:.17g}", radians);
}

std::string emit_program(const Circuit& c) {
  std::string out = fmt::format("qreg q[{}];\n", c.num_qubits());
  if (c.num_clbits() > 0) out += fmt::format("creg c[{}];\n", c.num_clbits());
  for (const auto& inst : c) {
    if (inst.kind == GateKind::Measure) {
      out += fmt::format("measure q[{}] -> c[{}];\n", inst.qubits[0], inst.clbits[0]);
      continue;
    }
    const std::size_t n_controls = inst.num_controls();
    const std::uint32_t all_open = n_controls == 0 ? 0 : (1u << n_controls) - 1u;
    if (inst.open_controls != 0 && inst.open_controls == all_open &&
        (inst.kind == GateKind::CX || inst.kind == GateKind::CCX)) {
      out += 'o';
      out += gate_name(inst.kind);
    } else {
      out += gate_name(inst.kind);
      if (inst.open_controls != 0) {
        out += '[';
        for (std::size_t i = 0; i < n_controls; ++i) out += inst.is_open(i) ? 'o' : 'c';
        out += ']';
      }
    }
    if (!inst.params.empty()) {
      out += '(';
      for (std::size_t i = 0; i < inst.params.size(); ++i) {
        if (i) out += ',';
        out += format_angle(inst.params[i]);
      }
      out += ')';
    }
    for (std::size_t i = 0; i < inst.qubits.size(); ++i) {
      out += i == 0 ? " " : ",";
      out += fmt::format("q[{}]", inst.qubits[i]);
    }
    out += ";\n";
  }
  return out;
}

}  // namespace rpo
