#include "osa/oracle_text.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <vector>

namespace osa {

namespace {

OracleParse failure(std::string message) {
  OracleParse out;
  out.error = std::move(message);
  return out;
}

bool parse_nat(const std::string& s, Nat& out) {
  if (s.empty()) return false;
  Nat value = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    value = value * 10 + static_cast<Nat>(c - '0');
  }
  out = value;
  return true;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

OracleParse parse_table(const std::string& body) {
  auto table = std::make_shared<std::map<Nat, Nat>>();
  Nat fallback = 0;
  for (const auto& item : split(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      return failure("table entries look like q=a: '" + item + "'");
    }
    const std::string lhs = item.substr(0, eq);
    const std::string rhs = item.substr(eq + 1);
    Nat value = 0;
    if (!parse_nat(rhs, value)) {
      return failure("malformed table value '" + rhs + "'");
    }
    if (lhs == "default") {
      fallback = value;
      continue;
    }
    Nat question = 0;
    if (!parse_nat(lhs, question)) {
      return failure("malformed table question '" + lhs + "'");
    }
    (*table)[question] = value;
  }
  OracleParse out;
  out.fn = [table, fallback](Nat q) {
    auto it = table->find(q);
    return it == table->end() ? fallback : it->second;
  };
  return out;
}

// Expression mini-language over the question q.  Precedence, loosest first:
// ternary, comparison, additive, multiplicative, atoms.
struct ExprParser {
  using Fn = std::function<Nat(Nat)>;

  const std::string& text;
  std::size_t pos = 0;
  std::string error;

  void skip_space() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool take(const std::string& tok) {
    skip_space();
    if (text.compare(pos, tok.size(), tok) != 0) return false;
    pos += tok.size();
    return true;
  }

  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }

  Fn fail(const std::string& message) {
    if (error.empty()) error = message;
    return nullptr;
  }

  Fn parse_ternary() {
    Fn cond = parse_comparison();
    if (!cond) return nullptr;
    if (!take("?")) return cond;
    Fn then_branch = parse_ternary();
    if (!then_branch) return nullptr;
    if (!take(":")) return fail("expected ':'");
    Fn else_branch = parse_ternary();
    if (!else_branch) return nullptr;
    return [cond, then_branch, else_branch](Nat q) {
      return cond(q) != 0 ? then_branch(q) : else_branch(q);
    };
  }

  Fn parse_comparison() {
    Fn lhs = parse_additive();
    if (!lhs) return nullptr;
    static const std::pair<const char*, int> ops[] = {
        {"==", 0}, {"!=", 1}, {"<=", 2}, {">=", 3}, {"<", 4}, {">", 5}};
    for (const auto& [tok, op] : ops) {
      if (take(tok)) {
        Fn rhs = parse_additive();
        if (!rhs) return nullptr;
        return [lhs, rhs, op = op](Nat q) -> Nat {
          const Nat a = lhs(q);
          const Nat b = rhs(q);
          switch (op) {
            case 0: return a == b;
            case 1: return a != b;
            case 2: return a <= b;
            case 3: return a >= b;
            case 4: return a < b;
            default: return a > b;
          }
        };
      }
    }
    return lhs;
  }

  Fn parse_additive() {
    Fn acc = parse_multiplicative();
    if (!acc) return nullptr;
    for (;;) {
      if (take("+")) {
        Fn rhs = parse_multiplicative();
        if (!rhs) return nullptr;
        acc = [lhs = acc, rhs](Nat q) { return lhs(q) + rhs(q); };
      } else if (peek() == '-') {
        ++pos;
        Fn rhs = parse_multiplicative();
        if (!rhs) return nullptr;
        acc = [lhs = acc, rhs](Nat q) {
          const Nat a = lhs(q);
          const Nat b = rhs(q);
          return a > b ? a - b : 0;
        };
      } else {
        return acc;
      }
    }
  }

  Fn parse_multiplicative() {
    Fn acc = parse_atom();
    if (!acc) return nullptr;
    for (;;) {
      if (take("*")) {
        Fn rhs = parse_atom();
        if (!rhs) return nullptr;
        acc = [lhs = acc, rhs](Nat q) { return lhs(q) * rhs(q); };
      } else if (take("/")) {
        Fn rhs = parse_atom();
        if (!rhs) return nullptr;
        acc = [lhs = acc, rhs](Nat q) {
          const Nat b = rhs(q);
          return b == 0 ? 0 : lhs(q) / b;
        };
      } else if (take("%")) {
        Fn rhs = parse_atom();
        if (!rhs) return nullptr;
        acc = [lhs = acc, rhs](Nat q) {
          const Nat b = rhs(q);
          return b == 0 ? 0 : lhs(q) % b;
        };
      } else {
        return acc;
      }
    }
  }

  Fn parse_atom() {
    skip_space();
    if (take("(")) {
      Fn inner = parse_ternary();
      if (!inner) return nullptr;
      if (!take(")")) return fail("expected ')'");
      return inner;
    }
    if (pos < text.size() && text[pos] == 'q') {
      ++pos;
      return [](Nat q) { return q; };
    }
    std::string digits;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits += text[pos++];
    }
    if (digits.empty()) return fail("expected a number, q, or '('");
    Nat value = 0;
    parse_nat(digits, value);
    return [value](Nat) { return value; };
  }
};

OracleParse parse_expr(const std::string& body) {
  ExprParser parser{body, 0, {}};
  auto fn = parser.parse_ternary();
  if (!fn) return failure("expression error: " + parser.error);
  parser.skip_space();
  if (parser.pos != body.size()) {
    return failure("expression error: trailing input at offset " +
                   std::to_string(parser.pos));
  }
  OracleParse out;
  out.fn = std::move(fn);
  return out;
}

}  // namespace

OracleParse parse_nat_oracle(const std::string& text) {
  if (text == "id") {
    OracleParse out;
    out.fn = [](Nat q) { return q; };
    return out;
  }
  if (text.rfind("table:", 0) == 0) return parse_table(text.substr(6));
  if (text.rfind("expr:", 0) == 0) return parse_expr(text.substr(5));
  Nat constant = 0;
  if (parse_nat(text, constant)) {
    OracleParse out;
    out.fn = [constant](Nat) { return constant; };
    return out;
  }
  return failure("unrecognized oracle description '" + text +
                 "' (expected id, a number, table:..., or expr:...)");
}

}  // namespace osa
