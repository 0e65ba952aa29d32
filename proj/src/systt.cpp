#include "osa/systt.hpp"

#include <cctype>
#include <stdexcept>
#include <utility>
#include <variant>

namespace osa {

using Kind = TermNode::Kind;

Term t_var(int index, std::string name) {
  auto n = std::make_shared<TermNode>();
  n->kind = Kind::Var;
  n->index = index;
  n->name = std::move(name);
  return n;
}

Term t_lam(std::string name, Term body) {
  auto n = std::make_shared<TermNode>();
  n->kind = Kind::Lam;
  n->name = std::move(name);
  n->a = std::move(body);
  return n;
}

Term t_app(Term f, Term x) {
  auto n = std::make_shared<TermNode>();
  n->kind = Kind::App;
  n->a = std::move(f);
  n->b = std::move(x);
  return n;
}

Term t_zero() {
  auto n = std::make_shared<TermNode>();
  n->kind = Kind::Zero;
  return n;
}

Term t_suc(Term t) {
  auto n = std::make_shared<TermNode>();
  n->kind = Kind::Suc;
  n->a = std::move(t);
  return n;
}

Term t_rec(Term count, Term base, Term step) {
  auto n = std::make_shared<TermNode>();
  n->kind = Kind::Rec;
  n->a = std::move(count);
  n->b = std::move(base);
  n->c = std::move(step);
  return n;
}

Term t_phi() {
  auto n = std::make_shared<TermNode>();
  n->kind = Kind::Phi;
  return n;
}

Term t_numeral(Nat n) {
  Term t = t_zero();
  for (Nat i = 0; i < n; ++i) t = t_suc(std::move(t));
  return t;
}

bool term_eq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Var: return a->index == b->index;
    case Kind::Zero:
    case Kind::Phi: return true;
    case Kind::Lam:
    case Kind::Suc: return term_eq(a->a, b->a);
    case Kind::App: return term_eq(a->a, b->a) && term_eq(a->b, b->b);
    case Kind::Rec:
      return term_eq(a->a, b->a) && term_eq(a->b, b->b) &&
             term_eq(a->c, b->c);
  }
  return false;
}

std::optional<Nat> numeral_value(const Term& t) {
  Nat n = 0;
  const TermNode* cur = t.get();
  while (cur) {
    if (cur->kind == Kind::Zero) return n;
    if (cur->kind != Kind::Suc) return std::nullopt;
    ++n;
    cur = cur->a.get();
  }
  return std::nullopt;
}

namespace {

bool is_atom_like(const Term& t) {
  if (numeral_value(t)) return true;
  return t->kind == Kind::Var || t->kind == Kind::Phi;
}

std::string render_atom(const Term& t);

std::string render_inner(const Term& t) {
  if (auto n = numeral_value(t)) return std::to_string(*n);
  switch (t->kind) {
    case Kind::Var: return t->name;
    case Kind::Phi: return "phi";
    case Kind::Suc: return "suc " + render_atom(t->a);
    case Kind::App: return "app " + render_atom(t->a) + " " + render_atom(t->b);
    case Kind::Rec:
      return "rec " + render_atom(t->a) + " " + render_atom(t->b) + " " +
             render_atom(t->c);
    case Kind::Lam: {
      std::string binders = t->name;
      Term body = t->a;
      while (body->kind == Kind::Lam) {
        binders += " " + body->name;
        body = body->a;
      }
      return "lam " + binders + ". " + render_inner(body);
    }
    case Kind::Zero: return "0";
  }
  return "?";
}

std::string render_atom(const Term& t) {
  if (is_atom_like(t)) return render_inner(t);
  return "(" + render_inner(t) + ")";
}

}  // namespace

std::string render_term(const Term& t) { return render_inner(t); }

Type ty_base() { return std::make_shared<TypeNode>(); }

Type ty_arrow(Type from, Type to) {
  auto n = std::make_shared<TypeNode>();
  n->from = std::move(from);
  n->to = std::move(to);
  return n;
}

bool type_eq(const Type& a, const Type& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  const bool a_base = !a->from;
  const bool b_base = !b->from;
  if (a_base != b_base) return false;
  if (a_base) return true;
  return type_eq(a->from, b->from) && type_eq(a->to, b->to);
}

std::string render_type(const Type& t) {
  if (!t->from) return "0";
  const std::string lhs = t->from->from
                              ? "(" + render_type(t->from) + ")"
                              : render_type(t->from);
  return lhs + " -> " + render_type(t->to);
}

Type realizer_type() {
  return ty_arrow(ty_arrow(ty_base(), ty_base()),
                  ty_arrow(ty_base(), ty_base()));
}

// --- parser -----------------------------------------------------------------

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;
  std::vector<std::string> binders;  // innermost last

  void skip_space() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool at_end() {
    skip_space();
    return pos >= text.size();
  }

  bool peek_char(char c) {
    skip_space();
    return pos < text.size() && text[pos] == c;
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '\'';
  }

  std::string peek_word() {
    skip_space();
    std::size_t i = pos;
    std::string out;
    while (i < text.size() && is_name_char(text[i])) out += text[i++];
    return out;
  }

  void consume_word(const std::string& w) { pos += w.size(); }

  Term fail(ParseOutcome& out, const std::string& message) {
    if (out.error.empty()) {
      out.error = message;
      out.offset = pos;
    }
    return nullptr;
  }

  Term resolve_name(const std::string& name, ParseOutcome& out) {
    for (std::size_t i = binders.size(); i-- > 0;) {
      if (binders[i] == name) {
        return t_var(static_cast<int>(binders.size() - 1 - i), name);
      }
    }
    if (name == "phi") return t_phi();
    return fail(out, "unbound name '" + name + "'");
  }

  Term parse_atom(ParseOutcome& out) {
    skip_space();
    if (peek_char('(')) {
      ++pos;
      Term t = parse_term(out);
      if (!t) return nullptr;
      if (!peek_char(')')) return fail(out, "expected ')'");
      ++pos;
      return t;
    }
    std::string w = peek_word();
    if (w.empty()) return fail(out, "expected a term");
    if (std::isdigit(static_cast<unsigned char>(w[0]))) {
      for (char c : w) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
          return fail(out, "malformed numeral '" + w + "'");
        }
      }
      consume_word(w);
      return t_numeral(std::stoull(w));
    }
    consume_word(w);
    return resolve_name(w, out);
  }

  Term parse_term(ParseOutcome& out) {
    skip_space();
    std::string w = peek_word();
    if (w == "lam") {
      consume_word(w);
      std::vector<std::string> names;
      for (;;) {
        std::string name = peek_word();
        if (name.empty()) break;
        if (std::isdigit(static_cast<unsigned char>(name[0]))) {
          return fail(out, "binder names cannot start with a digit");
        }
        consume_word(name);
        names.push_back(name);
      }
      if (names.empty()) return fail(out, "lam needs at least one binder");
      if (!peek_char('.')) return fail(out, "expected '.' after binders");
      ++pos;
      for (const auto& n : names) binders.push_back(n);
      Term body = parse_term(out);
      binders.resize(binders.size() - names.size());
      if (!body) return nullptr;
      for (std::size_t i = names.size(); i-- > 0;) {
        body = t_lam(names[i], std::move(body));
      }
      return body;
    }
    if (w == "app") {
      consume_word(w);
      Term f = parse_atom(out);
      if (!f) return nullptr;
      Term x = parse_atom(out);
      if (!x) return nullptr;
      return t_app(std::move(f), std::move(x));
    }
    if (w == "suc") {
      consume_word(w);
      Term t = parse_atom(out);
      if (!t) return nullptr;
      return t_suc(std::move(t));
    }
    if (w == "rec") {
      consume_word(w);
      Term count = parse_atom(out);
      if (!count) return nullptr;
      Term base = parse_atom(out);
      if (!base) return nullptr;
      Term step = parse_atom(out);
      if (!step) return nullptr;
      return t_rec(std::move(count), std::move(base), std::move(step));
    }
    return parse_atom(out);
  }
};

}  // namespace

ParseOutcome parse_term(const std::string& text) {
  ParseOutcome out;
  Parser parser{text, 0, {}};
  Term t = parser.parse_term(out);
  if (t && !parser.at_end()) {
    out.error = "trailing input";
    out.offset = parser.pos;
    return out;
  }
  out.term = std::move(t);
  return out;
}

// --- typing -----------------------------------------------------------------

namespace {

using TypeOrError = std::variant<Type, std::string>;

TypeOrError synth(std::vector<Type>& ctx, const Term& t);

std::optional<std::string> check(std::vector<Type>& ctx, const Term& t,
                                 const Type& expected) {
  if (t->kind == Kind::Lam) {
    if (!expected->from) {
      return "a function cannot have the base type";
    }
    ctx.push_back(expected->from);
    auto err = check(ctx, t->a, expected->to);
    ctx.pop_back();
    return err;
  }
  auto result = synth(ctx, t);
  if (auto* err = std::get_if<std::string>(&result)) return *err;
  const Type& got = std::get<Type>(result);
  if (!type_eq(got, expected)) {
    return "expected " + render_type(expected) + ", found " +
           render_type(got);
  }
  return std::nullopt;
}

TypeOrError synth(std::vector<Type>& ctx, const Term& t) {
  switch (t->kind) {
    case Kind::Var: {
      const auto i = static_cast<std::size_t>(t->index);
      if (i >= ctx.size()) return std::string("unbound variable");
      return ctx[ctx.size() - 1 - i];
    }
    case Kind::Phi: return ty_arrow(ty_base(), ty_base());
    case Kind::Zero: return ty_base();
    case Kind::Suc: {
      if (auto err = check(ctx, t->a, ty_base())) return *err;
      return ty_base();
    }
    case Kind::App: {
      auto fn = synth(ctx, t->a);
      if (auto* err = std::get_if<std::string>(&fn)) return *err;
      const Type& fn_ty = std::get<Type>(fn);
      if (!fn_ty->from) return std::string("applying a base-type term");
      if (auto err = check(ctx, t->b, fn_ty->from)) return *err;
      return fn_ty->to;
    }
    case Kind::Rec: {
      if (auto err = check(ctx, t->a, ty_base())) return *err;
      auto base = synth(ctx, t->b);
      if (auto* err = std::get_if<std::string>(&base)) return *err;
      const Type& sigma = std::get<Type>(base);
      const Type step_ty =
          ty_arrow(ty_base(), ty_arrow(sigma, sigma));
      if (auto err = check(ctx, t->c, step_ty)) return *err;
      return sigma;
    }
    case Kind::Lam:
      return std::string("cannot infer the type of a bare function");
  }
  return std::string("malformed term");
}

}  // namespace

std::optional<std::string> check_type(const Term& t, const Type& expected) {
  std::vector<Type> ctx;
  return check(ctx, t, expected);
}

// --- reduction --------------------------------------------------------------

namespace {

// Substitutes the closed term `arg` for variable `depth` in `t`.  Arguments
// substituted during runs are closed (no free variables besides phi), so no
// index shifting of the argument is needed; variables above the cut shift
// down by one.
Term subst(const Term& t, int depth, const Term& arg) {
  switch (t->kind) {
    case Kind::Var:
      if (t->index == depth) return arg;
      if (t->index > depth) return t_var(t->index - 1, t->name);
      return t;
    case Kind::Lam: return t_lam(t->name, subst(t->a, depth + 1, arg));
    case Kind::App:
      return t_app(subst(t->a, depth, arg), subst(t->b, depth, arg));
    case Kind::Suc: return t_suc(subst(t->a, depth, arg));
    case Kind::Rec:
      return t_rec(subst(t->a, depth, arg), subst(t->b, depth, arg),
                   subst(t->c, depth, arg));
    case Kind::Zero:
    case Kind::Phi: return t;
  }
  return t;
}

ReduceOutcome reduced(Term next) {
  ReduceOutcome out;
  out.tag = ReduceOutcome::Tag::Reduced;
  out.next = std::move(next);
  return out;
}

ReduceOutcome ill(std::string note) {
  ReduceOutcome out;
  out.tag = ReduceOutcome::Tag::Ill;
  out.note = std::move(note);
  return out;
}

}  // namespace

ReduceOutcome reduce_step(const Term& t) {
  if (auto n = numeral_value(t)) {
    ReduceOutcome out;
    out.tag = ReduceOutcome::Tag::Normal;
    out.question = *n;
    return out;
  }
  switch (t->kind) {
    case Kind::Var: return ill("free variable in redex position");
    case Kind::Phi: return ill("bare phi has function type");
    case Kind::Lam: return ill("bare function at base type");
    case Kind::Zero: return ill("unreachable");  // numeral case above
    case Kind::Suc: {
      auto inner = reduce_step(t->a);
      if (inner.tag == ReduceOutcome::Tag::Reduced) {
        return reduced(t_suc(inner.next));
      }
      if (inner.tag == ReduceOutcome::Tag::Normal) {
        return ill("unreachable");  // then t itself was a numeral
      }
      return inner;
    }
    case Kind::App: {
      const Term& f = t->a;
      if (f->kind == Kind::Phi) {
        if (auto n = numeral_value(t->b)) {
          ReduceOutcome out;
          out.tag = ReduceOutcome::Tag::OracleRedex;
          out.question = *n;
          return out;
        }
        auto inner = reduce_step(t->b);
        if (inner.tag == ReduceOutcome::Tag::Reduced) {
          return reduced(t_app(t->a, inner.next));
        }
        return inner;
      }
      if (f->kind == Kind::Lam) {
        return reduced(subst(f->a, 0, t->b));
      }
      auto inner = reduce_step(f);
      if (inner.tag == ReduceOutcome::Tag::Reduced) {
        return reduced(t_app(inner.next, t->b));
      }
      if (inner.tag == ReduceOutcome::Tag::Normal) {
        return ill("applying a numeral");
      }
      return inner;
    }
    case Kind::Rec: {
      if (auto n = numeral_value(t->a)) {
        if (*n == 0) return reduced(t->b);
        Term pred = t_numeral(*n - 1);
        return reduced(
            t_app(t_app(t->c, pred), t_rec(pred, t->b, t->c)));
      }
      auto inner = reduce_step(t->a);
      if (inner.tag == ReduceOutcome::Tag::Reduced) {
        return reduced(t_rec(inner.next, t->b, t->c));
      }
      if (inner.tag == ReduceOutcome::Tag::Normal) {
        return ill("unreachable");  // a numeral count is handled above
      }
      return inner;
    }
  }
  return ill("malformed term");
}

Term answer_oracle_redex(const Term& t, Nat y) {
  if (numeral_value(t)) return nullptr;
  switch (t->kind) {
    case Kind::Suc: {
      Term inner = answer_oracle_redex(t->a, y);
      return inner ? t_suc(std::move(inner)) : nullptr;
    }
    case Kind::App: {
      const Term& f = t->a;
      if (f->kind == Kind::Phi) {
        if (numeral_value(t->b)) return t_numeral(y);
        Term inner = answer_oracle_redex(t->b, y);
        return inner ? t_app(t->a, std::move(inner)) : nullptr;
      }
      if (f->kind == Kind::Lam) return nullptr;  // beta comes first
      Term inner = answer_oracle_redex(f, y);
      return inner ? t_app(std::move(inner), t->b) : nullptr;
    }
    case Kind::Rec: {
      if (numeral_value(t->a)) return nullptr;  // recursor step comes first
      Term inner = answer_oracle_redex(t->a, y);
      return inner ? t_rec(std::move(inner), t->b, t->c) : nullptr;
    }
    default: return nullptr;
  }
}

// --- the machine ------------------------------------------------------------

std::string repr(const TermReg& r) {
  return "(" + r.phase + "," + render_term(r.term) + "," + repr(r.x) + ")";
}

namespace {

constexpr const char* kComputing = "cc";
constexpr const char* kAsked = "cq";

}  // namespace

ApproxSpec<Nat, Nat, Nat, TermReg> term_machine(const Term& t) {
  if (auto err = check_type(t, realizer_type())) {
    throw std::invalid_argument("term does not execute: " + *err);
  }
  using State = MachineState<TermReg, Nat>;
  ApproxSpec<Nat, Nat, Nat, TermReg> m;
  m.osa.is_query = [](const State& s) {
    return !s.cell && s.reg.phase == kAsked;
  };
  m.osa.is_end = [](const State& s) {
    return s.cell.has_value() && s.reg.phase == kAsked &&
           numeral_value(s.reg.term).has_value();
  };
  m.osa.rho = [t](const Nat& u) {
    return TermReg{kComputing, t_app(t_app(t, t_phi()), t_numeral(u)), 0};
  };
  m.osa.xi = [](const TermReg& r) { return r.x; };
  m.osa.pi = [](const State& s) { return s.reg.x; };
  m.osa.step = [](const State& s) -> std::optional<State> {
    if (s.reg.phase == kComputing) {
      auto r = reduce_step(s.reg.term);
      switch (r.tag) {
        case ReduceOutcome::Tag::Reduced:
          return State{TermReg{kComputing, r.next, s.reg.x}, s.cell};
        case ReduceOutcome::Tag::OracleRedex:
        case ReduceOutcome::Tag::Normal:
          // The next question is the redex's numeral, or the term's own
          // value once it is normal; either way the stale answer is dropped.
          return State{TermReg{kAsked, s.reg.term, r.question}, std::nullopt};
        case ReduceOutcome::Tag::Ill: return std::nullopt;
      }
      return std::nullopt;
    }
    if (s.reg.phase == kAsked && s.cell &&
        !numeral_value(s.reg.term).has_value()) {
      Term next = answer_oracle_redex(s.reg.term, *s.cell);
      if (!next) return std::nullopt;
      return State{TermReg{kComputing, next, s.reg.x}, s.cell};
    }
    return std::nullopt;
  };
  return m;
}

TermRun normalize_with_oracle(const Term& t,
                              const std::function<Nat(Nat)>& f, Nat u,
                              Nat fuel) {
  auto machine = term_machine(t);
  Oracle<Nat, Nat> oracle(f);
  TermRun out;
  out.outcome = run(machine.osa, oracle, u, fuel);
  out.status = out.outcome.status;
  if (out.status == RunStatus::Terminated) {
    const auto& fin = out.outcome.final_state();
    out.pair = std::pair<Nat, Nat>{fin.reg.x, *fin.cell};
  }
  return out;
}

}  // namespace osa
